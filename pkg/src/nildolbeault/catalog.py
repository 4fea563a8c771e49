"""Built-in example algebras and the JSON file format.

File indices are 1-based.  ``complex_basis`` rows span g^{0,1} (the span of
the conjugates Xbar_k), matching :func:`check_moduli_point`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .algebra import (ComplexStructure, ComplexSubspace, LieAlgebra, is_integrable_structure,
                      real_form_from_split, structure_to_subspace, validate_algebra)
from .linalg import Mat
from .representations import Representation
from .scalars import ONE, Gauss, as_gauss, fmt_rational, parse_gauss, parse_rational

__all__ = ["CatalogEntry", "CatalogError", "ParsedInput", "load_builtin", "builtin_names",
           "parse_file", "parse_data", "serialize", "serialize_module", "parse_module",
           "dumps"]


class CatalogError(ValueError):
    """Malformed or invalid input; ``problems`` lists each failure with its location."""

    def __init__(self, problems):
        self.problems = list(problems) if not isinstance(problems, str) else [problems]
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    structures: tuple = ()          # (label, ComplexStructure) pairs
    flags: frozenset = frozenset()
    provenance: str = ""

    @property
    def J(self) -> Optional[ComplexStructure]:
        return self.structures[0][1] if self.structures else None

    @property
    def counterexample(self):
        return "counterexample" in self.flags


def _std_J(dim):
    return ComplexStructure.from_images(dim, {2 * k: {2 * k + 1: 1} for k in range(dim // 2)})


def _kt_algebra():
    return LieAlgebra.from_brackets(4, {(0, 1): {2: 1}}, "kodaira-thurston")


def _abelian(name, dim):
    return CatalogEntry(name, LieAlgebra.abelian(dim, name), (("standard", _std_J(dim)),),
                        frozenset({"abelian"}), f"real torus algebra R^{dim}")


def _heisenberg3():
    L = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, "heisenberg3")
    return CatalogEntry("heisenberg3", L, (), frozenset({"odd-dimensional"}),
                        "real Heisenberg algebra [e1,e2]=e3")


def _kodaira_thurston():
    J = ComplexStructure.from_images(4, {0: {1: 1}, 2: {3: 1}})
    return CatalogEntry("kodaira-thurston", _kt_algebra(), (("standard", J),), frozenset(),
                        "heisenberg3 + R, [e1,e2]=e3, J: e1->e2, e3->e4")


def _kt_nonint():
    J = ComplexStructure.from_images(4, {0: {2: 1}, 1: {3: 1}})
    L = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}}, "kt-nonintegrable-J")
    return CatalogEntry("kt-nonintegrable-J", L, (("nonintegrable", J),),
                        frozenset({"counterexample"}), "Kodaira-Thurston algebra with J: e1->e3, e2->e4")


def _iwasawa():
    L, J = real_form_from_split(3, {(0, 1): {2: ONE}}, "iwasawa")
    return CatalogEntry("iwasawa", L, (("standard", J),), frozenset({"complex-parallelisable"}),
                        "complex Heisenberg algebra [X1,X2]=X3, real basis (a1,Ja1,a2,Ja2,a3,Ja3)")


_BUILTINS = {
    "heisenberg3": _heisenberg3,
    "kodaira-thurston": _kodaira_thurston,
    "iwasawa": _iwasawa,
    "kt-nonintegrable-J": _kt_nonint,
}
_ABELIAN = re.compile(r"^abelian-(\d+)$")


def builtin_names(max_abelian: int = 8) -> list:
    return [f"abelian-{d}" for d in range(2, max_abelian + 1, 2)] + list(_BUILTINS)


def load_builtin(name: str) -> CatalogEntry:
    m = _ABELIAN.match(name)
    if m:
        dim = int(m.group(1))
        if dim == 0 or dim % 2:
            raise KeyError(f"abelian entries need a positive even dimension, got {name!r}")
        entry = _abelian(name, dim)
    elif name in _BUILTINS:
        entry = _BUILTINS[name]()
    else:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(builtin_names())}")
    report = validate_algebra(entry.algebra)
    assert report.valid, f"builtin {name} fails validation"
    for label, J in entry.structures:
        assert entry.counterexample or is_integrable_structure(entry.algebra, J), \
            f"builtin {name}/{label} is not integrable"
    return entry


# ---------------------------------------------------------------- files

@dataclass
class ParsedInput:
    algebra: LieAlgebra
    J: Optional[ComplexStructure] = None
    complex_basis: Optional[ComplexSubspace] = None
    module: Optional[Representation] = None
    name: str = ""
    flags: frozenset = frozenset()


def _rational_matrix(data, rows, cols, field_):
    if not isinstance(data, list) or len(data) != rows:
        raise CatalogError(f"{field_}: expected {rows} rows")
    out = []
    for i, r in enumerate(data):
        if not isinstance(r, list) or len(r) != cols:
            raise CatalogError(f"{field_}[{i + 1}]: expected {cols} entries")
        out.append(tuple(parse_rational(x, f"{field_}[{i + 1}][{j + 1}]") for j, x in enumerate(r)))
    return tuple(out)


def parse_module(data, L: LieAlgebra, field_: str = "module") -> Representation:
    try:
        M = data["dimE"]
        if not isinstance(M, int) or M < 0:
            raise CatalogError(f"{field_}.dimE: expected a non-negative integer")
        rho_data = data["rho"]
        I_data = data["I"]
    except KeyError as exc:
        raise CatalogError(f"{field_}: missing key {exc.args[0]!r}") from None
    if not isinstance(rho_data, list) or len(rho_data) != L.dim:
        raise CatalogError(f"{field_}.rho: expected {L.dim} matrices, one per basis vector")
    rho = tuple(Mat.from_dense([list(r) for r in _rational_matrix(m, M, M, f"{field_}.rho[{a + 1}]")])
                for a, m in enumerate(rho_data))
    I_ = ComplexStructure(_rational_matrix(I_data, M, M, f"{field_}.I"))
    rep = Representation(L, M, rho, I_, data.get("name", "file"))
    problems = rep.validate()
    if problems:
        raise CatalogError([f"{field_}: {p}" for p in problems])
    return rep


def parse_data(data: dict, name: str = "") -> ParsedInput:
    """Parse a decoded JSON document; every failure becomes a CatalogError."""
    try:
        return _parse_data(data, name)
    except CatalogError:
        raise
    except ValueError as exc:
        raise CatalogError(str(exc)) from None


def _parse_data(data, name):
    try:
        dim = data["dim"]
    except (KeyError, TypeError):
        raise CatalogError("dim: missing") from None
    if not isinstance(dim, int) or dim < 0:
        raise CatalogError("dim: expected a non-negative integer")
    brackets = {}
    problems = []
    for a, b in enumerate(data.get("brackets", [])):
        loc = f"brackets[{a + 1}]"
        try:
            i, j = b["i"], b["j"]
            coeffs = b["coeffs"]
        except (KeyError, TypeError):
            raise CatalogError(f"{loc}: expected keys i, j, coeffs") from None
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= dim and 1 <= j <= dim):
            raise CatalogError(f"{loc}: indices out of range 1..{dim}")
        if i >= j:
            problems.append(f"{loc}: antisymmetry requires i < j, got i={i}, j={j}")
            continue
        if (i - 1, j - 1) in brackets:
            problems.append(f"{loc}: duplicate bracket [e{i},e{j}]")
            continue
        row = {}
        for k, v in coeffs.items():
            kk = int(k) if str(k).isdigit() else None
            if kk is None or not 1 <= kk <= dim:
                raise CatalogError(f"{loc}.coeffs: index {k!r} out of range 1..{dim}")
            row[kk - 1] = parse_rational(v, f"{loc}.coeffs[{k}]")
        brackets[(i - 1, j - 1)] = row
    if problems:
        raise CatalogError(problems)
    L = LieAlgebra.from_brackets(dim, brackets, name or data.get("name", ""))
    report = validate_algebra(L)
    if not report.valid:
        raise CatalogError([f"jacobi: triple (e{t[0]},e{t[1]},e{t[2]}) has residual "
                            f"[{', '.join(str(x) for x in r)}]" for t, r in report.jacobi]
                           + [f"antisymmetry: c[{i}][{j}][{k}]" for i, j, k, *_ in report.antisymmetry])
    J = None
    if data.get("J") is not None:
        J = ComplexStructure(_rational_matrix(data["J"], dim, dim, "J"))
        try:
            J.check()
        except ValueError as exc:
            raise CatalogError(f"J: {exc}") from None
    cb = None
    if data.get("complex_basis") is not None:
        rows = data["complex_basis"]
        if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != dim for r in rows):
            raise CatalogError(f"complex_basis: expected rows of length {dim}")
        cb = ComplexSubspace(tuple(tuple(parse_gauss(x, f"complex_basis[{i + 1}][{j + 1}]")
                                         for j, x in enumerate(r)) for i, r in enumerate(rows)))
    module = parse_module(data["module"], L) if data.get("module") is not None else None
    return ParsedInput(L, J, cb, module, name or data.get("name", ""))


def parse_file(path) -> ParsedInput:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{p.name}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_data(data, data.get("name", p.stem) if isinstance(data, dict) else p.stem)


def _gauss_str(x) -> str:
    x = as_gauss(x)
    if not x.im:
        return fmt_rational(x.re)
    im = fmt_rational(abs(x.im))
    sign = "-" if x.im < 0 else "+"
    if not x.re:
        return ("-" if x.im < 0 else "") + f"{im}i"
    return f"{fmt_rational(x.re)}{sign}{im}i"


def serialize_module(rep: Representation) -> dict:
    return {
        "dimE": rep.dimE,
        "rho": [[[fmt_rational(as_gauss(x).re) for x in r] for r in m.to_dense()] for m in rep.rho],
        "I": [[fmt_rational(as_gauss(x).re) for x in r] for r in rep.I.J],
    }


def serialize(L: LieAlgebra, J: Optional[ComplexStructure] = None, module: Representation = None,
              complex_basis: Optional[ComplexSubspace] = None, name: str = "") -> dict:
    out = {}
    if name or L.name:
        out["name"] = name or L.name
    out["dim"] = L.dim
    out["brackets"] = [
        {"i": i + 1, "j": j + 1,
         "coeffs": {str(k + 1): fmt_rational(as_gauss(v).re) for k, v in sorted(row.items())}}
        for (i, j), row in sorted(L.brackets_upper().items())]
    if J is not None:
        out["J"] = [[fmt_rational(as_gauss(x).re) for x in r] for r in J.J]
        cb = complex_basis or structure_to_subspace(L, J)
        out["complex_basis"] = [[_gauss_str(x) for x in r] for r in cb.rows]
    elif complex_basis is not None:
        out["complex_basis"] = [[_gauss_str(x) for x in r] for r in complex_basis.rows]
    if module is not None:
        out["module"] = serialize_module(module)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
