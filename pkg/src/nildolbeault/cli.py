"""``nd``: command-line front end.

Exit codes: 0 success, 1 validation or check failure (report printed), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import (check_moduli_point, is_integrable_structure, is_nilpotent,
                      lower_central_series, structure_to_subspace, validate_algebra, NotIntegrableError)
from .catalog import CatalogError, builtin_names, dumps, load_builtin, parse_file, parse_module, serialize
from .complexes import DolbeaultData, de_rham
from .exterior import multi_indices
from .hodge import CompatibleMetric, HodgeTheory, compatibilize_metric, NotPositiveDefinite
from .kuranishi import Kuranishi, deformation_report, format_monomial
from .representations import (ClassificationMismatch, adjoint_module, classify_module,
                              trivial_module)
from .scalars import parse_rational, to_json_scalar


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, payload, text):
        self.payload, self.text = payload, text


# ------------------------------------------------------------------ input

def _load_input(source: str):
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise UsageError(f"input file not found: {source}")
        parsed = parse_file(path)
        return {"name": parsed.name or path.stem, "L": parsed.algebra, "J": parsed.J,
                "complex_basis": parsed.complex_basis, "module": parsed.module, "flags": []}
    try:
        e = load_builtin(source)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return {"name": e.name, "L": e.algebra, "J": e.J, "complex_basis": None, "module": None,
            "flags": sorted(e.flags)}


def _need_J(inp):
    if inp["J"] is None:
        raise CheckFailed({"input": inp["name"], "error": "no complex structure given"},
                          f"{inp['name']}: no complex structure given")
    res = is_integrable_structure(inp["L"], inp["J"])
    if not res:
        w = [i + 1 for i in res.witness]
        raise CheckFailed({"input": inp["name"], "error": "complex structure not integrable",
                           "nijenhuis_witness": w},
                          f"{inp['name']}: J is not integrable (Nijenhuis witness e{w[0]}, e{w[1]})")
    return inp["J"]


def _module(args, inp):
    source = args.module
    L = inp["L"]
    if source is None:
        return inp["module"] or trivial_module(L)
    if source == "trivial":
        return trivial_module(L)
    if source == "adjoint":
        return adjoint_module(L, _need_J(inp))
    path = Path(source)
    if not path.exists():
        raise UsageError(f"module must be trivial, adjoint or a JSON file: {source}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path.name}: invalid JSON ({exc.msg})") from None
    return parse_module(data.get("module", data), L)


def _metric(args, inp, rep):
    if not args.metric:
        return None
    try:
        data = json.loads(Path(args.metric).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read metric file: {exc}") from None
    g0 = data.get("g") if isinstance(data, dict) else data
    k0 = data.get("k") if isinstance(data, dict) else None
    M = rep.dimE
    g = compatibilize_metric(_square_matrix(g0, inp["L"].dim, "metric.g"), inp["J"])
    k = compatibilize_metric(_square_matrix(k0, M, "metric.k") if k0 is not None
                             else [[int(i == j) for j in range(M)] for i in range(M)], rep.I)
    return CompatibleMetric(g, k)


def _square_matrix(m, d, field):
    if not isinstance(m, list) or len(m) != d or any(not isinstance(r, list) or len(r) != d for r in m):
        raise CatalogError(f"{field}: expected a {d}x{d} matrix")
    return [[parse_rational(x, f"{field}[{i + 1}][{j + 1}]") for j, x in enumerate(r)]
            for i, r in enumerate(m)]


def _dolbeault(args, inp):
    J = _need_J(inp)
    rep = _module(args, inp)
    D = DolbeaultData(inp["L"], J, rep)
    return D, rep


def _bidegrees(args, n):
    if args.p is None and args.q is None:
        return [(p, q) for p in range(n + 1) for q in range(n + 1)]
    ps = [args.p] if args.p is not None else list(range(n + 1))
    qs = [args.q] if args.q is not None else list(range(n + 1))
    if any(not 0 <= x <= n for x in ps + qs):
        raise UsageError(f"bidegree out of range 0..{n}")
    return [(p, q) for p in ps for q in qs]


def _diamond_text(h, n):
    lines = ["q\\p " + " ".join(f"{p:>4}" for p in range(n + 1))]
    for q in range(n, -1, -1):
        lines.append(f"{q:>3} " + " ".join(f"{h.get((p, q), '.'):>4}" for p in range(n + 1)))
    return "\n".join(lines)


# --------------------------------------------------------------- commands

def cmd_validate(args):
    inp = _load_input(args.input)
    L = inp["L"]
    rep_alg = validate_algebra(L)
    out = {"input": inp["name"], "dim": L.dim, "algebra": rep_alg.to_json(),
           "nilpotent": is_nilpotent(L), "lower_central_series": lower_central_series(L)}
    ok = rep_alg.valid
    lines = [f"{inp['name']}: dim {L.dim}, algebra {'valid' if rep_alg.valid else 'INVALID'}",
             f"lower central series dims {out['lower_central_series']}"
             f" ({'nilpotent' if out['nilpotent'] else 'not nilpotent'})"]
    if inp["J"] is not None:
        res = is_integrable_structure(L, inp["J"])
        jinfo = {"integrable": bool(res),
                 "nijenhuis_witness": [i + 1 for i in res.witness] if not res else None}
        sub = inp["complex_basis"] or structure_to_subspace(L, inp["J"])
        mp = check_moduli_point(L, sub)
        jinfo["closure"] = mp.closed_under_bracket
        jinfo["transversal"] = mp.transversality
        if jinfo["closure"] != jinfo["integrable"] and mp.transversality:
            raise RuntimeError("Nijenhuis test and bracket-closure test disagree")
        out["J"] = jinfo
        ok &= jinfo["integrable"]
        lines.append(f"J integrable: {jinfo['integrable']}"
                     + (f" (witness e{jinfo['nijenhuis_witness'][0]}, e{jinfo['nijenhuis_witness'][1]})"
                        if not res else ""))
        if args.module is not None or inp["module"] is not None:
            rep = _module(args, inp)
            problems = rep.validate()
            minfo = {"name": rep.name, "problems": problems}
            if not problems:
                try:
                    minfo["kind"] = classify_module(rep, inp["J"]).kind.value
                except NotIntegrableError:
                    minfo["kind"] = None
            out["module"] = minfo
            ok &= not problems
            lines.append(f"module {rep.name}: {'ok' if not problems else '; '.join(problems)}"
                         + (f", kind {minfo.get('kind')}" if not problems else ""))
    for t, r in rep_alg.jacobi:
        lines.append(f"Jacobi fails on (e{t[0]}, e{t[1]}, e{t[2]}): residual {[str(x) for x in r]}")
    out["valid"] = bool(ok)
    return out, "\n".join(lines), 0 if ok else 1


def cmd_cohomology(args):
    inp = _load_input(args.input)
    L = inp["L"]
    betti = de_rham(L).h
    out = {"input": inp["name"], "betti": betti}
    lines = [f"{inp['name']}: de Rham Betti numbers {betti}"]
    if inp["J"] is None:
        return out, "\n".join(lines), 0
    D, rep = _dolbeault(args, inp)
    n = D.n
    out.update({"module": rep.name, "kind": D.kind.value, "n": n, "m": D.m})
    sums = {p: D.summary(p, representatives=args.representatives) for p in range(n + 1)}
    rows, h = [], {}
    for p, q in _bidegrees(args, n):
        s = sums[p]
        h[(p, q)] = s.h[q]
        row = {"p": p, "q": q, "dim": s.dims[q], "rank": s.ranks[q], "h": s.h[q]}
        if args.representatives:
            row["representatives"] = [[to_json_scalar(x) for x in v] for v in s.representatives[q]]
        rows.append(row)
    out["bidegrees"] = rows
    lines.append(f"module {rep.name} ({D.kind.value}), n={n}, rank E^(1,0)={D.m}")
    lines.append(_diamond_text(h, n))
    return out, "\n".join(lines), 0


def cmd_hodge(args):
    inp = _load_input(args.input)
    D, rep = _dolbeault(args, inp)
    H = HodgeTheory(D, _metric(args, inp, rep))
    n = D.n
    hn = D.hodge_numbers()
    rows, diamond, ok = [], {}, True
    for p, q in _bidegrees(args, n):
        harm = len(H.harmonic_basis(p, q))
        dec = H.hodge_decomposition(p, q)
        row = {"p": p, "q": q, "harmonic": harm, "h": hn[(p, q)],
               "adjoint": q >= n or H.adjointness_defect(p, q).is_zero(),
               "star_involution": H.star_involution_defect(p, q).is_zero(),
               "decomposition": {k: dec[k] for k in ("exact", "harmonic", "coexact", "orthogonal",
                                                     "complete")}}
        ok &= row["adjoint"] and row["star_involution"] and dec["orthogonal"] and dec["complete"] \
            and harm == hn[(p, q)]
        diamond[(p, q)] = harm
        rows.append(row)
    out = {"input": inp["name"], "module": rep.name, "n": n, "norm_sq_vol": to_json_scalar(H.norm_sq),
           "bidegrees": rows, "ok": bool(ok)}
    text = f"{inp['name']} / {rep.name}: harmonic dimensions\n{_diamond_text(diamond, n)}\n" \
           f"all Hodge checks {'pass' if ok else 'FAIL'}"
    return out, text, 0 if ok else 1


def cmd_serre(args):
    inp = _load_input(args.input)
    D, rep = _dolbeault(args, inp)
    H = HodgeTheory(D, _metric(args, inp, rep))
    rows, ok, lines = [], True, []
    for p, q in _bidegrees(args, D.n):
        s = H.serre_check(p, q)
        rows.append({"p": p, "q": q, "h_E": s.h_E, "h_dual": s.h_dual, "rank": s.rank,
                     "nondegenerate": s.nondegenerate,
                     "representative_independent": s.representative_independent})
        ok &= s.nondegenerate and s.representative_independent
        lines.append(f"({p},{q}) x ({D.n - p},{D.n - q})*: h={s.h_E}, h*={s.h_dual}, rank={s.rank}"
                     + ("" if s.nondegenerate else "  DEGENERATE"))
    out = {"input": inp["name"], "module": rep.name, "pairings": rows, "ok": bool(ok)}
    return out, "\n".join(lines), 0 if ok else 1


def _form_entries(vec, n, q):
    Qs = multi_indices(n, q)
    return [{"omegabar": [x + 1 for x in Qs[i // n]], "X": i % n + 1, "value": to_json_scalar(v)}
            for i, v in enumerate(vec) if v]


def cmd_kuranishi(args):
    inp = _load_input(args.input)
    L, J = inp["L"], _need_J(inp)
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    t = None
    if args.eval is not None:
        try:
            t = [parse_rational(x.strip(), f"--eval[{i + 1}]") for i, x in enumerate(args.eval.split(","))]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    metric = _metric(args, inp, adjoint_module(L, J)) if args.metric else None
    K = Kuranishi(L, J, metric)
    if t is not None and len(t) != K.m:
        raise UsageError(f"--eval needs {K.m} values, got {len(t)}")
    rep = deformation_report(L, J, args.order, metric, t)
    n = K.D.n
    phi = [{"exponents": list(mu), "monomial": format_monomial(mu), "terms": _form_entries(v, n, 1)}
           for mu, v in sorted(rep.series.coeffs.items(), key=lambda kv: (sum(kv[0]), [-e for e in kv[0]]))]
    obs = [{"xi": i + 1, "terms": [{"exponents": list(mu), "monomial": format_monomial(mu),
                                    "coeff": to_json_scalar(c)} for mu, c in sorted(p.items())]}
           for i, p in enumerate(rep.obstructions.polys)]
    out = {"input": inp["name"], "m": rep.m, "k": rep.k, "order": rep.order, "phi": phi,
           "obstructions": obs,
           "residual": [{"order": r.order, "zero": r.zero, "harmonic_zero": r.harmonic_zero,
                         "green_zero": r.green_zero, "consistent": r.consistent}
                        for r in rep.residual_orders],
           "higher_orders_coexact": rep.higher_orders_coexact}
    lines = [f"{inp['name']}: m = h^(0,1)(g,g) = {rep.m}, k = h^(0,2)(g,g) = {rep.k}, order {rep.order}",
             f"phi: {len(rep.series.coeffs)} nonzero coefficients "
             f"({sum(1 for mu in rep.series.coeffs if sum(mu) >= 2)} of degree >= 2)"]
    for row in phi:
        terms = " + ".join(f"({_scalar_text(t_['value'])}) wbar{''.join(map(str, t_['omegabar']))}"
                           f"(x)X{t_['X']}" for t_ in row["terms"])
        lines.append(f"  [{row['monomial']}] {terms}")
    for i, s in enumerate(rep.obstructions.format()):
        lines.append(f"g_{i + 1}(t) = {s}")
    lines.append("residual consistent with obstructions: "
                 + str(all(r.consistent for r in rep.residual_orders)))
    if rep.evaluation is not None:
        ev = rep.evaluation
        out["evaluation"] = {"t": [to_json_scalar(x) for x in t], "transversal": ev.transversal,
                             "integrable": ev.integrable, "closure_defect_zero_by_order": ev.defect_by_order,
                             "graph": "Xbar + phi" if ev.graph_sign > 0 else "Xbar - phi",
                             "complex_basis": [[to_json_scalar(x) for x in r] for r in ev.subspace.rows]}
        lines.append(f"at t = ({', '.join(str(x) for x in t)}): transversal {ev.transversal}, "
                     f"integrable {ev.integrable}, defect zero by order {ev.defect_by_order}")
    return out, "\n".join(lines), 0


def _scalar_text(v):
    if isinstance(v, dict):
        return f"{v['re']}{'' if v['im'].startswith('-') else '+'}{v['im']}i"
    return v


def cmd_moduli(args):
    inp = _load_input(args.input)
    L = inp["L"]
    if inp["J"] is None and inp["complex_basis"] is None:
        raise CheckFailed({"input": inp["name"], "error": "no complex structure given"},
                          f"{inp['name']}: no complex structure given")
    sub = inp["complex_basis"] or structure_to_subspace(L, inp["J"])
    mp = check_moduli_point(L, sub)
    out = {"input": inp["name"], "transversal": mp.transversality,
           "closed_under_bracket": mp.closed_under_bracket, "member": mp.member,
           "witness": {"rows": [mp.witness[0] + 1, mp.witness[1] + 1],
                       "bracket": [to_json_scalar(x) for x in mp.witness[2]]} if mp.witness else None}
    if inp["J"] is not None:
        out["nijenhuis_integrable"] = bool(is_integrable_structure(L, inp["J"]))
    text = (f"{inp['name']}: transversal {mp.transversality}, closed under bracket "
            f"{mp.closed_under_bracket}, member of C(g): {mp.member}")
    if mp.witness:
        text += f" (witness rows {mp.witness[0] + 1}, {mp.witness[1] + 1})"
    return out, text, 0 if mp.member else 1


def cmd_catalog(args):
    if args.action == "list":
        names = builtin_names()
        rows = []
        for nm in names:
            e = load_builtin(nm)
            rows.append({"name": nm, "dim": e.algebra.dim, "has_J": e.J is not None,
                         "flags": sorted(e.flags), "provenance": e.provenance})
        text = "\n".join(f"{r['name']:<20} dim {r['dim']:<2} {', '.join(r['flags'])}" for r in rows)
        return {"entries": rows}, text, 0
    if not args.name:
        raise UsageError("catalog show needs an entry name")
    try:
        e = load_builtin(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    data = serialize(e.algebra, e.J, name=e.name)
    data["flags"] = sorted(e.flags)
    data["provenance"] = e.provenance
    return data, dumps(data).rstrip("\n"), 0


# ------------------------------------------------------------------ parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("--input", required=True, help="catalog name or JSON file")
    inp.add_argument("--module", help="trivial, adjoint or a module JSON file")
    inp.add_argument("--metric", help="JSON file with a rational symmetric matrix (or {g, k})")
    bideg = argparse.ArgumentParser(add_help=False)
    bideg.add_argument("--p", type=int)
    bideg.add_argument("--q", type=int)

    ap = argparse.ArgumentParser(prog="nd", description="Dolbeault cohomology and deformations "
                                 "of nilpotent Lie algebras with complex structure")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common, inp]).set_defaults(fn=cmd_validate)
    c = sub.add_parser("cohomology", parents=[common, inp, bideg])
    c.add_argument("--representatives", action="store_true")
    c.set_defaults(fn=cmd_cohomology)
    sub.add_parser("hodge", parents=[common, inp, bideg]).set_defaults(fn=cmd_hodge)
    sub.add_parser("serre-check", parents=[common, inp, bideg]).set_defaults(fn=cmd_serre)
    k = sub.add_parser("kuranishi", parents=[common, inp])
    k.add_argument("--order", type=int, default=4)
    k.add_argument("--eval", help="comma-separated rational point t1,...,tm")
    k.set_defaults(fn=cmd_kuranishi)
    sub.add_parser("moduli-check", parents=[common, inp]).set_defaults(fn=cmd_moduli)
    cat = sub.add_parser("catalog", parents=[common])
    cat.add_argument("action", choices=["list", "show"])
    cat.add_argument("name", nargs="?")
    cat.set_defaults(fn=cmd_catalog)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)
    try:
        payload, text, code = args.fn(args)
    except UsageError as exc:
        print(f"nd: error: {exc}", file=stderr)
        return 2
    except CatalogError as exc:
        payload, text, code = {"valid": False, "problems": exc.problems}, \
            "invalid input:\n" + "\n".join(f"  {p}" for p in exc.problems), 1
    except CheckFailed as exc:
        payload, text, code = exc.payload, exc.text, 1
    except (NotPositiveDefinite, ClassificationMismatch, ValueError) as exc:
        payload, text, code = {"error": str(exc)}, f"error: {exc}", 1
    print(json.dumps(payload, indent=2) if as_json else text, file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
