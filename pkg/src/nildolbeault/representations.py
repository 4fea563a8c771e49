"""g-modules with a complex structure: (anti-)integrability and induced actions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (ComplexStructure, LieAlgebra, SplitBasis, _basis, complexify,
                      greedy_pivots, validate_algebra, HALF, _freeze)
from .linalg import Mat, inverse
from .scalars import I, ONE, ZERO, as_gauss, as_rational

__all__ = ["Representation", "ModuleKind", "Kind", "ModuleSplit", "InducedAction",
           "classify_module", "adjoint_module", "dual_module", "trivial_module",
           "induced_01_action", "semidirect_product", "module_split",
           "ClassificationMismatch", "standard_I"]


class ClassificationMismatch(RuntimeError):
    """The two classification routes disagree: a convention bug, never user error."""


class Kind(enum.Enum):
    INTEGRABLE = "Integrable"
    ANTI_INTEGRABLE = "AntiIntegrable"
    BOTH = "Both"
    NEITHER = "Neither"

    @property
    def integrable(self):
        return self in (Kind.INTEGRABLE, Kind.BOTH)

    @property
    def anti_integrable(self):
        return self in (Kind.ANTI_INTEGRABLE, Kind.BOTH)

    def dual(self):
        return {Kind.INTEGRABLE: Kind.ANTI_INTEGRABLE,
                Kind.ANTI_INTEGRABLE: Kind.INTEGRABLE}.get(self, self)


def standard_I(m: int) -> ComplexStructure:
    """f_{2k} -> f_{2k+1} -> -f_{2k} on R^{2m}."""
    return ComplexStructure.from_images(2 * m, {2 * k: {2 * k + 1: 1} for k in range(m)})


@dataclass(frozen=True)
class Representation:
    base: LieAlgebra
    dimE: int
    rho: tuple          # Mat per basis vector of base
    I: ComplexStructure
    name: str = ""

    def validate(self) -> list:
        """List of problems; empty when rho is a representation and I^2 = -Id."""
        problems = []
        L = self.base
        if len(self.rho) != L.dim:
            return [f"expected {L.dim} action matrices, got {len(self.rho)}"]
        for a, r in enumerate(self.rho):
            if r.shape != (self.dimE, self.dimE):
                problems.append(f"rho(e{a + 1}) has shape {r.shape}")
        if problems:
            return problems
        if self.I.dim != self.dimE:
            return [f"I has dimension {self.I.dim}, module has {self.dimE}"]
        try:
            self.I.check()
        except ValueError as exc:
            problems.append(f"I: {exc}")
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                lhs = self.action(L.bracket_basis(i, j))
                rhs = self.rho[i] @ self.rho[j] - self.rho[j] @ self.rho[i]
                if lhs != rhs:
                    problems.append(f"rho([e{i + 1},e{j + 1}]) != [rho(e{i + 1}),rho(e{j + 1})]")
        return problems

    def action(self, vec) -> Mat:
        """rho of a (complex) vector, given densely or as {index: coeff}."""
        items = vec.items() if isinstance(vec, dict) else enumerate(vec)
        out = Mat.zeros(self.dimE, self.dimE)
        for i, c in items:
            if c:
                out = out + self.rho[i].scale(as_gauss(c))
        return out

    def conjugate(self):
        """(E, -I)."""
        J = ComplexStructure(tuple(tuple(-x for x in r) for r in self.I.J))
        return Representation(self.base, self.dimE, self.rho, J, self.name + "-conj")


def trivial_module(L: LieAlgebra, m: int = 1) -> Representation:
    return Representation(L, 2 * m, tuple(Mat.zeros(2 * m, 2 * m) for _ in range(L.dim)),
                          standard_I(m), "trivial")


def adjoint_module(L: LieAlgebra, J: ComplexStructure) -> Representation:
    return Representation(L, L.dim, tuple(L.ad(i) for i in range(L.dim)), J, "adjoint")


def dual_module(rep: Representation) -> Representation:
    rho = tuple(r.transpose().scale(-1) for r in rep.rho)
    name = rep.name[:-5] if rep.name.endswith("-dual") else (rep.name + "-dual" if rep.name else "")
    return Representation(rep.base, rep.dimE, rho, rep.I.transpose(), name)


@dataclass(frozen=True)
class ModuleSplit:
    """Basis V_1..V_m of E^{1,0} (same greedy pivot rule as the split basis of g)."""

    m: int
    P: Mat      # columns V_1..V_m, conj V_1..conj V_m
    Pinv: Mat

    @property
    def V(self):
        return self.P.columns()[: self.m]


def module_split(I_: ComplexStructure) -> ModuleSplit:
    M = I_.dim
    cands = []
    for j in range(M):
        col = [I_.J[i][j] for i in range(M)]
        cands.append([HALF * ((ONE if i == j else ZERO) - I * col[i]) for i in range(M)])
    piv = greedy_pivots(cands, M // 2)
    V = [cands[p] for p in piv]
    Vb = [[x.conj() for x in v] for v in V]
    P = Mat.from_columns(V + Vb, M) if M else Mat.zeros(0, 0)
    Pinv = inverse(P) if M else P
    return ModuleSplit(M // 2, P, Pinv)


@dataclass
class ModuleKind:
    kind: Kind
    # failure witnesses: (basis index in g, basis index in E), 0-based
    integrable_witness: Optional[tuple] = None
    anti_witness: Optional[tuple] = None

    def __eq__(self, other):
        if isinstance(other, Kind):
            return self.kind == other
        if isinstance(other, ModuleKind):
            return self.kind == other.kind
        return NotImplemented


def _nijenhuis_route(rep, J, sign):
    I_ = Mat.from_dense(rep.I.J).scale(sign)
    n = rep.base.dim
    for i in range(n):
        x = _basis(n, i)
        rJx = rep.action(J.apply(x))
        rx = rep.rho[i]
        N = (I_ @ rJx - rJx @ I_) + I_ @ (rx @ I_ - I_ @ rx)
        if not N.is_zero():
            _, row = next(iter(N.rows.items()))
            return (i, min(row))
    return None


def _invariance_route(rep, split: SplitBasis, ms: ModuleSplit, sign):
    """E^{1,0} (of (E, sign*I)) invariant under g^{1,0}? Returns witness or None."""
    I_ = Mat.from_dense(rep.I.J).scale(sign)
    Vcols = ms.P.columns()
    V = Vcols[: ms.m] if sign > 0 else Vcols[ms.m:]
    for k, X in enumerate(split.X):
        rX = rep.action(X)
        for a, v in enumerate(V):
            w = rX @ v
            res = [p - I * q for p, q in zip(I_ @ w, w)]
            if any(res):
                return (k, a)
    return None


def classify_module(rep: Representation, J: ComplexStructure, split: SplitBasis = None) -> ModuleKind:
    if split is None:
        split = complexify(rep.base, J)
    ms = module_split(rep.I)
    wa_int = _nijenhuis_route(rep, J, +1)
    wa_anti = _nijenhuis_route(rep, J, -1)
    wb_int = _invariance_route(rep, split, ms, +1)
    wb_anti = _invariance_route(rep, split, ms, -1)
    if (wa_int is None) != (wb_int is None) or (wa_anti is None) != (wb_anti is None):
        raise ClassificationMismatch(
            f"Nijenhuis route ({wa_int}, {wa_anti}) vs invariance route ({wb_int}, {wb_anti})")
    integ, anti = wa_int is None, wa_anti is None
    kind = {(True, True): Kind.BOTH, (True, False): Kind.INTEGRABLE,
            (False, True): Kind.ANTI_INTEGRABLE, (False, False): Kind.NEITHER}[(integ, anti)]
    return ModuleKind(kind, wa_int, wa_anti)


@dataclass(frozen=True)
class InducedAction:
    """delta(Xbar_k) on E^{1,0} in the basis V_1..V_m."""

    matrices: tuple
    kind: Kind
    split: ModuleSplit

    def bracket_defects(self, sb: SplitBasis) -> list:
        """Pairs (a, b) where [delta_a, delta_b] != delta([Xbar_a, Xbar_b])."""
        n = sb.n
        bad = []
        d = self.matrices
        for a in range(n):
            for b in range(a + 1, n):
                br = sb.algebra.bracket_basis(n + a, n + b)
                rhs = Mat.zeros(self.split.m, self.split.m)
                for k, c in br.items():
                    rhs = rhs + d[k - n].scale(c)
                if d[a] @ d[b] - d[b] @ d[a] != rhs:
                    bad.append((a, b))
        return bad


def _induced(rep, split, ms, project):
    m = ms.m
    mats = []
    for Xb in split.Xbar:
        rX = rep.action(Xb)
        entries = []
        for a, v in enumerate(ms.V):
            coords = ms.Pinv @ (rX @ v)
            if not project and any(coords[m:]):
                raise ClassificationMismatch("restricted action leaves E^{1,0}")
            entries += [(i, a, coords[i]) for i in range(m)]
        mats.append(Mat.from_entries(m, m, entries))
    return tuple(mats)


def induced_01_action(rep: Representation, kind, J: ComplexStructure = None,
                      split: SplitBasis = None) -> InducedAction:
    kind = kind.kind if isinstance(kind, ModuleKind) else kind
    if kind is Kind.NEITHER:
        raise ValueError("module is neither integrable nor anti-integrable")
    if split is None:
        split = complexify(rep.base, J)
    ms = module_split(rep.I)
    if kind is Kind.INTEGRABLE:
        mats = _induced(rep, split, ms, project=True)
    elif kind is Kind.ANTI_INTEGRABLE:
        mats = _induced(rep, split, ms, project=False)
    else:
        mats = _induced(rep, split, ms, project=True)
        other = _induced(rep, split, ms, project=False)
        if any(a != b for a, b in zip(mats, other)):
            raise ClassificationMismatch("induced actions differ for a module of kind Both")
    return InducedAction(mats, kind, ms)


def semidirect_product(rep: Representation, J: ComplexStructure):
    """E x| g with [(v,x),(w,y)] = (x.w - y.v, [x,y]); basis: E first, then g."""
    L, M = rep.base, rep.dimE
    N = L.dim
    D = M + N
    br = {}
    for i in range(N):
        for j in range(i + 1, N):
            r = L.bracket_basis(i, j)
            if r:
                br[(M + i, M + j)] = {M + k: v for k, v in r.items()}
        # [f_a, e_i] = -rho(e_i) f_a, stored with the smaller index first
        for a in range(M):
            col = {t: v for t, v in ((t, rep.rho[i][t, a]) for t in range(M)) if v}
            if col:
                br[(a, M + i)] = {t: -v for t, v in col.items()}
    c = [[[ZERO] * D for _ in range(D)] for _ in range(D)]
    for (p, q), coeffs in br.items():
        for k, v in coeffs.items():
            c[p][q][k] = c[p][q][k] + v
            c[q][p][k] = c[q][p][k] - v
    prod = LieAlgebra(D, _freeze([[[as_rational(x) for x in row] for row in m] for m in c]),
                      f"{rep.name}x|{L.name}")
    report = validate_algebra(prod)
    if not report.valid:
        raise AssertionError("semidirect product violates Jacobi: rho is not a representation")
    K = [[ZERO] * D for _ in range(D)]
    for i in range(M):
        for j in range(M):
            K[i][j] = rep.I.J[i][j]
    for i in range(N):
        for j in range(N):
            K[M + i][M + j] = J.J[i][j]
    return prod, ComplexStructure.from_rows(K)
