"""Hodge theory on Lambda^{p,q} g^* (x) E^{1,0}: stars, adjoint, Laplacian, Green.

Everything stays in Q(i).  The unit volume form needs a square root in
general, so the stars are stored against the unnormalised volume form

    vol' = (i/2)^n (-1)^{n(n-1)/2} omega^1 ^ .. ^ omega^n ^ omegabar^1 ^ .. ^ omegabar^n,

a positive multiple of the J-oriented real volume form.  With nu = |vol'|^2
(rational), the true antilinear star is  bar_star = S'/sqrt(nu) o conj, and
dbar^* = -(1/nu) S'_{E*} conj(dbar_{E*}) conj(S'_E) is rational.

Inner products are linear in the first slot: (u, v) = u^T M conj(v).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .algebra import ComplexStructure, LieAlgebra, is_nilpotent, _mat_mul
from .complexes import DolbeaultData, form_index
from .exterior import binom, multi_indices, sort_sign
from .linalg import (Mat, NotInvertible, column_space, inverse, nullspace, rank, solve,
                     vec_conj)
from .representations import Representation, module_split
from .scalars import Gauss, I, ONE, ZERO, as_gauss, as_rational

__all__ = ["CompatibleMetric", "compatibilize_metric", "is_positive_definite",
           "default_metric", "HodgeTheory", "Star", "SerreReport", "NotPositiveDefinite",
           "conjugate_form"]


class NotPositiveDefinite(ValueError):
    pass


def is_positive_definite(g) -> bool:
    """Exact LDL^T: all pivots of a symmetric rational matrix positive."""
    n = len(g)
    a = [[as_rational(x) for x in r] for r in g]
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                return False
    for k in range(n):
        piv = a[k][k]
        if piv <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True


def compatibilize_metric(g0, J: ComplexStructure):
    """1/2 (g0 + J^T g0 J): symmetric, positive definite and J-invariant."""
    if not is_positive_definite(g0):
        raise NotPositiveDefinite("metric must be symmetric positive definite")
    Jm = [list(r) for r in J.J]
    JT = [list(r) for r in zip(*Jm)]
    g0 = [[as_rational(x) for x in r] for r in g0]
    t = _mat_mul(_mat_mul(JT, g0), Jm)
    return tuple(tuple((as_rational(a) + as_gauss(b).re) / 2 for a, b in zip(r0, r1))
                 for r0, r1 in zip(g0, t))


@dataclass(frozen=True)
class CompatibleMetric:
    g: tuple   # metric on the real Lie algebra, J-invariant
    k: tuple   # metric on the module, I-invariant

    def check(self, J: ComplexStructure, I_: ComplexStructure):
        for mat, S in ((self.g, J), (self.k, I_)):
            Sm = [list(r) for r in S.J]
            ST = [list(r) for r in zip(*Sm)]
            t = _mat_mul(_mat_mul(ST, [list(r) for r in mat]), Sm)
            if any(as_gauss(a) != b for r0, r1 in zip(mat, t) for a, b in zip(r0, r1)):
                raise ValueError("metric not compatible with the complex structure")
            if not is_positive_definite(mat):
                raise NotPositiveDefinite("metric not positive definite")
        return self


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def default_metric(L: LieAlgebra, J: ComplexStructure, rep: Representation, g0=None, k0=None):
    g = compatibilize_metric(g0 if g0 is not None else _identity(L.dim), J)
    k = compatibilize_metric(k0 if k0 is not None else _identity(rep.dimE), rep.I)
    return CompatibleMetric(g, k)


def _gram(rows_a, G, rows_b):
    """rows_a G conj(rows_b)^T for row-vector lists."""
    out = []
    for a in rows_a:
        aG = [sum((a[i] * G[i][j] for i in range(len(a)) if a[i] and G[i][j]), ZERO)
              for j in range(len(G))]
        out.append([sum((x * y.conj() for x, y in zip(aG, b) if x and y), ZERO) for b in rows_b])
    return out


def _det(m):
    """Exact determinant by fraction-free elimination on a small dense matrix."""
    n = len(m)
    if n == 0:
        return ONE
    a = [[as_gauss(x) for x in r] for r in m]
    det = ONE
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return ZERO
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k]
        inv = ONE / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return det


def _minors(Gm, n, p):
    Ps = multi_indices(n, p)
    return [[_det([[Gm[i][j] for j in B] for i in A]) for B in Ps] for A in Ps]


def conjugate_form(vec, n, p, q):
    """Coefficients of conj(alpha) in Lambda^{q,p} for alpha in Lambda^{p,q} (no module)."""
    src = form_index(n, p, q, 1)
    tgt = form_index(n, q, p, 1)
    out = [ZERO] * (binom(n, p) * binom(n, q))
    sgn = -1 if (p * q) % 2 else 1
    for P in multi_indices(n, p):
        for Q in multi_indices(n, q):
            c = as_gauss(vec[src(P, Q, 0)]).conj()
            out[tgt(Q, P, 0)] = c if sgn > 0 else -c
    return out


@dataclass(frozen=True)
class Star:
    """Unnormalised antilinear star: bar_star(b) = matrix @ conj(b) / sqrt(norm_sq)."""

    matrix: Mat
    norm_sq: object
    source: tuple
    target: tuple


@dataclass
class SerreReport:
    p: int
    q: int
    h_E: int
    h_dual: int
    pairing: list
    rank: int
    representative_independent: bool

    @property
    def nondegenerate(self):
        return self.h_E == self.h_dual == self.rank


class _Side:
    """Grams and evaluation data of one module side (E or E*)."""

    def __init__(self, D: DolbeaultData, kmetric, coframe_minors):
        self.D = D
        self.n, self.m = D.n, D.m
        ms = module_split(D.rep.I)
        self.V = ms.V
        self.h = _gram([list(v) for v in self.V], kmetric, [list(v) for v in self.V]) \
            if self.m else []
        self._minors = coframe_minors

    @lru_cache(maxsize=None)
    def gram(self, p, q) -> Mat:
        A, B = self._minors(0, p), self._minors(1, q)
        m = self.m
        entries = []
        nq = binom(self.n, q)
        for i1, ra in enumerate(A):
            for j1, a in enumerate(ra):
                if not a:
                    continue
                for i2, rb in enumerate(B):
                    for j2, b in enumerate(rb):
                        if not b:
                            continue
                        ab = a * b
                        for s in range(m):
                            for t in range(m):
                                hv = self.h[s][t]
                                if hv:
                                    entries.append((((i1 * nq + i2) * m + s), ((j1 * nq + j2) * m + t),
                                                    ab * hv))
        size = binom(self.n, p) * nq * m
        return Mat.from_entries(size, size, entries)


class HodgeTheory:
    """Stars, dbar^*, Laplacians, harmonic spaces and Green's operators for (g, J, E)."""

    def __init__(self, D: DolbeaultData, metric: Optional[CompatibleMetric] = None):
        self.D = D
        self.Dd = D.dual()
        self.n, self.m = D.n, D.m
        L, J = D.L, D.J
        if not is_nilpotent(L):
            warnings.warn("algebra is not nilpotent: dbar^* need not be adjoint to dbar",
                          RuntimeWarning, stacklevel=2)
        self.metric = metric or default_metric(L, J, D.rep)
        self.metric.check(J, D.rep.I)
        g = [list(r) for r in self.metric.g]
        ginv = inverse(Mat.from_dense(g)).to_dense()
        cof = D.sb.coframe
        Gamma = _gram(cof, ginv, cof)
        n = self.n
        self.coframe_gram = Gamma
        G1 = [[Gamma[i][j] for j in range(n)] for i in range(n)]
        G2 = [[Gamma[n + i][n + j] for j in range(n)] for i in range(n)]
        if any(Gamma[i][n + j] for i in range(n) for j in range(n)):
            raise ValueError("(1,0) and (0,1) coframes not orthogonal: metric not compatible")
        cache = {}

        def minors(block, p):
            key = (block, p)
            if key not in cache:
                cache[key] = _minors(G1 if block == 0 else G2, n, p)
            return cache[key]

        self._minors = minors
        k = [list(r) for r in self.metric.k]
        kinv = inverse(Mat.from_dense(k)).to_dense() if k else []
        self.side_E = _Side(D, k, minors)
        self.side_dual = _Side(self.Dd, kinv, minors)
        # evaluation Phi_t(V_s)
        self.ev = [[sum((a * b for a, b in zip(phi, v)), ZERO) for phi in self.side_dual.V]
                   for v in self.side_E.V]
        cvol = (I / 2) ** n * (-1 if (n * (n - 1) // 2) % 2 else 1)
        self.vol_coeff = cvol
        self.norm_sq = (cvol * cvol.conj()) * _det(G1) * _det(G2)
        self._cache = {}

    # --- bookkeeping ---------------------------------------------------
    def _side(self, dual):
        return self.side_dual if dual else self.side_E

    def _dbar(self, dual, p, q) -> Mat:
        return (self.Dd if dual else self.D).dbar(p, q)

    def dim(self, p, q):
        return binom(self.n, p) * binom(self.n, q) * self.m

    def gram(self, p, q, dual=False) -> Mat:
        return self._side(dual).gram(p, q)

    def inner(self, u, v, p, q, dual=False):
        M = self.gram(p, q, dual)
        return sum((a * b for a, b in zip(u, M @ vec_conj(v)) if a and b), ZERO)

    def pairing(self, p, q, dual=False) -> Mat:
        """vol'-coefficient of (basis of (p,q)) ^ (basis of (n-p,n-q)), other side."""
        key = ("W", p, q, dual)
        if key in self._cache:
            return self._cache[key]
        n, m = self.n, self.m
        src = form_index(n, p, q, m)
        tgt = form_index(n, n - p, n - q, m)
        inv_c = ONE / self.vol_coeff
        entries = []
        full = tuple(range(n))
        for P in multi_indices(n, p):
            P2 = tuple(x for x in full if x not in P)
            for Q in multi_indices(n, q):
                Q2 = tuple(x for x in full if x not in Q)
                seq = P + tuple(x + n for x in Q) + P2 + tuple(x + n for x in Q2)
                sgn, _ = sort_sign(seq)
                for s in range(m):
                    for t in range(m):
                        e = self.ev[s][t] if not dual else self.ev[t][s]
                        if e:
                            v = e * inv_c
                            entries.append((src(P, Q, s), tgt(P2, Q2, t), v if sgn > 0 else -v))
        d = self.dim(p, q)
        W = Mat.from_entries(d, self.dim(n - p, n - q), entries)
        self._cache[key] = W
        return W

    def wedge_pairing(self, alpha, beta, p, q, dual=False):
        """vol'-coefficient of alpha ^ beta with module evaluation."""
        W = self.pairing(p, q, dual)
        return sum((a * b for a, b in zip(alpha, W @ list(beta)) if a and b), ZERO)

    # --- stars -------------------------------------------------------
    def bar_star(self, p, q, dual=False) -> Star:
        key = ("S", p, q, dual)
        if key not in self._cache:
            W = self.pairing(p, q, dual)
            S = inverse(W) @ self.gram(p, q, dual)
            n = self.n
            self._cache[key] = Star(S, self.norm_sq, (p, q), (n - p, n - q))
        return self._cache[key]

    def apply_bar_star(self, b, p, q, dual=False):
        """bar_star' b (unnormalised; divide by sqrt(norm_sq) for the true star)."""
        return self.bar_star(p, q, dual).matrix @ vec_conj(b)

    def star_involution_defect(self, p, q, dual=False) -> Mat:
        """S'_{E*} conj(S'_E) - nu (-1)^{p+q} Id; zero iff bar_star o bar_star = (-1)^{p+q}."""
        n = self.n
        S1 = self.bar_star(p, q, dual).matrix
        S2 = self.bar_star(n - p, n - q, not dual).matrix
        target = Mat.identity(self.dim(p, q), self.norm_sq * (-1) ** (p + q))
        return S2 @ S1.conj() - target

    def hodge_star_form(self, vec, p, q):
        """Complex-linear star on Lambda^{p,q} g^* (no module), unnormalised.

        Computed from the module-free bar star: star(beta) = bar_star(conj beta).
        Returns (coefficients in Lambda^{n-q, n-p}, norm_sq).
        """
        n = self.n
        W, M = self._plain_pairing(q, p), self._plain_gram(q, p)
        cb = conjugate_form(vec, n, p, q)
        return inverse(W) @ (M @ vec_conj(cb)), self.norm_sq

    def _plain_gram(self, p, q) -> Mat:
        A, B = self._minors(0, p), self._minors(1, q)
        nq = binom(self.n, q)
        entries = [((i1 * nq + i2), (j1 * nq + j2), a * b)
                   for i1, ra in enumerate(A) for j1, a in enumerate(ra) if a
                   for i2, rb in enumerate(B) for j2, b in enumerate(rb) if b]
        size = binom(self.n, p) * nq
        return Mat.from_entries(size, size, entries)

    def _plain_pairing(self, p, q) -> Mat:
        n = self.n
        src, tgt = form_index(n, p, q, 1), form_index(n, n - p, n - q, 1)
        full = tuple(range(n))
        inv_c = ONE / self.vol_coeff
        entries = []
        for P in multi_indices(n, p):
            P2 = tuple(x for x in full if x not in P)
            for Q in multi_indices(n, q):
                Q2 = tuple(x for x in full if x not in Q)
                sgn, _ = sort_sign(P + tuple(x + n for x in Q) + P2 + tuple(x + n for x in Q2))
                entries.append((src(P, Q, 0), tgt(P2, Q2, 0), inv_c if sgn > 0 else -inv_c))
        return Mat.from_entries(binom(n, p) * binom(n, q), binom(n, n - p) * binom(n, n - q), entries)

    # --- adjoint and Laplacian ------------------------------------------
    def dbar_adjoint(self, p, q, dual=False) -> Mat:
        """dbar^*_E : (p, q) -> (p, q-1)."""
        key = ("A", p, q, dual)
        if key in self._cache:
            return self._cache[key]
        n = self.n
        if q == 0:
            A = Mat.zeros(0, self.dim(p, q))
        else:
            S1 = self.bar_star(p, q, dual).matrix
            Dd = self._dbar(not dual, n - p, n - q)
            S2 = self.bar_star(n - p, n - q + 1, not dual).matrix
            A = (S2 @ Dd.conj() @ S1.conj()).scale(-ONE / self.norm_sq)
        self._cache[key] = A
        return A

    def dbar(self, p, q, dual=False) -> Mat:
        return self._dbar(dual, p, q)

    def adjointness_defect(self, p, q, dual=False) -> Mat:
        """D^T M_{q+1} - M_q conj(A); zero iff (dbar a, b) = (a, dbar^* b) for all a, b."""
        D = self.dbar(p, q, dual)
        A = self.dbar_adjoint(p, q + 1, dual)
        return D.transpose() @ self.gram(p, q + 1, dual) - self.gram(p, q, dual) @ A.conj()

    def laplacian(self, p, q, dual=False) -> Mat:
        key = ("L", p, q, dual)
        if key in self._cache:
            return self._cache[key]
        n = self.n
        d = self.dim(p, q)
        lap = Mat.zeros(d, d)
        if q < n:
            lap = lap + self.dbar_adjoint(p, q + 1, dual) @ self.dbar(p, q, dual)
        if q > 0:
            lap = lap + self.dbar(p, q - 1, dual) @ self.dbar_adjoint(p, q, dual)
        self._cache[key] = lap
        return lap

    def harmonic_basis(self, p, q, dual=False) -> list:
        key = ("H", p, q, dual)
        if key not in self._cache:
            self._cache[key] = nullspace(self.laplacian(p, q, dual))
        return self._cache[key]

    def harmonic_projection(self, p, q, dual=False) -> Mat:
        key = ("P", p, q, dual)
        if key in self._cache:
            return self._cache[key]
        d = self.dim(p, q)
        Hb = self.harmonic_basis(p, q, dual)
        if not Hb:
            P = Mat.zeros(d, d)
        else:
            B = Mat.from_columns(Hb, d)
            A = self.gram(p, q, dual).transpose()
            BH = B.H()
            P = B @ inverse(BH @ A @ B) @ BH @ A
        self._cache[key] = P
        return P

    def greens_operator(self, p, q, dual=False) -> Mat:
        """G = (Delta + H)^{-1} - H: inverse of Delta on the complement of harmonics."""
        key = ("G", p, q, dual)
        if key not in self._cache:
            H = self.harmonic_projection(p, q, dual)
            self._cache[key] = inverse(self.laplacian(p, q, dual) + H) - H
        return self._cache[key]

    def hodge_decomposition(self, p, q, dual=False) -> dict:
        """Dimensions and orthogonality of im dbar (+) harmonics (+) im dbar^*."""
        n = self.n
        M = self.gram(p, q, dual)
        exact = column_space(self.dbar(p, q - 1, dual)) if q > 0 else []
        coexact = column_space(self.dbar_adjoint(p, q + 1, dual)) if q < n else []
        harm = self.harmonic_basis(p, q, dual)

        def orth(U, V):
            return all(not sum((a * b for a, b in zip(u, M @ vec_conj(v)) if a and b), ZERO)
                       for u in U for v in V)

        return {
            "dim": self.dim(p, q),
            "exact": len(exact), "harmonic": len(harm), "coexact": len(coexact),
            "orthogonal": orth(exact, harm) and orth(harm, coexact) and orth(exact, coexact),
            "complete": len(exact) + len(harm) + len(coexact) == self.dim(p, q),
        }

    def hodge_decomposition_check(self, p, q, dual=False) -> bool:
        r = self.hodge_decomposition(p, q, dual)
        return r["orthogonal"] and r["complete"]

    # --- Serre duality ---------------------------------------------------
    def serre_check(self, p, q, shifts: int = 1, seed: int = 0) -> SerreReport:
        import random
        n = self.n
        A = self.harmonic_basis(p, q)
        B = self.harmonic_basis(n - p, n - q, dual=True)
        W = self.pairing(p, q)
        mat = [[sum((x * y for x, y in zip(a, W @ list(b)) if x and y), ZERO) for b in B] for a in A]
        rk = rank(Mat.from_dense(mat)) if A and B else 0
        independent = True
        if A and B and q > 0:
            rng = random.Random(seed)
            D = self.dbar(p, q - 1)
            for _ in range(shifts):
                gamma = [Gauss(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(D.ncols)]
                dg = D @ gamma
                for ai, a in enumerate(A):
                    shifted = [x + y for x, y in zip(a, dg)]
                    row = [sum((x * y for x, y in zip(shifted, W @ list(b)) if x and y), ZERO)
                           for b in B]
                    if row != mat[ai]:
                        independent = False
        return SerreReport(p, q, len(A), len(B), mat, rk, independent)
