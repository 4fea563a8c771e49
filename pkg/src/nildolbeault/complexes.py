"""Chevalley-Eilenberg and Dolbeault cochain complexes as sparse exact matrices.

Form bases for Lambda^{p,q} g^* (x) E^{1,0} are ordered by (P, Q, s): the
(1,0) multi-index P, then the (0,1) multi-index Q, then the module index s.
Basis element (P, Q, s) is omega^P ^ omegabar^Q (x) V_s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from ._parallel import pmap
from .algebra import ComplexStructure, LieAlgebra, SplitBasis, complexify, _freeze
from .exterior import binom, index_of, insert_sign, multi_indices, sort_sign
from .linalg import Mat, nullspace, rank, reduce_modulo, row_space, column_space
from .representations import (InducedAction, Kind, Representation, classify_module,
                              dual_module, induced_01_action, trivial_module)
from .scalars import ONE, ZERO

__all__ = ["CochainBasis", "chevalley_differential", "chevalley_complex",
           "CohomologySummary", "cohomology_dims", "de_rham", "zero_one_algebra",
           "form_module_action", "dolbeault_complex", "DolbeaultData",
           "del_delbar_decomposition", "NotAComplex", "form_index", "bidegree_basis"]


class NotAComplex(ValueError):
    pass


@dataclass(frozen=True)
class CochainBasis:
    degree: tuple                # (k,) or (p, q)
    items: tuple                 # (multi-index, module index) or (P, Q, s)

    def __len__(self):
        return len(self.items)


def chevalley_differential(alg: LieAlgebra, action: Optional[Sequence[Mat]], dimW: int, k: int) -> Mat:
    """d_k : Lambda^k g^* (x) W -> Lambda^{k+1} g^* (x) W.

    ``action[i]`` is the matrix of the basis vector x_i on W (None: trivial).
    Columns index (I, s) with position idx(I)*dimW + s.
    """
    D = alg.dim
    src = index_of(D, k)
    tgt = multi_indices(D, k + 1)
    entries = []
    for r, Jm in enumerate(tgt):
        base_out = r * dimW
        # action term: sum_i (-1)^{i+1} x_{j_i} . alpha(..., hat x_{j_i}, ...)
        if action is not None:
            for a, j in enumerate(Jm):
                rest = Jm[:a] + Jm[a + 1:]
                col0 = src[rest] * dimW
                mat = action[j]
                sgn = 1 if a % 2 == 0 else -1
                for t, row in mat.rows.items():
                    for s, v in row.items():
                        entries.append((base_out + t, col0 + s, v if sgn > 0 else -v))
        # bracket term: sum_{i<j} (-1)^{i+j} alpha([x_i, x_j], ...)
        for a in range(len(Jm)):
            for b in range(a + 1, len(Jm)):
                br = alg.bracket_basis(Jm[a], Jm[b])
                if not br:
                    continue
                rest = Jm[:a] + Jm[a + 1:b] + Jm[b + 1:]
                sab = 1 if (a + b) % 2 == 0 else -1
                for m, c in br.items():
                    s_ins, Im = insert_sign(m, rest)
                    if not s_ins:
                        continue
                    v = c if sab * s_ins > 0 else -c
                    col0 = src[Im] * dimW
                    for s in range(dimW):
                        entries.append((base_out + s, col0 + s, v))
    return Mat.from_entries(len(tgt) * dimW, len(src) * dimW, entries)


def chevalley_complex(alg: LieAlgebra, action=None, dimW: int = 1):
    D = alg.dim
    dims = [binom(D, k) * dimW for k in range(D + 1)]
    return dims, [chevalley_differential(alg, action, dimW, k) for k in range(D)]


@dataclass
class CohomologySummary:
    labels: list          # degree labels (k or (p, q))
    dims: list            # cochain dimensions
    ranks: list           # rank of the outgoing differential
    kernels: list         # dim ker of the outgoing differential
    h: list
    representatives: list = field(default_factory=list)

    def euler_characteristic(self):
        return (sum((-1) ** i * d for i, d in enumerate(self.dims)),
                sum((-1) ** i * x for i, x in enumerate(self.h)))


def cohomology_dims(dims: Sequence[int], diffs: Sequence[Mat], labels=None,
                    representatives: bool = True, check: bool = True) -> CohomologySummary:
    """Exact cohomology of 0 -> C_0 -> C_1 -> ... with d_k = diffs[k]."""
    if len(diffs) != len(dims) - 1:
        raise ValueError("need one differential between consecutive degrees")
    for k, d in enumerate(diffs):
        if d.shape != (dims[k + 1], dims[k]):
            raise ValueError(f"d_{k} has shape {d.shape}, expected {(dims[k + 1], dims[k])}")
    if check:
        for k in range(len(diffs) - 1):
            if not (diffs[k + 1] @ diffs[k]).is_zero():
                raise NotAComplex(f"d_{k + 1} o d_{k} != 0")
    ranks = [rank(d) for d in diffs] + [0]
    kernels = [dims[k] - ranks[k] for k in range(len(dims))]
    h = [kernels[k] - (ranks[k - 1] if k else 0) for k in range(len(dims))]
    reps = []
    if representatives:
        for k in range(len(dims)):
            reps.append(_representatives(dims, diffs, k))
    return CohomologySummary(list(labels) if labels is not None else list(range(len(dims))),
                             list(dims), ranks, kernels, h, reps)


def _representatives(dims, diffs, k):
    n = dims[k]
    if n == 0:
        return []
    if k < len(diffs):
        ker = nullspace(diffs[k])
    else:
        ker = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    img = column_space(diffs[k - 1]) if k > 0 else []
    reduced = [reduce_modulo(v, img) for v in ker]
    reduced = [v for v in reduced if any(v)]
    return row_space(reduced, n) if reduced else []


def de_rham(L: LieAlgebra, representatives: bool = False) -> CohomologySummary:
    dims, diffs = chevalley_complex(L, None, 1)
    return cohomology_dims(dims, diffs, representatives=representatives)


# --- Dolbeault ---------------------------------------------------------

def zero_one_algebra(sb: SplitBasis) -> LieAlgebra:
    """g^{0,1} in the basis conj X_1..conj X_n."""
    n = sb.n
    C = sb.algebra
    c = [[[C.c[n + a][n + b][n + k] for k in range(n)] for b in range(n)] for a in range(n)]
    return LieAlgebra(n, _freeze(c), "g01")


def form_module_action(sb: SplitBasis, delta: Sequence[Mat], m: int, p: int):
    """Matrices of conj X_b on Lambda^p (g^{1,0})^* (x) E^{1,0}, basis (P, s).

    On one-forms (Xbar . omega)(Y) = -omega(pr^{1,0}[Xbar, Y]); extended as a
    derivation and tensored with delta on E^{1,0}.
    """
    n = sb.n
    C = sb.algebra
    Ps = multi_indices(n, p)
    pidx = {P: a for a, P in enumerate(Ps)}
    mats = []
    for b in range(n):
        entries = []
        # coefficient of X_j in [Xbar_b, X_l]
        coef = {}
        for l in range(n):
            for j, v in C.bracket_basis(n + b, l).items():
                if j < n:
                    coef.setdefault(j, []).append((l, v))
        for a, P in enumerate(Ps):
            for pos, j in enumerate(P):
                for l, v in coef.get(j, ()):
                    newP = P[:pos] + (l,) + P[pos + 1:]
                    sgn, Ps_ = sort_sign(newP)
                    if not sgn:
                        continue
                    val = -v if sgn > 0 else v
                    r = pidx[Ps_]
                    for s in range(m):
                        entries.append((r * m + s, a * m + s, val))
            for t, row in delta[b].rows.items():
                for s, v in row.items():
                    entries.append((a * m + t, a * m + s, v))
        mats.append(Mat.from_entries(len(Ps) * m, len(Ps) * m, entries))
    return mats


def form_index(n: int, p: int, q: int, m: int):
    """Map (P, Q, s) -> position in the form basis of Lambda^{p,q} (x) E^{1,0}."""
    P_idx, Q_idx = index_of(n, p), index_of(n, q)
    nq = len(Q_idx)
    return lambda P, Q, s: (P_idx[P] * nq + Q_idx[Q]) * m + s


def bidegree_basis(n, p, q, m) -> CochainBasis:
    return CochainBasis((p, q), tuple((P, Q, s) for P in multi_indices(n, p)
                                      for Q in multi_indices(n, q) for s in range(m)))


def _chev_to_form(mat: Mat, n, p, q, m) -> Mat:
    """Relabel a g^{0,1} Chevalley matrix (Q, (P, s)) -> form basis, times (-1)^p."""
    wdim = binom(n, p) * m
    Qs, Q1s = multi_indices(n, q), multi_indices(n, q + 1)
    Ps = multi_indices(n, p)
    src, tgt = form_index(n, p, q, m), form_index(n, p, q + 1, m)

    def relabel(pos, Qlist, f):
        qi, w = divmod(pos, wdim)
        pi, s = divmod(w, m)
        return f(Ps[pi], Qlist[qi], s)

    sgn = -1 if p % 2 else 1
    return Mat.from_entries(
        binom(n, p) * binom(n, q + 1) * m, binom(n, p) * binom(n, q) * m,
        ((relabel(i, Q1s, tgt), relabel(j, Qs, src), v if sgn > 0 else -v)
         for i, j, v in mat.entries()))


def dolbeault_complex(L: LieAlgebra, J: ComplexStructure, rep: Representation,
                      kind=None, p: int = 0, sb: SplitBasis = None, induced: InducedAction = None):
    """(bases, differentials) of Lambda^{p,*} g^* (x) E^{1,0} under dbar_E."""
    sb = sb or complexify(L, J)
    if induced is None:
        if kind is None:
            kind = classify_module(rep, J, sb)
        induced = induced_01_action(rep, kind, split=sb)
    n, m = sb.n, induced.split.m
    g01 = zero_one_algebra(sb)
    W = form_module_action(sb, induced.matrices, m, p)
    wdim = binom(n, p) * m
    bases = [bidegree_basis(n, p, q, m) for q in range(n + 1)]
    diffs = [_chev_to_form(chevalley_differential(g01, W, wdim, q), n, p, q, m) for q in range(n)]
    return bases, diffs


class DolbeaultData:
    """All dbar_E matrices of one (g, J, E), built lazily per p."""

    def __init__(self, L: LieAlgebra, J: ComplexStructure, rep: Representation, kind=None,
                 sb: SplitBasis = None):
        self.L, self.J, self.rep = L, J, rep
        self.sb = sb or complexify(L, J)
        mk = classify_module(rep, J, self.sb)
        if kind is None:
            kind = mk.kind
        elif mk.kind is not kind and mk.kind is not Kind.BOTH:
            raise ValueError(f"module classifies as {mk.kind.value}, not {kind.value}")
        if kind is Kind.NEITHER:
            raise ValueError("module is neither integrable nor anti-integrable")
        self.kind = kind
        self.induced = induced_01_action(rep, kind, split=self.sb)
        self.n = self.sb.n
        self.m = self.induced.split.m
        self._cols = {}

    def column(self, p):
        if p not in self._cols:
            self._cols[p] = dolbeault_complex(self.L, self.J, self.rep, p=p, sb=self.sb,
                                              induced=self.induced)
        return self._cols[p]

    def dim(self, p, q):
        return binom(self.n, p) * binom(self.n, q) * self.m

    def dbar(self, p, q) -> Mat:
        """dbar_E : (p, q) -> (p, q+1); a zero map outside 0 <= q < n."""
        if 0 <= q < self.n:
            return self.column(p)[1][q]
        return Mat.zeros(self.dim(p, q + 1) if q + 1 <= self.n else 0,
                         self.dim(p, q) if 0 <= q <= self.n else 0)

    def summary(self, p, representatives=True) -> CohomologySummary:
        bases, diffs = self.column(p)
        return cohomology_dims([len(b) for b in bases], diffs,
                               labels=[(p, q) for q in range(self.n + 1)],
                               representatives=representatives)

    def hodge_numbers(self):
        sums = pmap(lambda p: self.summary(p, representatives=False), range(self.n + 1))
        return {(p, q): s.h[q] for p, s in enumerate(sums) for q in range(self.n + 1)}

    def dual(self):
        return DolbeaultData(self.L, self.J, dual_module(self.rep), self.kind.dual(), self.sb)


def del_delbar_decomposition(L: LieAlgebra, J: ComplexStructure, sb: SplitBasis = None):
    """Split the Chevalley d of Lambda^* g_C^* into (del, dbar) blocks per (p, q).

    Returns {(p, q): (del: (p,q)->(p+1,q), dbar: (p,q)->(p,q+1))} in form bases.
    """
    sb = sb or complexify(L, J)
    n = sb.n
    C = sb.algebra
    out = {}
    for k in range(2 * n):
        d = chevalley_differential(C, None, 1, k)
        src = multi_indices(2 * n, k)
        tgt = multi_indices(2 * n, k + 1)
        blocks = {}
        for i, j, v in d.entries():
            Pj, Qj = _split_multi(src[j], n)
            Pi, Qi = _split_multi(tgt[i], n)
            p, q = len(Pj), len(Qj)
            if (len(Pi), len(Qi)) == (p + 1, q):
                which = 0
            elif (len(Pi), len(Qi)) == (p, q + 1):
                which = 1
            else:
                raise RuntimeError(f"d has a component of bidegree {(len(Pi), len(Qi))} on ({p},{q})")
            fi = form_index(n, len(Pi), len(Qi), 1)(Pi, Qi, 0)
            fj = form_index(n, p, q, 1)(Pj, Qj, 0)
            blocks.setdefault((p, q, which), []).append((fi, fj, v))
        for p in range(k + 1):
            q = k - p
            if p > n or q > n:
                continue
            src_dim = binom(n, p) * binom(n, q)
            dl = Mat.from_entries(binom(n, p + 1) * binom(n, q), src_dim, blocks.get((p, q, 0), []))
            db = Mat.from_entries(binom(n, p) * binom(n, q + 1), src_dim, blocks.get((p, q, 1), []))
            out[(p, q)] = (dl, db)
    for p in range(n + 1):
        for q in range(n + 1):
            if (p, q) not in out:
                src_dim = binom(n, p) * binom(n, q)
                out[(p, q)] = (Mat.zeros(binom(n, p + 1) * binom(n, q), src_dim),
                               Mat.zeros(binom(n, p) * binom(n, q + 1), src_dim))
    return out


def _split_multi(K, n):
    return tuple(x for x in K if x < n), tuple(x - n for x in K if x >= n)
