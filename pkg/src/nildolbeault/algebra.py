"""Lie algebras by structure constants, almost complex structures, integrability.

Conventions: basis vectors are 0-based internally (reports and files are
1-based).  ``c[i][j][k]`` is the coefficient of e_k in [e_i, e_j].  A matrix
``J`` acts on column vectors, so column j of J is the image J e_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .linalg import (Mat, inverse, rank, reduce_modulo, row_space, nullspace,
                     vec_is_zero)
from .scalars import Gauss, ONE, ZERO, I, as_rational, as_gauss

__all__ = [
    "LieAlgebra", "ValidationReport", "validate_algebra", "lower_central_series",
    "is_nilpotent", "ComplexStructure", "NijenhuisResult", "nijenhuis",
    "is_integrable_structure", "ComplexSubspace", "structure_to_subspace",
    "subspace_to_structure", "SplitBasis", "complexify", "NotIntegrableError",
    "SubspaceError", "ModuliPoint", "check_moduli_point", "greedy_pivots",
    "mat_vec", "real_form_from_split",
]

HALF = Gauss(1) / 2


class NotIntegrableError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class SubspaceError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants over Q or Q(i); antisymmetry is not enforced here."""

    dim: int
    c: tuple
    name: str = ""
    # sparse view {(i, j): {k: value}} for every ordered pair with a nonzero bracket
    _sparse: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        sp = {}
        for i in range(self.dim):
            for j in range(self.dim):
                r = {k: v for k, v in enumerate(self.c[i][j]) if v}
                if r:
                    sp[(i, j)] = r
        object.__setattr__(self, "_sparse", sp)

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, name: str = "", field_=None):
        """Build from ``{(i, j): {k: coeff}}`` (0-based, i < j); antisymmetry implied."""
        conv = as_rational if field_ is None else field_
        zero = conv(0)
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if i == j:
                raise ValueError(f"bracket of e{i + 1} with itself")
            for k, v in coeffs.items():
                v = conv(v)
                c[i][j][k] = c[i][j][k] + v
                c[j][i][k] = c[j][i][k] - v
        return cls(dim, _freeze(c), name)

    @classmethod
    def abelian(cls, dim: int, name: str = ""):
        return cls.from_brackets(dim, {}, name or f"abelian-{dim}")

    def bracket_basis(self, i: int, j: int) -> dict:
        return self._sparse.get((i, j), {})

    def bracket(self, u: Sequence, v: Sequence) -> list:
        out = [ZERO] * self.dim
        nz_u = [(i, a) for i, a in enumerate(u) if a]
        nz_v = [(j, b) for j, b in enumerate(v) if b]
        for i, a in nz_u:
            for j, b in nz_v:
                r = self._sparse.get((i, j))
                if r:
                    ab = a * b
                    for k, x in r.items():
                        out[k] = out[k] + ab * x
        return out

    def ad(self, i: int) -> Mat:
        """Matrix of ad(e_i) on column vectors."""
        return Mat.from_entries(self.dim, self.dim,
                                ((k, j, v) for j in range(self.dim)
                                 for k, v in self.bracket_basis(i, j).items()))

    def is_real(self) -> bool:
        return all(not (isinstance(v, Gauss) and v.im)
                   for r in self._sparse.values() for v in r.values())

    def brackets_upper(self) -> dict:
        return {k: dict(v) for k, v in self._sparse.items() if k[0] < k[1]}

    def change_basis(self, P: Mat, name: str = ""):
        """Constants in the basis given by the columns of P."""
        Pinv = inverse(P)
        cols = P.columns()
        n = self.dim
        zero = ZERO
        c = [[[zero] * n for _ in range(n)] for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                w = Pinv @ self.bracket(cols[a], cols[b])
                c[a][b] = w
                c[b][a] = [-x for x in w]
        return LieAlgebra(n, _freeze(c), name or self.name)


def _freeze(c):
    return tuple(tuple(tuple(row) for row in m) for m in c)


@dataclass
class ValidationReport:
    antisymmetry: list = field(default_factory=list)  # (i, j, k, c_ijk, c_jik), 1-based
    jacobi: list = field(default_factory=list)        # ((i, j, k), residual), 1-based

    @property
    def valid(self) -> bool:
        return not self.antisymmetry and not self.jacobi

    def __bool__(self):
        return self.valid

    def to_json(self):
        from .scalars import to_json_scalar
        return {
            "valid": self.valid,
            "antisymmetry": [{"i": i, "j": j, "k": k, "c_ijk": to_json_scalar(a),
                              "c_jik": to_json_scalar(b)}
                             for i, j, k, a, b in self.antisymmetry],
            "jacobi": [{"triple": list(t), "residual": [to_json_scalar(x) for x in r]}
                       for t, r in self.jacobi],
        }


def validate_algebra(L: LieAlgebra) -> ValidationReport:
    rep = ValidationReport()
    n = L.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                a, b = L.c[i][j][k], L.c[j][i][k]
                if a + b:
                    rep.antisymmetry.append((i + 1, j + 1, k + 1, a, b))
    basis = [[ONE if t == s else ZERO for t in range(n)] for s in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = basis[i], basis[j], basis[k]
                r = [p + q + s for p, q, s in zip(L.bracket(L.bracket(x, y), z),
                                                  L.bracket(L.bracket(y, z), x),
                                                  L.bracket(L.bracket(z, x), y))]
                if not vec_is_zero(r):
                    rep.jacobi.append(((i + 1, j + 1, k + 1), r))
    return rep


def lower_central_series(L: LieAlgebra) -> list:
    """Dimensions of g, [g,g], [g,[g,g]], ... up to stabilisation."""
    n = L.dim
    current = [[ONE if t == s else ZERO for t in range(n)] for s in range(n)]
    dims = [n]
    basis = [[ONE if t == s else ZERO for t in range(n)] for s in range(n)]
    while True:
        spans = [L.bracket(x, y) for x in basis for y in current]
        spans = [v for v in spans if not vec_is_zero(v)]
        nxt = row_space(spans, n) if spans else []
        dims.append(len(nxt))
        if len(nxt) == 0 or len(nxt) == dims[-2]:
            return dims
        current = nxt


def is_nilpotent(L: LieAlgebra) -> bool:
    return lower_central_series(L)[-1] == 0


def mat_vec(M, v):
    """Dense (tuple-of-rows) matrix times vector."""
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in M]


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k) if A[i][t] and B[t][j]), ZERO)
             for j in range(m)] for i in range(n)]


@dataclass(frozen=True)
class ComplexStructure:
    J: tuple  # rows of a real rational matrix

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(as_rational(x) for x in r) for r in rows))

    @classmethod
    def from_images(cls, dim: int, images: dict):
        """``images[j] = {i: coeff}`` gives J e_j (0-based); unspecified columns are
        completed by J(J e_j) = -e_j when J e_j is a basis vector."""
        cols = {}
        for j, img in images.items():
            cols[j] = dict(img)
            if len(img) == 1:
                (i, v), = img.items()
                cols.setdefault(i, {j: -1 / as_rational(v)})
        if len(cols) != dim:
            raise ValueError("complex structure underdetermined")
        rows = [[as_rational(cols[j].get(i, 0)) for j in range(dim)] for i in range(dim)]
        return cls.from_rows(rows)

    @property
    def dim(self):
        return len(self.J)

    def apply(self, v):
        return mat_vec(self.J, v)

    def check(self):
        N = self.dim
        if N % 2:
            raise ValueError(f"odd dimension {N} admits no complex structure")
        sq = _mat_mul(self.J, self.J)
        for i in range(N):
            for j in range(N):
                if sq[i][j] != (-1 if i == j else 0):
                    raise ValueError("J^2 != -Id")
        return self

    def transpose(self):
        return ComplexStructure(tuple(zip(*self.J)))

    def as_mat(self) -> Mat:
        return Mat.from_dense(self.J)


@dataclass
class NijenhuisResult:
    integrable: bool
    witness: Optional[tuple] = None  # (i, j) 0-based
    residual: Optional[list] = None

    def __bool__(self):
        return self.integrable


def nijenhuis(L: LieAlgebra, J: ComplexStructure):
    """Return the Nijenhuis tensor as a function of two vectors."""
    def N(x, y):
        Jx, Jy = J.apply(x), J.apply(y)
        a = L.bracket(x, y)
        b = L.bracket(Jx, Jy)
        c = J.apply(L.bracket(Jx, y))
        d = J.apply(L.bracket(x, Jy))
        return [p - q + r + s for p, q, r, s in zip(a, b, c, d)]
    return N


def _basis(n, i):
    return [ONE if t == i else ZERO for t in range(n)]


def is_integrable_structure(L: LieAlgebra, J: ComplexStructure) -> NijenhuisResult:
    if J.dim != L.dim:
        raise ValueError("dimension mismatch between algebra and J")
    J.check()
    N = nijenhuis(L, J)
    n = L.dim
    for i in range(n):
        for j in range(i + 1, n):
            r = N(_basis(n, i), _basis(n, j))
            if not vec_is_zero(r):
                return NijenhuisResult(False, (i, j), r)
    return NijenhuisResult(True)


@dataclass(frozen=True)
class ComplexSubspace:
    rows: tuple  # n x N Gaussian rational rows

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(as_gauss(x) for x in r) for r in rows))

    def conj_rows(self):
        return [[x.conj() for x in r] for r in self.rows]


def greedy_pivots(candidates: Sequence[Sequence], want: int):
    """Indices of the first independent candidates, scanning left to right."""
    basis = []
    picked = []
    for idx, v in enumerate(candidates):
        r = reduce_modulo(v, basis)
        if not vec_is_zero(r):
            picked.append(idx)
            basis = row_space(basis + [list(v)], len(v))
            if len(picked) == want:
                break
    return picked


def _eigen_vectors(J: ComplexStructure, sign: int):
    """Pivot columns p_k and vectors 1/2 (e_p - sign*i J e_p)."""
    N = J.dim
    cands = []
    for j in range(N):
        Jc = [J.J[i][j] for i in range(N)]
        cands.append([HALF * ((ONE if i == j else ZERO) - sign * I * Jc[i]) for i in range(N)])
    piv = greedy_pivots(cands, N // 2)
    return piv, [cands[p] for p in piv]


def structure_to_subspace(L: LieAlgebra, J: ComplexStructure) -> ComplexSubspace:
    J.check()
    _, rows = _eigen_vectors(J, -1)
    return ComplexSubspace.from_rows(rows)


def subspace_to_structure(L: LieAlgebra, Vbar: ComplexSubspace) -> ComplexStructure:
    N = L.dim
    rows = [list(r) for r in Vbar.rows]
    if len(rows) * 2 != N or any(len(r) != N for r in rows):
        raise ValueError("subspace must have N/2 rows of length N")
    V = Vbar.conj_rows()
    P = Mat.from_columns(V + rows, N)
    if rank(P) < N:
        # a vector in V and in Vbar
        ker = nullspace(P)
        coeffs = ker[0][: len(V)]
        w = [sum((c * V[a][i] for a, c in enumerate(coeffs) if c), ZERO) for i in range(N)]
        raise SubspaceError("V and conj(V) intersect nontrivially", witness=w)
    n = N // 2
    D = Mat.from_entries(N, N, [(a, a, I) for a in range(n)] + [(n + a, n + a, -I) for a in range(n)])
    Jm = P @ D @ inverse(P)
    dense = Jm.to_dense()
    if any(x.im for r in dense for x in r):
        raise SubspaceError("induced J is not real")
    return ComplexStructure.from_rows([[x.re for x in r] for r in dense])


@dataclass(frozen=True)
class SplitBasis:
    """Basis X_1..X_n, conj(X_1..X_n) of g_C with the constants of g_C in it."""

    n: int
    pivots: tuple
    P: Mat          # columns: X_1..X_n, Xbar_1..Xbar_n in e-coordinates
    Pinv: Mat       # rows: coframe omega^1..omega^n, omegabar^1..omegabar^n
    algebra: LieAlgebra  # structure constants of g_C in the split basis

    @property
    def X(self):
        cols = self.P.columns()
        return cols[: self.n]

    @property
    def Xbar(self):
        cols = self.P.columns()
        return cols[self.n:]

    @property
    def coframe(self):
        return [self.Pinv.row(i) for i in range(2 * self.n)]

    def coords(self, v):
        """Split-basis coordinates of a vector of g_C."""
        return self.Pinv @ list(v)


def complexify(L: LieAlgebra, J: ComplexStructure) -> SplitBasis:
    J.check()
    if J.dim != L.dim:
        raise ValueError("dimension mismatch between algebra and J")
    piv, X = _eigen_vectors(J, +1)
    n = L.dim // 2
    Xbar = [[x.conj() for x in v] for v in X]
    P = Mat.from_columns(X + Xbar, L.dim)
    Pinv = inverse(P)
    cols = X + Xbar
    N = 2 * n
    c = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    for a in range(N):
        for b in range(a + 1, N):
            w = Pinv @ L.bracket(cols[a], cols[b])
            c[a][b] = w
            c[b][a] = [-x for x in w]
    for a in range(n):
        for b in range(a + 1, n):
            bad = [k for k in range(n, N) if c[a][b][k]]
            if bad:
                raise NotIntegrableError(
                    f"[X{a + 1}, X{b + 1}] leaves g^(1,0)", witness=(a, b, c[a][b]))
    # the conjugate inclusion follows by reality of the bracket; asserted anyway
    for a in range(n, N):
        for b in range(a + 1, N):
            if any(c[a][b][k] for k in range(n)):
                raise NotIntegrableError("g^(0,1) is not closed", witness=(a, b, c[a][b]))
    alg = LieAlgebra(N, _freeze(c), (L.name + "_C") if L.name else "")
    return SplitBasis(n, tuple(piv), P, Pinv, alg)


def real_form_from_split(n: int, split_brackets: dict, name: str = ""):
    """Real algebra and J from g_C constants in a basis (X_k, conj X_k).

    ``split_brackets`` maps (a, b) with 0 <= a < b < 2n to {k: Gauss}; indexes
    n..2n-1 stand for the conjugates.  Missing conjugate brackets are filled in
    by reality.  The real basis is a_k = X_k + Xbar_k, b_k = J a_k = i(X_k - Xbar_k),
    interleaved (a_1, b_1, a_2, b_2, ...).
    """
    N = 2 * n
    bar = lambda a: a + n if a < n else a - n
    full = {}
    for (a, b), coeffs in split_brackets.items():
        coeffs = {k: as_gauss(v) for k, v in coeffs.items() if v}
        full[(a, b)] = coeffs
        ca, cb = bar(a), bar(b)
        conj = {bar(k): v.conj() for k, v in coeffs.items()}
        key, sgn = ((ca, cb), 1) if ca < cb else ((cb, ca), -1)
        if key in split_brackets:
            given = {k: as_gauss(v) for k, v in split_brackets[key].items() if v}
            want = {k: v * sgn for k, v in conj.items()}
            if given != want:
                raise ValueError("split constants are not conjugation-symmetric")
        else:
            full[key] = {k: v * sgn for k, v in conj.items()}
    C = LieAlgebra.from_brackets(N, full, field_=as_gauss)
    # columns of Q: real basis vectors in split coordinates
    entries = []
    for k in range(n):
        entries += [(k, 2 * k, ONE), (k + n, 2 * k, ONE), (k, 2 * k + 1, I), (k + n, 2 * k + 1, -I)]
    Q = Mat.from_entries(N, N, entries)
    R = C.change_basis(Q)
    real = [[[_real(x) for x in row] for row in m] for m in R.c]
    L = LieAlgebra(N, _freeze(real), name)
    J = ComplexStructure.from_images(N, {2 * k: {2 * k + 1: 1} for k in range(n)})
    return L, J


def _real(x):
    x = as_gauss(x)
    if x.im:
        raise ValueError("structure constants are not real")
    return x.re


@dataclass
class ModuliPoint:
    transversality: bool
    closed_under_bracket: bool
    witness: Optional[tuple] = None

    @property
    def member(self):
        return self.transversality and self.closed_under_bracket


def check_moduli_point(L: LieAlgebra, Vbar: ComplexSubspace) -> ModuliPoint:
    N = L.dim
    rows = [list(r) for r in Vbar.rows]
    if N % 2 or len(rows) * 2 != N or any(len(r) != N for r in rows):
        raise ValueError("subspace dimension mismatch: need N/2 rows of length N")
    V = Vbar.conj_rows()
    transversal = rank(Mat.from_rows(rows + V, N)) == N
    if rank(Mat.from_rows(rows, N)) < len(rows):
        raise ValueError("rows are linearly dependent")
    basis = row_space(rows, N)
    witness = None
    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            w = L.bracket(rows[a], rows[b])
            if not vec_is_zero(reduce_modulo(w, basis)):
                witness = (a, b, w)
                break
        if witness:
            break
    return ModuliPoint(transversal, witness is None, witness)
