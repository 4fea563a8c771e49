"""Sparse exact matrices over Q(i) and the RREF-based kernels built on them.

Matrices store rows as ``{col: value}`` dicts with no explicit zeros.  The
reduced row echelon form of a row space is unique, so every basis produced
here (kernels, images, representatives) is deterministic by construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import Gauss, ONE, ZERO, as_gauss

__all__ = ["Mat", "rref", "rank", "nullspace", "row_space", "column_space",
           "solve", "inverse", "reduce_modulo", "is_in_span", "dot", "vec_conj",
           "vec_add", "vec_sub", "vec_scale", "vec_is_zero", "NotInvertible"]


class NotInvertible(ValueError):
    pass


def _clean(d):
    return {k: v for k, v in d.items() if v}


class Mat:
    """Immutable-by-convention sparse matrix."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {} if rows is None else rows

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        """Accumulate ``(i, j, value)`` triplets; repeated positions add up."""
        rows: dict = {}
        for i, j, v in entries:
            if not v:
                continue
            r = rows.setdefault(i, {})
            s = r.get(j)
            r[j] = v if s is None else s + v
        out = {}
        for i, r in rows.items():
            r = _clean(r)
            if r:
                out[i] = r
        return cls(nrows, ncols, out)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]):
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = {}
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            r = {j: as_gauss(v) for j, v in enumerate(row) if v}
            if r:
                rows[i] = r
        return cls(nrows, ncols, rows)

    @classmethod
    def identity(cls, n, scale=ONE):
        return cls(n, n, {i: {i: as_gauss(scale)} for i in range(n)} if scale else {})

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols, {})

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows=None):
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls.from_entries(nrows, len(cols),
                                ((i, j, v) for j, c in enumerate(cols) for i, v in enumerate(c)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols=None):
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls.from_entries(len(rows), ncols,
                                ((i, j, v) for i, r in enumerate(rows) for j, v in enumerate(r)))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, ZERO)

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def to_dense(self):
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i][j] = as_gauss(v)
        return out

    def row(self, i):
        r = self.rows.get(i, {})
        return [as_gauss(r.get(j, ZERO)) for j in range(self.ncols)]

    def column(self, j):
        return [as_gauss(self.rows.get(i, {}).get(j, ZERO)) for i in range(self.nrows)]

    def columns(self):
        cols = [[ZERO] * self.nrows for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = as_gauss(v)
        return cols

    def transpose(self):
        return Mat.from_entries(self.ncols, self.nrows,
                                ((j, i, v) for i, r in self.rows.items() for j, v in r.items()))

    T = property(transpose)

    def conj(self):
        return Mat(self.nrows, self.ncols,
                   {i: {j: as_gauss(v).conj() for j, v in r.items()} for i, r in self.rows.items()})

    def H(self):
        return self.conj().transpose()

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = {}
            orows = other.rows
            for i, r in self.rows.items():
                acc: dict = {}
                for k, a in r.items():
                    ok = orows.get(k)
                    if not ok:
                        continue
                    for j, b in ok.items():
                        s = acc.get(j)
                        acc[j] = a * b if s is None else s + a * b
                acc = _clean(acc)
                if acc:
                    out[i] = acc
            return Mat(self.nrows, other.ncols, out)
        # dense vector
        if len(other) != self.ncols:
            raise ValueError("vector length mismatch")
        res = [ZERO] * self.nrows
        for i, r in self.rows.items():
            s = ZERO
            for k, a in r.items():
                x = other[k]
                if x:
                    s = s + a * x
            res[i] = s
        return res

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        out = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            o = out.setdefault(i, {})
            for j, v in r.items():
                s = o.get(j)
                o[j] = v if s is None else s + v
        return Mat(self.nrows, self.ncols, {i: c for i, r in out.items() if (c := _clean(r))})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return Mat.zeros(self.nrows, self.ncols)
        return Mat(self.nrows, self.ncols,
                   {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})

    def is_zero(self):
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def submatrix(self, row_idx, col_idx):
        cpos = {c: k for k, c in enumerate(col_idx)}
        out = {}
        for a, i in enumerate(row_idx):
            r = self.rows.get(i)
            if not r:
                continue
            nr = {cpos[j]: v for j, v in r.items() if j in cpos}
            if nr:
                out[a] = nr
        return Mat(len(row_idx), len(col_idx), out)

    def row_dicts(self):
        return [self.rows.get(i, {}) for i in range(self.nrows)]

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def hstack(mats: Sequence[Mat]) -> Mat:
    nrows = mats[0].nrows
    entries = []
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("hstack row mismatch")
        entries.extend((i, j + off, v) for i, j, v in m.entries())
        off += m.ncols
    return Mat.from_entries(nrows, off, entries)


def vstack(mats: Sequence[Mat]) -> Mat:
    ncols = mats[0].ncols
    entries = []
    off = 0
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("vstack column mismatch")
        entries.extend((i + off, j, v) for i, j, v in m.entries())
        off += m.nrows
    return Mat.from_entries(off, ncols, entries)


def block_diag(mats: Sequence[Mat]) -> Mat:
    entries = []
    ro = co = 0
    for m in mats:
        entries.extend((i + ro, j + co, v) for i, j, v in m.entries())
        ro += m.nrows
        co += m.ncols
    return Mat.from_entries(ro, co, entries)


# --- row reduction -------------------------------------------------------

def _sub_scaled(v: dict, c, w: dict):
    """v -= c * w in place."""
    for k, x in w.items():
        y = v.get(k)
        nv = -(c * x) if y is None else y - c * x
        if nv:
            v[k] = nv
        elif y is not None:
            del v[k]


def _rref_basis(rows: Iterable[dict]) -> dict:
    basis: dict = {}
    for r in rows:
        v = {k: as_gauss(x) for k, x in r.items() if x}
        for p in [k for k in v if k in basis]:
            c = v.get(p)
            if c:
                _sub_scaled(v, c, basis[p])
        if not v:
            continue
        p = min(v)
        inv = ONE / v[p]
        v = {k: x * inv for k, x in v.items()}
        for b in basis.values():
            c = b.get(p)
            if c:
                _sub_scaled(b, c, v)
        basis[p] = v
    return basis


def rref(rows: Iterable[dict]):
    """Fully reduced row echelon form of a list of sparse rows.

    Returns (rows sorted by pivot, pivot columns).
    """
    basis = _rref_basis(rows)
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def _as_rows(x, ncols=None):
    if isinstance(x, Mat):
        return x.row_dicts(), x.ncols
    rows = [{j: v for j, v in enumerate(r) if v} for r in x]
    return rows, (ncols if ncols is not None else (len(x[0]) if x else 0))


def rank(m) -> int:
    rows, _ = _as_rows(m)
    return len(_rref_basis(rows))


def row_space(vectors, ncols=None):
    """RREF basis (dense lists) of the span of the given dense vectors."""
    rows, n = _as_rows(vectors, ncols)
    red, _ = rref(rows)
    return [[r.get(j, ZERO) for j in range(n)] for r in red]


def column_space(m: Mat):
    """RREF basis of the image of m (vectors of length m.nrows)."""
    return row_space(m.transpose())


def nullspace(m: Mat):
    """RREF basis of ker m, as dense vectors of length m.ncols."""
    red, pivots = rref(m.row_dicts())
    pset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pset]
    vecs = []
    for f in free:
        x = [ZERO] * m.ncols
        x[f] = ONE
        for r, p in zip(red, pivots):
            c = r.get(f)
            if c:
                x[p] = -c
        vecs.append(x)
    return row_space(vecs, m.ncols) if vecs else []


def reduce_modulo(vec, basis_rref):
    """Reduce a dense vector against an RREF basis (dense rows)."""
    v = {j: x for j, x in enumerate(vec) if x}
    for b in basis_rref:
        p = next(j for j, x in enumerate(b) if x)
        c = v.get(p)
        if c:
            _sub_scaled(v, c, {j: x for j, x in enumerate(b) if x})
    return [v.get(j, ZERO) for j in range(len(vec))]


def is_in_span(vec, vectors) -> bool:
    basis = row_space(vectors, len(vec)) if vectors else []
    return vec_is_zero(reduce_modulo(vec, basis))


def solve(m: Mat, b):
    """One exact solution of m x = b, or None when inconsistent."""
    aug = [dict(r) for r in m.row_dicts()]
    for i, bi in enumerate(b):
        if bi:
            aug[i][m.ncols] = as_gauss(bi)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [ZERO] * m.ncols
    for r, p in zip(red, pivots):
        x[p] = r.get(m.ncols, ZERO)
    return x


def inverse(m: Mat) -> Mat:
    n = m.nrows
    if n != m.ncols:
        raise NotInvertible("non-square matrix")
    aug = []
    for i in range(n):
        r = dict(m.rows.get(i, {}))
        r[n + i] = ONE
        aug.append(r)
    red, pivots = rref(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise NotInvertible("singular matrix")
    return Mat.from_entries(n, n, ((i, j - n, v) for i, r in enumerate(red)
                                   for j, v in r.items() if j >= n))


# --- dense vector helpers ----------------------------------------------

def dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def vec_conj(u):
    return [as_gauss(x).conj() for x in u]


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, u):
    return [c * a for a in u]


def vec_is_zero(u) -> bool:
    return not any(u)
