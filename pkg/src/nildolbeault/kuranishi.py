"""Invariant Kuranishi theory: bracket, power-series solution, obstructions.

Elements of Lambda^{0,q} g^* (x) g^{1,0} are dense vectors in the basis
omegabar^Q (x) X_s, position idx(Q) * n + s (the p = 0 slice of the form basis).
The series variables t_1..t_m pair with the RREF harmonic basis eta_1..eta_m of
(0,1)-forms; multidegrees are exponent tuples of length m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from ._parallel import pmap
from .algebra import ComplexStructure, ComplexSubspace, LieAlgebra, check_moduli_point
from .complexes import DolbeaultData, chevalley_differential, form_index
from .exterior import binom, index_of, interior, multi_indices, wedge_monomials
from .hodge import CompatibleMetric, HodgeTheory
from .linalg import column_space, reduce_modulo, row_space, vec_add, vec_is_zero, vec_scale, vec_sub
from .representations import Kind, adjoint_module
from .scalars import Gauss, ONE, ZERO, as_gauss

__all__ = ["AdjointForms", "FormalSeries", "ObstructionPolynomials", "ResidualOrder",
           "DeformationReport", "DeformedStructure", "kuranishi_series", "obstructions",
           "maurer_cartan_residual", "deformed_subspace", "deformation_report",
           "multidegrees", "format_monomial", "Kuranishi", "higher_orders_coexact", "GRAPH_SIGN"]

HALF = Gauss(ONE / 2)


def multidegrees(m: int, r: int):
    """Exponent tuples of length m and total degree r, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(m), r):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def format_monomial(mono) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"t{i + 1}")
        elif e:
            parts.append(f"t{i + 1}^{e}")
    return "*".join(parts) or "1"


def _mono_value(mono, t):
    v = ONE
    for x, e in zip(t, mono):
        if e:
            v = v * as_gauss(x) ** e
    return v


class AdjointForms:
    """Lie derivative and bracket on Lambda^{0,*} g^* (x) g^{1,0} for a fixed split basis."""

    def __init__(self, D: DolbeaultData):
        self.D = D
        self.sb = D.sb
        self.n = D.n
        if [list(v) for v in D.induced.split.V] != [list(x) for x in self.sb.X]:
            raise ValueError("adjoint module basis differs from the split basis of g^{1,0}")
        self.C = self.sb.algebra
        self._d = {}
        self._table = {}

    def dim(self, q):
        return binom(self.n, q) * self.n

    def full_d(self, form: dict) -> dict:
        """Chevalley d on Lambda g_C^* (coframe omega^0..omega^{n-1}, omegabar^0.. at n..2n-1)."""
        if not form:
            return {}
        k = len(next(iter(form)))
        if k not in self._d:
            self._d[k] = (chevalley_differential(self.C, None, 1, k), index_of(2 * self.n, k),
                          multi_indices(2 * self.n, k + 1))
        dk, src, tgt = self._d[k]
        vec = [ZERO] * len(src)
        for K, c in form.items():
            vec[src[K]] = vec[src[K]] + c
        out = dk @ vec
        return {tgt[i]: c for i, c in enumerate(out) if c}

    def lie_derivative(self, V, form: dict, project: bool = True) -> dict:
        """L_V of a (0,q)-form given on omegabar indices 0..n-1; V in X-coordinates.

        With V of type (1,0), i_V kills (0,q)-forms, so L_V = i_V d.  The result is
        projected to type (0,q) unless ``project`` is False (then C-indexed, mixed).
        """
        n = self.n
        lifted = {tuple(x + n for x in Q): c for Q, c in form.items()}
        vec = list(V) + [ZERO] * n
        res = interior(vec, self.full_d(lifted))
        if not project:
            return res
        return {tuple(x - n for x in K): c for K, c in res.items() if all(x >= n for x in K)}

    def _bracket_10(self, s, t):
        br = self.C.bracket_basis(s, t)
        if any(k >= self.n for k in br):
            raise ValueError("g^{1,0} is not a subalgebra")
        return br

    def _basis_bracket(self, Q, s, Q2, t) -> dict:
        """[omegabar^Q (x) X_s, omegabar^Q2 (x) X_t] as {(Q, s): coeff}."""
        key = (Q, s, Q2, t)
        if key in self._table:
            return self._table[key]
        n = self.n
        out = {}

        def add(A, B, u, c):
            sgn, K = wedge_monomials(A, B)
            if sgn:
                out[(K, u)] = out.get((K, u), ZERO) + (c if sgn > 0 else -c)

        ev = lambda k: [ONE if i == k else ZERO for i in range(n)]
        for A, c in self.lie_derivative(ev(t), {Q: ONE}).items():
            add(Q2, A, s, c)
        for B, c in self.lie_derivative(ev(s), {Q2: ONE}).items():
            add(Q, B, t, c)
        for u, c in self._bracket_10(s, t).items():
            add(Q, Q2, u, as_gauss(c))
        out = {k: v for k, v in out.items() if v}
        self._table[key] = out
        return out

    def bracket(self, alpha, beta, q1: int = 1, q2: int = 1):
        n = self.n
        Qs1, Qs2 = multi_indices(n, q1), multi_indices(n, q2)
        idx = index_of(n, q1 + q2)
        out = [ZERO] * self.dim(q1 + q2)
        for i, a in enumerate(alpha):
            if not a:
                continue
            Q, s = Qs1[i // n], i % n
            for j, b in enumerate(beta):
                if not b:
                    continue
                ab = a * b
                for (K, u), c in self._basis_bracket(Q, s, Qs2[j // n], j % n).items():
                    pos = idx[K] * n + u
                    out[pos] = out[pos] + ab * c
        return out

    def apply(self, phi, vec01):
        """phi as a map g^{0,1} -> g^{1,0}: phi(sum w_j Xbar_j), phi a (0,1)-form vector."""
        n = self.n
        out = [ZERO] * n
        for j, w in enumerate(vec01):
            if w:
                for k in range(n):
                    c = phi[j * n + k]
                    if c:
                        out[k] = out[k] + w * c
        return out


@dataclass
class FormalSeries:
    nvars: int
    order: int
    coeffs: dict          # multidegree -> (0,1)-form vector

    def degree(self, r):
        return {mu: v for mu, v in self.coeffs.items() if sum(mu) == r}

    def evaluate(self, t, graded=False):
        """Sum of coefficients at t; with ``graded`` a list indexed by total degree."""
        size = len(next(iter(self.coeffs.values()))) if self.coeffs else 0
        parts = [[ZERO] * size for _ in range(self.order + 1)]
        for mu, v in self.coeffs.items():
            c = _mono_value(mu, t)
            if c:
                parts[sum(mu)] = vec_add(parts[sum(mu)], vec_scale(c, v))
        if graded:
            return parts
        total = [ZERO] * size
        for p in parts:
            total = vec_add(total, p)
        return total


@dataclass
class ObstructionPolynomials:
    nvars: int
    order: int
    polys: list           # per xi_i: {multidegree: coeff}

    @property
    def k(self):
        return len(self.polys)

    def evaluate(self, t):
        return [sum((c * _mono_value(mu, t) for mu, c in p.items()), ZERO) for p in self.polys]

    def is_zero(self):
        return all(not p for p in self.polys)

    def lowest_degree(self):
        degs = [sum(mu) for p in self.polys for mu in p]
        return min(degs) if degs else None

    def format(self):
        return [" + ".join(f"({c})*{format_monomial(mu)}" for mu, c in sorted(p.items())) or "0"
                for p in self.polys]


@dataclass
class ResidualOrder:
    order: int
    zero: bool
    harmonic_zero: bool
    green_zero: bool
    consistent: bool     # (r_mu, xi_i) = -1/2 g_{i,mu} for every mu of this order


def _convolve(forms: AdjointForms, phi: dict, mu):
    """sum over alpha + beta = mu with both nonzero of [phi_alpha, phi_beta]."""
    total = [ZERO] * forms.dim(2)
    for a, va in phi.items():
        b = tuple(x - y for x, y in zip(mu, a))
        if min(b) < 0 or not any(b) or not any(a):
            continue
        vb = phi.get(b)
        if vb is None:
            continue
        total = vec_add(total, forms.bracket(va, vb))
    return total


class Kuranishi:
    """Bundles the adjoint Dolbeault data, Hodge theory and harmonic bases."""

    def __init__(self, L: LieAlgebra, J: ComplexStructure, metric: Optional[CompatibleMetric] = None):
        rep = adjoint_module(L, J)
        self.D = DolbeaultData(L, J, rep)
        self.hodge = HodgeTheory(self.D, metric)
        self.forms = AdjointForms(self.D)
        self.eta = self.hodge.harmonic_basis(0, 1)
        self.xi = self.hodge.harmonic_basis(0, 2) if self.D.n >= 2 else []
        self._dstar_G = None

    @property
    def m(self):
        return len(self.eta)

    @property
    def k(self):
        return len(self.xi)

    def dstar_green(self):
        if self._dstar_G is None:
            self._dstar_G = self.hodge.dbar_adjoint(0, 2) @ self.hodge.greens_operator(0, 2)
        return self._dstar_G


def kuranishi_series(K: Kuranishi, order: int = 4) -> FormalSeries:
    m = K.m
    phi = {}
    for i, mu in enumerate(multidegrees(m, 1)):
        phi[mu] = list(K.eta[i])
    if K.D.n < 2:
        return FormalSeries(m, order, phi)
    AG = K.dstar_green()
    for r in range(2, order + 1):
        mus = multidegrees(m, r)
        vals = pmap(lambda mu: vec_scale(HALF, AG @ _convolve(K.forms, phi, mu)), mus)
        for mu, v in zip(mus, vals):
            if not vec_is_zero(v):
                phi[mu] = v
    return FormalSeries(m, order, phi)


def _bracket_square(K: Kuranishi, series: FormalSeries):
    """[phi, phi] per multidegree up to the series order."""
    out = {}
    if K.D.n < 2:
        return out
    for r in range(2, series.order + 1):
        for mu in multidegrees(series.nvars, r):
            v = _convolve(K.forms, series.coeffs, mu)
            if not vec_is_zero(v):
                out[mu] = v
    return out


def obstructions(K: Kuranishi, series: FormalSeries, square=None) -> ObstructionPolynomials:
    """g_i(t) = ([phi, phi], xi_i), the inner product being linear in [phi, phi]."""
    square = _bracket_square(K, series) if square is None else square
    polys = []
    for x in K.xi:
        p = {}
        for mu, v in square.items():
            c = K.hodge.inner(v, x, 0, 2)
            if c:
                p[mu] = c
        polys.append(p)
    return ObstructionPolynomials(series.nvars, series.order, polys)


def maurer_cartan_residual(K: Kuranishi, series: FormalSeries, square=None, obs=None):
    """r = dbar phi - 1/2 [phi, phi] per multidegree, with harmonic/Green diagnostics.

    Returns (residual dict, list of ResidualOrder).
    """
    square = _bracket_square(K, series) if square is None else square
    obs = obstructions(K, series, square) if obs is None else obs
    n = K.D.n
    dbar = K.D.dbar(0, 1) if n >= 2 else None
    Hproj = K.hodge.harmonic_projection(0, 2) if n >= 2 else None
    res = {}
    report = []
    for r in range(1, series.order + 1):
        zero = harm0 = green0 = consistent = True
        for mu in multidegrees(series.nvars, r):
            if n < 2:
                continue
            v = dbar @ series.coeffs[mu] if mu in series.coeffs else [ZERO] * K.forms.dim(2)
            if mu in square:
                v = vec_sub(v, vec_scale(HALF, square[mu]))
            if vec_is_zero(v):
                for p in obs.polys:
                    consistent &= mu not in p
                continue
            res[mu] = v
            zero = False
            h = Hproj @ v
            harm0 &= vec_is_zero(h)
            green0 &= vec_is_zero(vec_sub(v, h))
            for x, p in zip(K.xi, obs.polys):
                consistent &= K.hodge.inner(v, x, 0, 2) == -HALF * p.get(mu, ZERO)
        report.append(ResidualOrder(r, zero, harm0, green0, consistent))
    return res, report


@dataclass
class DeformedStructure:
    subspace: ComplexSubspace
    transversal: bool
    integrable: bool
    defect_by_order: list     # [zero?] for s-orders 0..order of the closure defect along s*t
    witness: Optional[tuple] = None
    graph_sign: int = -1


# With the bracket and d used here, the recursion phi_r = 1/2 dbar^* G [phi, phi]
# solves dbar phi = 1/2 [phi, phi], and that equation is the closure condition for
# span{Xbar - phi(Xbar)}; span{Xbar + phi(Xbar)} needs dbar phi = -1/2 [phi, phi].
# The two families differ by t -> -t.  Iwasawa separates them at order 2.
GRAPH_SIGN = -1


def _signed(series: FormalSeries, sign: int) -> FormalSeries:
    if sign == 1:
        return series
    return FormalSeries(series.nvars, series.order,
                        {mu: [-x for x in v] for mu, v in series.coeffs.items()})


def _defect_series(K: Kuranishi, series: FormalSeries, t):
    """Closure defect of span{Xbar_j + phi(s t)(Xbar_j)} as a polynomial in s.

    For w = [Y_i, Y_j] the defect is w^{1,0} - phi(w^{0,1}); returns per-power
    g^{1,0}-vectors for each pair (i, j), truncated at the series order.
    """
    n, N = K.D.n, series.order
    C = K.forms.C
    parts = series.evaluate(t, graded=True)
    forms = K.forms

    def pmul(A, B):
        """Product of polynomials in s with bilinear bracket of C-vectors."""
        out = {}
        for a, va in A.items():
            for b, vb in B.items():
                if a + b > N:
                    continue
                w = C.bracket(va, vb)
                out[a + b] = vec_add(out.get(a + b, [ZERO] * (2 * n)), w)
        return out

    def Y(j):
        poly = {0: [ONE if i == n + j else ZERO for i in range(2 * n)]}
        for r in range(1, N + 1):
            img = forms.apply(parts[r], [ONE if i == j else ZERO for i in range(n)])
            if any(img):
                poly[r] = img + [ZERO] * n
        return poly

    Ys = [Y(j) for j in range(n)]
    defects = [[ZERO] * n for _ in range(N + 1)]
    flags = [True] * (N + 1)
    for i in range(n):
        for j in range(i + 1, n):
            w = pmul(Ys[i], Ys[j])
            for a in range(N + 1):
                wa = w.get(a)
                d = list(wa[:n]) if wa else [ZERO] * n
                for b in range(0, a + 1):
                    wb = w.get(a - b)
                    if b >= 1 and wb is not None and any(wb[n:]):
                        d = vec_sub(d, forms.apply(parts[b], wb[n:]))
                if any(d):
                    flags[a] = False
    return flags


def deformed_subspace(K: Kuranishi, series: FormalSeries, t,
                      graph_sign: int = GRAPH_SIGN) -> DeformedStructure:
    """span{Xbar_j + graph_sign * phi(t)(Xbar_j)} and its bracket-closure report."""
    if graph_sign not in (1, -1):
        raise ValueError("graph_sign must be +1 or -1")
    n = K.D.n
    sb = K.D.sb
    series = _signed(series, graph_sign)
    phi_t = series.evaluate(t)
    rows = []
    for j in range(n):
        img = K.forms.apply(phi_t, [ONE if i == j else ZERO for i in range(n)])
        cvec = img + [ONE if i == j else ZERO for i in range(n)]
        rows.append(tuple(sb.P @ cvec))
    sub = ComplexSubspace(tuple(rows))
    mp = check_moduli_point(K.D.L, sub)
    return DeformedStructure(sub, mp.transversality, mp.member, _defect_series(K, series, t),
                             mp.witness, graph_sign)


def higher_orders_coexact(K: Kuranishi, series: FormalSeries) -> bool:
    """Every coefficient of degree >= 2 lies in the image of dbar^* (and so is orthogonal to harmonics)."""
    higher = [v for mu, v in series.coeffs.items() if sum(mu) >= 2]
    if not higher:
        return True
    basis = row_space(column_space(K.hodge.dbar_adjoint(0, 2)), K.forms.dim(1))
    P = K.hodge.harmonic_projection(0, 1)
    return all(vec_is_zero(reduce_modulo(v, basis)) and vec_is_zero(P @ v) for v in higher)


@dataclass
class DeformationReport:
    m: int
    k: int
    order: int
    series: FormalSeries
    obstructions: ObstructionPolynomials
    residual: dict
    residual_orders: list
    higher_orders_coexact: bool
    evaluation: Optional[DeformedStructure] = None


def deformation_report(L: LieAlgebra, J: ComplexStructure, order: int = 4,
                       metric: Optional[CompatibleMetric] = None, t=None) -> DeformationReport:
    K = Kuranishi(L, J, metric)
    series = kuranishi_series(K, order)
    square = _bracket_square(K, series)
    obs = obstructions(K, series, square)
    res, orders = maurer_cartan_residual(K, series, square, obs)
    coexact = higher_orders_coexact(K, series)
    ev = deformed_subspace(K, series, t) if t is not None else None
    return DeformationReport(K.m, K.k, order, series, obs, res, orders, coexact, ev)
