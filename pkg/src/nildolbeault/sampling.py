"""Seeded random instances: nilpotent algebras with complex structure, J's, modules.

Two-step algebras come from complex structure equations
    d omega^k = sum a^k_ij omega^i ^ omega^j + sum b^k_ij omega^i ^ omegabar^j   (i, j <= r < k)
with omega^1..omega^r closed; no (0,2) part means J is integrable, and the
derived algebra is central, so Jacobi holds automatically.
"""

from __future__ import annotations

import random
from typing import Optional

from .algebra import ComplexStructure, LieAlgebra, complexify, real_form_from_split
from .linalg import Mat, NotInvertible, inverse, nullspace, rank
from .representations import (Kind, Representation, adjoint_module, dual_module, semidirect_product,
                              standard_I, trivial_module)
from .scalars import Gauss, ONE, ZERO, as_gauss, as_rational
from gmpy2 import mpq

__all__ = ["small_rational", "small_gauss", "random_gauss_vector", "random_two_step",
           "random_invertible", "change_basis", "random_J", "random_structure",
           "random_lower_module", "random_module", "random_nilpotent_with_J",
           "random_compatible_metric"]


def small_rational(rng: random.Random, size: int = 3, dens=(1, 1, 2, 3)):
    return mpq(rng.randint(-size, size), rng.choice(dens))


def small_gauss(rng: random.Random, size: int = 3):
    return Gauss(small_rational(rng, size), small_rational(rng, size))


def random_gauss_vector(rng, n, size=3):
    return [small_gauss(rng, size) for _ in range(n)]


def random_two_step(rng: random.Random, n: int, r: Optional[int] = None, density: float = 0.5,
                    name: str = "two-step"):
    """Real form (L, J) of a random 2-step algebra with integrable J, complex dim n."""
    r = r if r is not None else rng.randint(1, max(1, n - 1))
    sb = {}
    for k in range(r, n):
        for i in range(r):
            for j in range(i + 1, r):
                if rng.random() < density:
                    c = small_gauss(rng, 2)
                    if c:
                        sb.setdefault((i, j), {})[k] = -c
        for i in range(r):
            for j in range(r):
                if rng.random() < density:
                    b = small_gauss(rng, 2)
                    if not b:
                        continue
                    # d omega^k gets b omega^i ^ omegabar^j: [X_i, Xbar_j] has -b along X_k,
                    # and conj(b) along Xbar_k on the pair (X_j, Xbar_i)
                    sb.setdefault((i, n + j), {})
                    sb[(i, n + j)][k] = sb[(i, n + j)].get(k, ZERO) - b
                    sb.setdefault((j, n + i), {})
                    sb[(j, n + i)][n + k] = sb[(j, n + i)].get(n + k, ZERO) + b.conj()
    return real_form_from_split(n, sb, name)


def random_invertible(rng: random.Random, N: int, size: int = 2) -> Mat:
    while True:
        M = Mat.from_dense([[mpq(rng.randint(-size, size)) + (1 if i == j else 0) for j in range(N)]
                            for i in range(N)])
        if rank(M) == N:
            return M


def change_basis(L: LieAlgebra, J: Optional[ComplexStructure], P: Mat):
    """Express (L, J) in the basis given by the columns of P."""
    L2 = L.change_basis(P)
    if J is None:
        return L2, None
    Pinv = inverse(P)
    J2 = Pinv @ J.as_mat() @ P
    return L2, ComplexStructure(tuple(tuple(as_rational(as_gauss(x).re) for x in r)
                                      for r in J2.to_dense()))


def random_J(rng: random.Random, N: int, size: int = 1) -> ComplexStructure:
    """A J0 A^{-1} for random rational A; generically non-integrable."""
    A = random_invertible(rng, N, size)
    J0 = standard_I(N // 2).as_mat()
    M = A @ J0 @ inverse(A)
    return ComplexStructure(tuple(tuple(as_rational(as_gauss(x).re) for x in r) for r in M.to_dense()))


def _annihilator_forms(L: LieAlgebra, J: ComplexStructure, sb, anti: bool):
    """Coefficient vectors c with sum c_k omega^k (or omegabar^k) vanishing on [g,g]."""
    n = sb.n
    cof = sb.coframe
    rows = cof[n:] if anti else cof[:n]
    derived = [list(L.c[i][j]) for i in range(L.dim) for j in range(i + 1, L.dim)
               if any(L.c[i][j])]
    if not derived:
        return [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
    A = Mat.from_dense([[sum((w[t] * rows[k][t] for t in range(L.dim) if w[t]), ZERO)
                         for k in range(n)] for w in derived])
    return nullspace(A)


def random_lower_module(rng: random.Random, L: LieAlgebra, J: ComplexStructure,
                        kind: Kind = Kind.INTEGRABLE, sb=None) -> Representation:
    """E = C^2, rho(x) z = (0, a(x) z1 + b(x) conj z1) with a, b killing [g,g].

    All products of such maps vanish, so rho is a representation.  On E^{1,0}
    the antilinear part acts as conj(b(x)) V -> Vbar, so a (1,0)-form b gives
    Integrable, a (0,1)-form AntiIntegrable, a generic mix Neither (with high
    probability).
    """
    sb = sb or complexify(L, J)
    n = sb.n
    cof = sb.coframe
    ann10 = _annihilator_forms(L, J, sb, anti=False)
    ann01 = _annihilator_forms(L, J, sb, anti=True)

    def form(basis, rows):
        c = [ZERO] * n
        for v in basis:
            s = small_gauss(rng, 2)
            c = [x + s * y for x, y in zip(c, v)]
        return [sum((c[k] * rows[k][i] for k in range(n) if c[k]), ZERO) for i in range(L.dim)]

    zero = [ZERO] * L.dim
    f10, f01 = form(ann10, cof[:n]), form(ann01, cof[n:])
    a = [x + y for x, y in zip(f10, f01)]
    if kind is Kind.INTEGRABLE:
        b = form(ann10, cof[:n])
    elif kind is Kind.ANTI_INTEGRABLE:
        b = form(ann01, cof[n:])
    elif kind is Kind.BOTH:
        b = zero
    else:
        b = [x + y for x, y in zip(form(ann10, cof[:n]), form(ann01, cof[n:]))]
    rho = []
    for i in range(L.dim):
        ai, bi = as_gauss(a[i]), as_gauss(b[i])
        s, d = ai + bi, ai - bi
        block = [[s.re, -d.im], [s.im, d.re]]
        rho.append(Mat.from_entries(4, 4, [(2 + r, c, block[r][c]) for r in range(2) for c in range(2)
                                           if block[r][c]]))
    rep = Representation(L, 4, tuple(rho), standard_I(2), f"lower-{kind.value}")
    return rep


def _conjugate_module(rng, rep: Representation) -> Representation:
    """Q^{-1} rho Q with Q^{-1} I Q: same module in a random real basis."""
    Q = random_invertible(rng, rep.dimE, 1)
    Qi = inverse(Q)
    rho = tuple(Qi @ r @ Q for r in rep.rho)
    I2 = Qi @ rep.I.as_mat() @ Q
    real = lambda M: tuple(tuple(as_rational(as_gauss(x).re) for x in r) for r in M.to_dense())
    rho = tuple(Mat.from_dense([list(r) for r in real(m)]) for m in rho)
    return Representation(rep.base, rep.dimE, rho, ComplexStructure(real(I2)), rep.name + "~")


def random_module(rng: random.Random, L: LieAlgebra, J: ComplexStructure, kinds=None,
                  max_dim: int = 4, sb=None) -> Representation:
    """A random module of real dimension <= max_dim whose kind is in ``kinds``."""
    kinds = kinds or (Kind.INTEGRABLE, Kind.ANTI_INTEGRABLE, Kind.BOTH)
    choices = ["lower", "trivial"]
    if L.dim <= max_dim:
        choices += ["adjoint", "coadjoint"]
    while True:
        c = rng.choice(choices)
        if c == "trivial":
            rep = trivial_module(L, rng.randint(1, max_dim // 2))
        elif c == "adjoint":
            rep = adjoint_module(L, J)
        elif c == "coadjoint":
            rep = dual_module(adjoint_module(L, J))
        else:
            if max_dim < 4:
                continue
            rep = random_lower_module(rng, L, J, rng.choice(list(kinds)), sb)
        if rng.random() < 0.5:
            rep = _conjugate_module(rng, rep)
        return rep


def random_nilpotent_with_J(rng: random.Random, max_dim: int = 8):
    """(L, J) nilpotent, J integrable: a two-step algebra, maybe extended by a module,
    in a random rational basis."""
    if max_dim >= 8 and rng.random() < 0.25:
        L, J = random_two_step(rng, 2)
        rep = random_lower_module(rng, L, J, rng.choice([Kind.INTEGRABLE, Kind.BOTH]))
        L, J = semidirect_product(rep, J)
    else:
        n = rng.randint(1, max_dim // 2)
        L, J = random_two_step(rng, n)
    if rng.random() < 0.5:
        L, J = change_basis(L, J, random_invertible(rng, L.dim, 1))
    return L, J


def random_structure(rng: random.Random, L: LieAlgebra, integrable_bias: float = 0.3,
                     J0: Optional[ComplexStructure] = None) -> ComplexStructure:
    """Either a conjugate of a known integrable J0 by an automorphism-free random change
    (generically non-integrable) or J0 itself."""
    if J0 is not None and rng.random() < integrable_bias:
        return J0
    return random_J(rng, L.dim)


def random_compatible_metric(rng: random.Random, J: ComplexStructure):
    """A^T A + Id, averaged with J: symmetric, positive definite, J-invariant."""
    from .hodge import compatibilize_metric
    N = J.dim
    A = [[small_rational(rng, 2) for _ in range(N)] for _ in range(N)]
    g = [[sum(A[t][i] * A[t][j] for t in range(N)) + (1 if i == j else 0) for j in range(N)]
         for i in range(N)]
    return compatibilize_metric(g, J)
