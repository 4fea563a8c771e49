import random
from math import comb

import pytest
from hypothesis import given, settings

from nildolbeault.algebra import complexify
from nildolbeault.complexes import (DolbeaultData, NotAComplex, chevalley_complex, cohomology_dims,
                                    de_rham, del_delbar_decomposition, form_index)
from nildolbeault.exterior import multi_indices, wedge_monomials
from nildolbeault.linalg import Mat
from nildolbeault.representations import adjoint_module, dual_module, trivial_module
from nildolbeault.sampling import random_module, random_nilpotent_with_J
from nildolbeault.scalars import ZERO

import oracles
from strategies import seeds


@given(seeds)
def test_chevalley_squares_to_zero(seed):
    rng = random.Random(seed)
    L, J = random_nilpotent_with_J(rng, 8)
    rep = random_module(rng, L, J)
    diffs = chevalley_complex(L, rep.rho, rep.dimE)[1]
    for a, b in zip(diffs, diffs[1:]):
        assert (b @ a).is_zero()


@given(seeds)
@settings(max_examples=20)
def test_dbar_squares_to_zero(seed):
    rng = random.Random(seed)
    L, J = random_nilpotent_with_J(rng, 6)
    D = DolbeaultData(L, J, random_module(rng, L, J))
    for p in range(D.n + 1):
        for q in range(D.n - 1):
            assert (D.dbar(p, q + 1) @ D.dbar(p, q)).is_zero()


def test_betti_numbers(catalog):
    assert de_rham(catalog["heisenberg3"].algebra).h == [1, 2, 2, 1]
    assert de_rham(catalog["kodaira-thurston"].algebra).h == [1, 3, 4, 3, 1]


@pytest.mark.parametrize("name", ["heisenberg3", "kodaira-thurston", "iwasawa"])
def test_betti_numbers_match_oracle(catalog, name):
    assert de_rham(catalog[name].algebra).h == oracles.betti(catalog[name].algebra)


def test_not_a_complex_detected():
    d = Mat.from_entries(1, 1, [(0, 0, 1)])
    with pytest.raises(NotAComplex):
        cohomology_dims([1, 1, 1], [d, d])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_abelian_hodge_numbers(catalog, n):
    e = catalog[f"abelian-{2 * n}"]
    h = DolbeaultData(e.algebra, e.J, trivial_module(e.algebra)).hodge_numbers()
    assert all(h[(p, q)] == comb(n, p) * comb(n, q) for p in range(n + 1) for q in range(n + 1))


def test_iwasawa_hodge_numbers(catalog):
    iw = catalog["iwasawa"]
    h = DolbeaultData(iw.algebra, iw.J, trivial_module(iw.algebra)).hodge_numbers()
    assert [h[(0, q)] for q in range(4)] == [1, 2, 2, 1]
    assert h[(1, 0)] == 3
    ha = DolbeaultData(iw.algebra, iw.J, adjoint_module(iw.algebra, iw.J)).hodge_numbers()
    assert ha[(0, 1)] == 6


@pytest.mark.parametrize("name", ["kodaira-thurston", "iwasawa"])
@pytest.mark.parametrize("module", ["trivial", "adjoint", "coadjoint"])
def test_dolbeault_numbers_match_oracle(catalog, name, module):
    e = catalog[name]
    rep = {"trivial": trivial_module(e.algebra), "adjoint": adjoint_module(e.algebra, e.J),
           "coadjoint": dual_module(adjoint_module(e.algebra, e.J))}[module]
    assert DolbeaultData(e.algebra, e.J, rep).hodge_numbers() == oracles.dolbeault_numbers(
        e.algebra, e.J, rep)


@given(seeds)
@settings(max_examples=8)
def test_random_dolbeault_numbers_match_oracle(seed):
    rng = random.Random(seed)
    L, J = random_nilpotent_with_J(rng, 6)
    rep = random_module(rng, L, J, max_dim=4 if L.dim <= 4 else 2)
    assert DolbeaultData(L, J, rep).hodge_numbers() == oracles.dolbeault_numbers(L, J, rep)


def _leibniz_dbar(D, p, q):
    """dbar_E(beta (x) V_s) = (dbar beta) (x) V_s + sum_b omegabar^b ^ beta (x) delta_b V_s."""
    n, m = D.n, D.m
    form_dbar = del_delbar_decomposition(D.L, D.J, D.sb)[(p, q)][1]
    src, tgt = form_index(n, p, q, m), form_index(n, p, q + 1, m)
    plain_src = form_index(n, p, q, 1)
    plain_tgt = multi_indices(n, q + 1)
    P1 = multi_indices(n, p)
    entries = []
    for P in P1:
        for Q in multi_indices(n, q):
            col = form_dbar.column(plain_src(P, Q, 0))
            for s in range(m):
                for r, v in enumerate(col):
                    if not v:
                        continue
                    P2, Q2 = P1[r // len(plain_tgt)], plain_tgt[r % len(plain_tgt)]
                    entries.append((tgt(P2, Q2, s), src(P, Q, s), v))
                for b in range(n):
                    # omegabar^b ^ omega^P ^ omegabar^Q = (-1)^p omega^P ^ omegabar^b ^ omegabar^Q
                    sgn, Q2 = wedge_monomials((b,), Q)
                    if not sgn:
                        continue
                    sgn *= (-1) ** p
                    for t, v in enumerate(D.induced.matrices[b].column(s)):
                        if v:
                            entries.append((tgt(P, Q2, t), src(P, Q, s), v if sgn > 0 else -v))
    return Mat.from_entries(D.dim(p, q + 1), D.dim(p, q), entries)


@pytest.mark.parametrize("name", ["kodaira-thurston", "iwasawa"])
def test_dbar_satisfies_leibniz_rule(catalog, name):
    e = catalog[name]
    for rep in (trivial_module(e.algebra), adjoint_module(e.algebra, e.J),
                dual_module(adjoint_module(e.algebra, e.J))):
        D = DolbeaultData(e.algebra, e.J, rep)
        for p in range(D.n + 1):
            for q in range(D.n):
                assert D.dbar(p, q) == _leibniz_dbar(D, p, q)


def test_d_splits_into_del_and_dbar(catalog):
    iw = catalog["iwasawa"]
    blocks = del_delbar_decomposition(iw.algebra, iw.J)
    D = DolbeaultData(iw.algebra, iw.J, trivial_module(iw.algebra))
    for (p, q), (_, dbar) in blocks.items():
        if q < 3:
            assert dbar == D.dbar(p, q)
