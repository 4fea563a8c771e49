import random

import pytest
from hypothesis import given, settings

from nildolbeault.algebra import ComplexStructure, LieAlgebra
from nildolbeault.complexes import DolbeaultData
from nildolbeault.hodge import (CompatibleMetric, HodgeTheory, NotPositiveDefinite,
                                compatibilize_metric, is_positive_definite)
from nildolbeault.linalg import Mat
from nildolbeault.representations import adjoint_module, dual_module, trivial_module
from nildolbeault.sampling import random_compatible_metric, random_gauss_vector, random_module, \
    random_nilpotent_with_J
from nildolbeault.scalars import Gauss, I, ONE, ZERO

from strategies import seeds


def _theory(entry, module, metric_seed=None):
    L, J = entry.algebra, entry.J
    rep = {"trivial": trivial_module(L), "adjoint": adjoint_module(L, J),
           "coadjoint": dual_module(adjoint_module(L, J))}[module]
    metric = None
    if metric_seed is not None:
        rng = random.Random(metric_seed)
        metric = CompatibleMetric(random_compatible_metric(rng, J), random_compatible_metric(rng, rep.I))
    return HodgeTheory(DolbeaultData(L, J, rep), metric)


def test_star_on_the_complex_line(catalog):
    H = _theory(catalog["abelian-2"], "trivial")
    assert H.norm_sq == 1
    star_w, nu = H.hodge_star_form([ONE], 1, 0)
    assert star_w == [-I]            # star omega = -i omega
    star_wb, _ = H.hodge_star_form([ONE], 0, 1)
    assert star_wb == [I]            # star omegabar = i omegabar


@pytest.mark.parametrize("name", ["kodaira-thurston", "iwasawa"])
@pytest.mark.parametrize("module", ["trivial", "adjoint"])
def test_hodge_package_with_random_metric(catalog, name, module):
    H = _theory(catalog[name], module, metric_seed=7)
    n = H.n
    h = H.D.hodge_numbers()
    rng = random.Random(1)
    for p in range(n + 1):
        for q in range(n + 1):
            assert H.star_involution_defect(p, q).is_zero()
            assert H.hodge_decomposition_check(p, q)
            assert len(H.harmonic_basis(p, q)) == h[(p, q)]
            if q < n:
                a = random_gauss_vector(rng, H.dim(p, q))
                b = random_gauss_vector(rng, H.dim(p, q + 1))
                lhs = H.inner(H.dbar(p, q) @ a, b, p, q + 1)
                rhs = H.inner(a, H.dbar_adjoint(p, q + 1) @ b, p, q)
                assert lhs == rhs


@given(seeds)
@settings(max_examples=10)
def test_adjointness_random_instances(seed):
    rng = random.Random(seed)
    L, J = random_nilpotent_with_J(rng, 6)
    rep = random_module(rng, L, J, max_dim=4 if L.dim <= 4 else 2)
    metric = CompatibleMetric(random_compatible_metric(rng, J), random_compatible_metric(rng, rep.I))
    H = HodgeTheory(DolbeaultData(L, J, rep), metric)
    for p in range(H.n + 1):
        for q in range(H.n):
            assert H.adjointness_defect(p, q).is_zero()


def test_green_and_projection(catalog):
    H = _theory(catalog["kodaira-thurston"], "adjoint", metric_seed=3)
    for p, q in [(0, 1), (1, 1), (0, 2)]:
        P = H.harmonic_projection(p, q)
        G = H.greens_operator(p, q)
        lap = H.laplacian(p, q)
        d = H.dim(p, q)
        assert P @ P == P
        assert lap @ G == Mat.identity(d) - P
        assert G @ P == Mat.zeros(d, d)
        # orthogonal projection: (P u, v) = (u, P v)
        rng = random.Random(0)
        u, v = random_gauss_vector(rng, d), random_gauss_vector(rng, d)
        assert H.inner(P @ u, v, p, q) == H.inner(u, P @ v, p, q)


@pytest.mark.parametrize("name", ["kodaira-thurston", "iwasawa", "abelian-4"])
def test_serre_duality(catalog, name):
    H = _theory(catalog[name], "adjoint", metric_seed=11)
    for p in range(H.n + 1):
        for q in range(H.n + 1):
            s = H.serre_check(p, q, shifts=2)
            assert s.nondegenerate and s.representative_independent


def test_metric_must_be_positive_definite(catalog):
    kt = catalog["kodaira-thurston"]
    with pytest.raises(NotPositiveDefinite):
        compatibilize_metric([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], kt.J)
    assert is_positive_definite([[2, 1], [1, 2]]) and not is_positive_definite([[1, 2], [2, 1]])


def test_incompatible_metric_rejected(catalog):
    kt = catalog["kodaira-thurston"]
    g = tuple(tuple(2 if i == j == 0 else int(i == j) for j in range(4)) for i in range(4))
    k = compatibilize_metric([[1, 0], [0, 1]], trivial_module(kt.algebra).I)
    with pytest.raises(ValueError):
        HodgeTheory(DolbeaultData(kt.algebra, kt.J, trivial_module(kt.algebra)), CompatibleMetric(g, k))


def test_non_nilpotent_input_warns():
    L = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}}, "aff")
    J = ComplexStructure.from_images(2, {0: {1: 1}})
    with pytest.warns(RuntimeWarning):
        HodgeTheory(DolbeaultData(L, J, trivial_module(L)))
