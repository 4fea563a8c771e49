"""Acceptance gate: each criterion runs at its stated size and time budget.

Each test records a PASS/FAIL line; conftest prints them at the end of the
session.  ``python tests/test_acceptance.py`` runs the gate without pytest.
"""

import os
import random
import sys
import time
from math import comb

sys.path.insert(0, os.path.dirname(__file__))

from nildolbeault.algebra import (check_moduli_point, is_integrable_structure,
                                  structure_to_subspace)
from nildolbeault.catalog import builtin_names, load_builtin
from nildolbeault.complexes import DolbeaultData, chevalley_differential, de_rham
from nildolbeault.hodge import HodgeTheory
from nildolbeault.kuranishi import Kuranishi, deformation_report, deformed_subspace
from nildolbeault.linalg import reduce_modulo, row_space, vec_is_zero
from nildolbeault.representations import (Kind, adjoint_module, classify_module,
                                          semidirect_product, trivial_module)
from nildolbeault.sampling import (random_module, random_nilpotent_with_J, random_structure,
                                   small_rational)
from nildolbeault.scalars import Gauss

from cli_sweep import run_capture, sweep_commands

RESULTS = {}


def _record(num, label, ok, elapsed, budget, detail=""):
    passed = bool(ok) and elapsed <= budget
    line = (f"{'PASS' if passed else 'FAIL'} criterion {num}: {label} "
            f"({elapsed:.1f}s of {budget}s){' - ' + detail if detail else ''}")
    RESULTS[num] = line
    return passed


def _timed(num, label, budget, body):
    t0 = time.perf_counter()
    ok, detail = body()
    passed = _record(num, label, ok, time.perf_counter() - t0, budget, detail)
    assert passed, RESULTS[num]


def _integrable_module(rng, L, J):
    while True:
        rep = random_module(rng, L, J, kinds=(Kind.INTEGRABLE, Kind.BOTH), max_dim=4)
        if classify_module(rep, J).kind in (Kind.INTEGRABLE, Kind.BOTH):
            return rep


def _g10_closed(L, J):
    """[g^{1,0}, g^{1,0}] inside g^{1,0}, with g^{1,0} spanned by conjugates of the g^{0,1} rows."""
    rows = [list(r) for r in structure_to_subspace(L, J).conj_rows()]
    basis = row_space(rows, L.dim)
    return all(vec_is_zero(reduce_modulo(L.bracket(a, b), basis))
               for i, a in enumerate(rows) for b in rows[i + 1:])


# ------------------------------------------------------------------ criteria

def test_criterion_01_differentials_square_to_zero():
    def body():
        rng = random.Random(2024)
        bad, dims = 0, set()
        for _ in range(100):
            L, J = random_nilpotent_with_J(rng, 8)
            rep = _integrable_module(rng, L, J)
            dims.add((L.dim, rep.dimE))
            d = [chevalley_differential(L, rep.rho, rep.dimE, k) for k in range(L.dim)]
            bad += sum(not (d[k + 1] @ d[k]).is_zero() for k in range(L.dim - 1))
            D = DolbeaultData(L, J, rep)
            for p in range(D.n + 1):
                for q in range(D.n - 1):
                    bad += not (D.dbar(p, q + 1) @ D.dbar(p, q)).is_zero()
        return bad == 0, f"100 instances, {len(dims)} (dim g, dim E) shapes, {bad} failures"
    _timed(1, "d^2 = 0 and dbar^2 = 0", 60, body)


def test_criterion_02_integrability_routes_agree():
    def body():
        rng = random.Random(7)
        disagree, integrable = 0, 0
        for _ in range(200):
            L, J0 = random_nilpotent_with_J(rng, 6)
            J = random_structure(rng, L, 0.4, J0)
            a = bool(is_integrable_structure(L, J))
            b = _g10_closed(L, J)
            c = check_moduli_point(L, structure_to_subspace(L, J)).member
            disagree += not (a == b == c)
            integrable += a
        return disagree == 0, f"200 J, {integrable} integrable, {disagree} disagreements"
    _timed(2, "Nijenhuis, g^{1,0}-closure and moduli membership agree", 30, body)


def test_criterion_03_module_kind_matches_semidirect_product():
    def body():
        rng = random.Random(11)
        disagree, kinds = 0, {}
        for i in range(100):
            L, J = random_nilpotent_with_J(rng, 6)
            rep = random_module(rng, L, J, kinds=tuple(Kind), max_dim=4)
            kind = classify_module(rep, J).kind
            kinds[kind.value] = kinds.get(kind.value, 0) + 1
            P, K = semidirect_product(rep, J)
            disagree += (kind in (Kind.INTEGRABLE, Kind.BOTH)) != bool(is_integrable_structure(P, K))
        return disagree == 0, f"kinds {dict(sorted(kinds.items()))}, {disagree} disagreements"
    _timed(3, "Integrable module iff I x J integrable on E x| g", 60, body)


def test_criterion_04_abelian_hodge_numbers():
    def body():
        bad = []
        for n in range(1, 5):
            e = load_builtin(f"abelian-{2 * n}")
            h = DolbeaultData(e.algebra, e.J, trivial_module(e.algebra)).hodge_numbers()
            bad += [(n, p, q) for (p, q), v in h.items() if v != comb(n, p) * comb(n, q)]
        return not bad, f"mismatches {bad}" if bad else "n = 1..4"
    _timed(4, "abelian h^{p,q} = C(n,p) C(n,q)", 10, body)


def test_criterion_05_iwasawa():
    def body():
        e = load_builtin("iwasawa")
        h = DolbeaultData(e.algebra, e.J, trivial_module(e.algebra)).hodge_numbers()
        ha = DolbeaultData(e.algebra, e.J, adjoint_module(e.algebra, e.J)).hodge_numbers()
        got = ([h[(0, q)] for q in range(4)], h[(1, 0)], ha[(0, 1)])
        return got == ([1, 2, 2, 1], 3, 6), f"h^(0,*)={got[0]}, h^(1,0)={got[1]}, adjoint h^(0,1)={got[2]}"
    _timed(5, "Iwasawa Dolbeault numbers", 30, body)


def test_criterion_06_betti():
    def body():
        b1 = de_rham(load_builtin("heisenberg3").algebra).h
        b2 = de_rham(load_builtin("kodaira-thurston").algebra).h
        return (b1, b2) == ([1, 2, 2, 1], [1, 3, 4, 3, 1]), f"heisenberg3 {b1}, KT {b2}"
    _timed(6, "Betti numbers", 5, body)


def _hodge_sweep():
    for name in builtin_names():
        e = load_builtin(name)
        if e.J is None or e.counterexample:
            continue
        for rep in (trivial_module(e.algebra), adjoint_module(e.algebra, e.J)):
            D = DolbeaultData(e.algebra, e.J, rep)
            yield name, rep.name, D, HodgeTheory(D)


def test_criterion_07_hodge_package():
    def body():
        failures, count = [], 0
        for name, mod, D, H in _hodge_sweep():
            h = D.hodge_numbers()
            for p in range(H.n + 1):
                for q in range(H.n + 1):
                    count += 1
                    ok = (H.star_involution_defect(p, q).is_zero()
                          and H.hodge_decomposition_check(p, q)
                          and len(H.harmonic_basis(p, q)) == h[(p, q)]
                          and (q == H.n or H.adjointness_defect(p, q).is_zero()))
                    if not ok:
                        failures.append((name, mod, p, q))
        return not failures, f"{count} bidegrees, failures {failures[:3]}"
    _timed(7, "adjointness, star involution, orthogonal decomposition, ker Laplacian = h", 120, body)


def test_criterion_08_serre_pairing():
    def body():
        failures, count = [], 0
        for name, mod, D, H in _hodge_sweep():
            for p in range(H.n + 1):
                for q in range(H.n + 1):
                    count += 1
                    s = H.serre_check(p, q)
                    if not (s.nondegenerate and s.h_E == s.h_dual and s.rank == s.h_E):
                        failures.append((name, mod, p, q))
        return not failures, f"{count} pairings, failures {failures[:3]}"
    _timed(8, "Serre pairing square and nonsingular", 60, body)


def test_criterion_09_abelian_kuranishi():
    def body():
        rng = random.Random(3)
        e = load_builtin("abelian-4")
        rep = deformation_report(e.algebra, e.J, order=4)
        K = Kuranishi(e.algebra, e.J)
        linear = all(sum(mu) == 1 for mu in rep.series.coeffs)
        exact = 0
        for _ in range(20):
            t = [Gauss(small_rational(rng), small_rational(rng)) for _ in range(rep.m)]
            ds = deformed_subspace(K, rep.series, t)
            exact += ds.integrable and ds.transversal
        ok = linear and rep.obstructions.is_zero() and exact == 20
        return ok, f"phi linear {linear}, obstructions zero {rep.obstructions.is_zero()}, {exact}/20 integrable"
    _timed(9, "abelian Kuranishi family is linear and unobstructed", 10, body)


def test_criterion_10_kuranishi_order_four():
    def body():
        notes, ok = [], True
        for name in ("iwasawa", "kodaira-thurston"):
            e = load_builtin(name)
            rep = deformation_report(e.algebra, e.J, order=4)
            K = Kuranishi(e.algebra, e.J)
            xi_span = row_space([list(x) for x in K.xi], K.forms.dim(2)) if K.xi else []
            harmonic = all(vec_is_zero(reduce_modulo(v, xi_span)) for v in rep.residual.values())
            first = rep.residual_orders[0].zero
            consistent = all(o.consistent and o.green_zero for o in rep.residual_orders)
            ok &= first and rep.higher_orders_coexact and consistent and harmonic
            notes.append(f"{name}: m={rep.m} k={rep.k} obstructed={not rep.obstructions.is_zero()}")
        return ok, "; ".join(notes)
    _timed(10, "Kuranishi to order 4: residual, coexactness, obstruction consistency", 120, body)


def test_criterion_11_cli_determinism():
    def body():
        cmds = sweep_commands(8)
        saved = os.environ.get("ND_THREADS")
        try:
            os.environ["ND_THREADS"] = "1"
            first = [run_capture(c) for c in cmds]
            os.environ["ND_THREADS"] = "4"
            second = [run_capture(c) for c in cmds]
        finally:
            if saved is None:
                os.environ.pop("ND_THREADS", None)
            else:
                os.environ["ND_THREADS"] = saved
        diff = [" ".join(c) for c, a, b in zip(cmds, first, second) if a != b]
        return not diff, f"{len(cmds)} commands, {len(diff)} differ"
    _timed(11, "byte-identical CLI JSON across runs and thread counts", 60, body)


if __name__ == "__main__":
    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            failed += 1
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(1 if failed else 0)
