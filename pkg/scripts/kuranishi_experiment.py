"""Kuranishi family to a given order: series support, obstruction polynomials, and
integrability of the truncated family at random rational parameters."""

import argparse
import random

from nildolbeault.catalog import load_builtin
from nildolbeault.kuranishi import Kuranishi, deformation_report, deformed_subspace
from nildolbeault.sampling import small_rational
from nildolbeault.scalars import Gauss


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["abelian-4", "kodaira-thurston", "iwasawa"])
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for name in args.names:
        e = load_builtin(name)
        rep = deformation_report(e.algebra, e.J, order=args.order)
        K = Kuranishi(e.algebra, e.J)
        by_degree = {}
        for mu in rep.series.coeffs:
            by_degree[sum(mu)] = by_degree.get(sum(mu), 0) + 1
        print(f"{name}: m={rep.m} k={rep.k} nonzero phi coefficients by degree {dict(sorted(by_degree.items()))}")
        print(f"  obstructions: {'none' if rep.obstructions.is_zero() else rep.obstructions.format()}")
        print(f"  higher orders coexact: {rep.higher_orders_coexact}")
        for o in rep.residual_orders:
            print(f"  residual order {o.order}: zero={o.zero} harmonic={o.green_zero} consistent={o.consistent}")
        for _ in range(args.points):
            t = [Gauss(small_rational(rng), small_rational(rng)) for _ in range(rep.m)]
            ds = deformed_subspace(K, rep.series, t)
            print(f"  t={[str(x) for x in t]}: integrable={ds.integrable}, "
                  f"closure defect zero per s-order {ds.defect_by_order}")


if __name__ == "__main__":
    main()
