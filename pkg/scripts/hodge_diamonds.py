"""Print Dolbeault diamonds h^{p,q}(g, E) for the catalog, trivial and adjoint coefficients."""

import argparse

from nildolbeault.catalog import builtin_names, load_builtin
from nildolbeault.complexes import DolbeaultData
from nildolbeault.representations import adjoint_module, trivial_module


def diamond(h, n):
    return "\n".join("  q=%d: %s" % (q, " ".join(f"{h[(p, q)]:3d}" for p in range(n + 1)))
                     for q in range(n, -1, -1))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-abelian", type=int, default=6)
    args = ap.parse_args()
    for name in builtin_names(args.max_abelian):
        e = load_builtin(name)
        if e.J is None or e.counterexample:
            continue
        for rep in (trivial_module(e.algebra), adjoint_module(e.algebra, e.J)):
            D = DolbeaultData(e.algebra, e.J, rep)
            print(f"{name} / {rep.name}")
            print(diamond(D.hodge_numbers(), D.n))


if __name__ == "__main__":
    main()
