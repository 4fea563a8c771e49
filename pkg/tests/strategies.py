from gmpy2 import mpq
from hypothesis import strategies as st

from nildolbeault.scalars import Gauss

rationals = st.builds(lambda a, b: mpq(a, b), st.integers(-20, 20), st.integers(1, 6))
gauss = st.builds(Gauss, rationals, rationals)
seeds = st.integers(0, 2**32 - 1)


def matrices(rows, cols, elems=gauss):
    return st.lists(st.lists(elems, min_size=cols, max_size=cols), min_size=rows, max_size=rows)
