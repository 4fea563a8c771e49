from hypothesis import given, strategies as st

from nildolbeault.exterior import (form_add, insert_sign, interior, multi_indices, sort_sign,
                                   wedge)

from strategies import gauss

N = 5


def forms(k):
    return st.dictionaries(st.sampled_from(multi_indices(N, k)), gauss, max_size=4)


@given(forms(1), forms(2), forms(1))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(forms(2), forms(1))
def test_graded_commutativity(a, b):
    # |a| |b| = 2: even, so a ^ b = b ^ a
    assert wedge(a, b) == wedge(b, a)


@given(forms(1))
def test_odd_forms_square_to_zero(a):
    assert wedge(a, a) == {}


@given(st.lists(gauss, min_size=N, max_size=N), forms(2), forms(1))
def test_interior_is_antiderivation(v, a, b):
    lhs = interior(v, wedge(a, b))
    rhs = form_add(wedge(interior(v, a), b), wedge(a, interior(v, b)))
    assert lhs == rhs


def test_sort_and_insert_sign():
    assert sort_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_sign((1, 0)) == (-1, (0, 1))
    assert sort_sign((1, 1))[0] == 0
    assert insert_sign(1, (0, 2)) == (-1, (0, 1, 2))
