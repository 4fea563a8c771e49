"""Multi-index bookkeeping for exterior algebras.

A monomial e^{i_1} ^ ... ^ e^{i_k} is stored as the strictly increasing
tuple (i_1, ..., i_k).  Evaluation follows the determinant convention
(e^I)(x_J) = delta_{IJ} for increasing I, J; a form is a ``{tuple: coeff}``.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from .scalars import ZERO

__all__ = ["multi_indices", "index_of", "sort_sign", "insert_sign", "wedge_monomials",
           "wedge", "interior", "form_add", "form_scale", "binom"]

binom = comb


def multi_indices(n: int, k: int):
    """Increasing k-subsets of range(n), lexicographic."""
    return list(combinations(range(n), k))


def index_of(n: int, k: int) -> dict:
    return {I: a for a, I in enumerate(multi_indices(n, k))}


def sort_sign(seq):
    """(sign, sorted tuple) of a sequence of indices; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    # insertion sort counting transpositions; sequences here are short
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def insert_sign(m: int, idx: tuple):
    """Sign and result of e^m ^ e^idx."""
    if m in idx:
        return 0, None
    pos = sum(1 for x in idx if x < m)
    return (-1) ** pos, tuple(sorted(idx + (m,)))


def wedge_monomials(A: tuple, B: tuple):
    if set(A) & set(B):
        return 0, None
    return sort_sign(A + B)


def wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for A, x in a.items():
        for B, y in b.items():
            s, C = wedge_monomials(A, B)
            if s:
                v = x * y if s > 0 else -(x * y)
                out[C] = out.get(C, ZERO) + v
    return {k: v for k, v in out.items() if v}


def interior(vec, form: dict) -> dict:
    """i_v of a form; ``vec`` holds the coefficients of v in the frame dual to the e^i."""
    out: dict = {}
    for A, x in form.items():
        for pos, i in enumerate(A):
            c = vec[i]
            if not c:
                continue
            rest = A[:pos] + A[pos + 1:]
            v = x * c
            out[rest] = out.get(rest, ZERO) + (v if pos % 2 == 0 else -v)
    return {k: v for k, v in out.items() if v}


def form_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


def form_scale(c, a: dict) -> dict:
    return {k: c * v for k, v in a.items() if c * v}
