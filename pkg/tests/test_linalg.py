from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from wsatlab.linalg import det, rank

entries = st.one_of(st.integers(-6, 6), st.fractions(-5, 5, max_denominator=7))


def matrices(max_rows=6, max_cols=7):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


def square(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n))


def as_sympy(rows):
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows])


@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(rows) == as_sympy(rows).rank()


@given(matrices(), st.integers(0, 3))
def test_rank_of_dependent_rows(rows, k):
    extra = [[2 * a - b for a, b in zip(rows[0], rows[-1])] for _ in range(k)]
    assert rank(rows + extra) == rank(rows)


@given(square())
def test_det_matches_sympy(m):
    want = as_sympy(m).det()
    got = det(m)
    assert Fraction(got) == Fraction(int(want.p), int(want.q))


def test_small_cases():
    assert rank([]) == 0
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([[1, 2], [2, 4]]) == 1
    assert det([]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[Fraction(1, 2), 0], [0, 4]]) == 2
    assert isinstance(det([[2, 1], [1, 1]]), int)
