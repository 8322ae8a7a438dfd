from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from parcalc import exactlin as el
from parcalc.errors import StructuralError

from conftest import subspaces


def test_rref_identity():
    rank, sub = el.rref([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank == 3
    assert sub == el.full(3)


def test_rref_zero_matrix():
    rank, sub = el.rref([[0] * 4, [0] * 4])
    assert rank == 0
    assert sub.basis == () and sub.ambient_dim == 4


def test_rref_dependent_rows():
    rank, sub = el.rref([[1, 2], [2, 4]])
    assert rank == 1
    assert sub.basis == ((1, 2),)


def test_rref_ragged():
    with pytest.raises(StructuralError):
        el.rref([[1, 2], [3]])


def test_rref_rejects_floats():
    with pytest.raises(StructuralError):
        el.rref([[0.5, 1]])


def test_intersect_with_full_space():
    b = el.span([[1, 2, 3]])
    assert el.intersect(el.full(3), b) == b


def test_intersect_transverse_lines():
    assert el.intersect(el.span([[1, 0]]), el.span([[0, 1]])) == el.zero(2)


def test_intersect_planes():
    a = el.span([[1, 0, 0], [0, 1, 0]])
    b = el.span([[0, 1, 0], [0, 0, 1]])
    assert el.intersect(a, b) == el.span([[0, 1, 0]])


def test_intersect_mismatch():
    with pytest.raises(StructuralError):
        el.intersect(el.full(2), el.full(3))


def test_project_contained():
    k = el.span([[1, 0, 0], [0, 1, 0]])
    assert el.project_to_quotient(el.span([[1, 1, 0]]), k) == el.zero(1)


def test_project_zero_kernel_is_identity():
    s = el.span([[1, 2, 3], [0, 1, 1]])
    assert el.project_to_quotient(s, el.zero(3)) == s


def test_project_line():
    image = el.project_to_quotient(el.span([[1, 1, 0]]), el.span([[1, 0, 0]]))
    assert image.ambient_dim == 2
    assert image.dim == 1
    # kernel e0 completed by e1, e2: (1,1,0) = e0 + e1 -> (1, 0)
    assert image == el.span([[1, 0]])


def test_quotient_complement_is_greedy():
    assert el.quotient_complement(el.span([[1, 1]])) == [0]
    assert el.quotient_complement(el.span([[0, 1, 0]])) == [0, 2]


def test_subspace_equality_is_canonical():
    assert el.span([[2, 4], [1, 1]]) == el.span([[1, 0], [0, 7]])
    assert hash(el.span([[3, 6]])) == hash(el.span([[1, 2]]))


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_dimension_formula(pair):
    a, b = pair
    assert el.intersect(a, b).dim + el.add(a, b).dim == a.dim + b.dim


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_intersection_lies_in_both(pair):
    a, b = pair
    c = el.intersect(a, b)
    assert el.is_subspace(c, a) and el.is_subspace(c, b)


@given(
    st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.builds(Fraction, st.integers(-12, 12), st.integers(1, 12)), min_size=n, max_size=n),
            max_size=6,
        ).map(lambda rows: (n, rows))
    )
)
def test_rref_matches_sympy(data):
    n, rows = data
    rank, sub = el.rref(rows, n)
    if rows:
        m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
        reduced, _ = m.rref()
        expected = [tuple(Fraction(int(x.p), int(x.q)) for x in reduced.row(i)) for i in range(m.rank())]
        assert rank == m.rank()
        assert list(sub.basis) == expected
    else:
        assert rank == 0
    assert el.rref(sub.basis, n)[1] == sub


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_projection_dimension(pair):
    s, k = pair
    assert el.project_to_quotient(s, k).dim == el.add(s, k).dim - k.dim
