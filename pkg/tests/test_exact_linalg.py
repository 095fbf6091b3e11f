from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_algebroid.errors import ContractError
from kahler_algebroid.exact_linalg import (
    Matrix,
    Quotient,
    Subspace,
    det,
    induced_map,
    inverse,
    kernel_basis,
    kernel_vectors,
    rank,
    rref,
    solve,
    subspace_intersection,
    subspace_sum,
)
from kahler_algebroid.scalars import GaussianRational, format_scalar, parse_scalar

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=n, max_size=n)
        )
    )


def to_sympy(rows):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in rows])


# --- scalars ---


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (1 + i) / (1 - i) == i
    assert (3 - i).conjugate() == 3 + i
    assert GaussianRational(F(1, 2), 0) == F(1, 2)


def test_scalar_round_trip():
    for raw in ["3/4", "-2", 7, {"re": "1/2", "im": "-3"}]:
        x = parse_scalar(raw)
        assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "abc", {"re": "1", "x": "2"}])
def test_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


# --- ranks, determinants, kernels against sympy ---


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(Matrix(rows)) == to_sympy(rows).rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    assert det(Matrix(rows)) == to_sympy(rows).det()


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_kernel_is_kernel(rows):
    m = Matrix(rows)
    ker = kernel_vectors(m)
    assert len(ker) == m.ncols - rank(m)
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rref_pivots(rows):
    red, pivots = rref(Matrix(rows))
    assert len(pivots) == rank(Matrix(rows))
    for r, c in enumerate(pivots):
        assert red[r][c] == 1


def test_complex_rank_realified():
    i = GaussianRational(0, 1)
    m = Matrix([[1, i], [i, -1]])
    assert rank(m) == 1
    assert rank(Matrix([[1, i], [1, -i]])) == 2


def test_inverse_and_solve():
    m = Matrix([[2, 1], [1, 1]])
    assert m @ inverse(m) == Matrix.identity(2)
    assert solve(m, [3, 2]) == [1, 1]
    assert solve(Matrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_empty_matrix_needs_ncols():
    m = Matrix([], 3)
    assert m.shape == (0, 3)
    assert rank(m) == 0
    assert len(kernel_vectors(m)) == 3


# --- subspaces and quotients ---


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_dimension_formula(a, b):
    n = 4
    A = Subspace.span(n, [row + [F(0)] * (n - len(row)) for row in a])
    B = Subspace.span(n, [row + [F(0)] * (n - len(row)) for row in b])
    assert subspace_sum(A, B).dim + subspace_intersection(A, B).dim == A.dim + B.dim


def test_quotient_and_induced_map():
    # d: R^1 -> R^2, x -> (x, 0); ker of projection to second coordinate
    ker = kernel_basis(Matrix([[0, 1]]))
    im = Subspace.span(2, [[1, 0]])
    q = Quotient(ker, im)
    assert q.dim == 0
    full = Quotient(Subspace.full(2), im)
    assert full.dim == 1
    m = induced_map(Matrix.identity(2), full, full)
    assert m == Matrix.identity(1)


def test_induced_map_contract():
    src = Quotient(Subspace.full(2), Subspace(2))
    dst = Quotient(Subspace.span(2, [[1, 0]]), Subspace(2))
    with pytest.raises(ContractError):
        induced_map(Matrix.identity(2), src, dst)
