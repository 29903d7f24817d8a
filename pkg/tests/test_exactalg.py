from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobijets.exactalg import (
    NO_SOLUTION,
    ExactMatrix,
    FieldMismatchError,
    QArray,
    Scalar,
    kernel,
    matmul,
    parse_scalar,
    rank,
    render_scalar,
    solve_linear,
)

r2 = Scalar(0, 1, 2)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**4)
scalars = st.builds(lambda a, b: Scalar(a, b, 2), rationals, rationals)
small_ints = st.integers(-6, 6)


def test_difference_of_squares():
    assert (1 + r2) * (-1 + r2) == Scalar(1)


def test_rationalize():
    assert 1 / (1 + r2) == Scalar(-1, 1, 2)


def test_sum_example():
    assert Scalar(Fraction(3, 2), 0, 2) + Scalar(Fraction(1, 2), 1, 2) == Scalar(2, 1, 2)


def test_zero_test_is_exact():
    assert not Scalar(0, 0, 2)
    assert Scalar(0, 1, 2)
    # d = 1 folds the second part into the rational part
    assert Scalar(1, -1, 1) == 0


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Scalar(1, 1, 2) / Scalar(0, 0, 2)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        Scalar(0, 1, 2) + Scalar(0, 1, 3)


def test_sign_of_irrational_values():
    assert (r2 - Scalar(Fraction(141, 100))).sign() == 1
    assert (r2 - Scalar(Fraction(142, 100))).sign() == -1


@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if y:
        assert (x / y) * y == x


@given(scalars)
def test_render_parse_round_trip(x):
    assert parse_scalar(render_scalar(x)) == x


@pytest.mark.parametrize("text,value", [
    ("3", Scalar(3)),
    ("-7/4", Scalar(Fraction(-7, 4))),
    ("-1+1*sqrt(2)", Scalar(-1, 1, 2)),
    ("1/2-3/5*sqrt(3)", Scalar(Fraction(1, 2), Fraction(-3, 5), 3)),
])
def test_parse_examples(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "1/0", "sqrt(2)", "1+sqrt(2)", "1+1*sqrt(4)", "a"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_render_examples():
    assert render_scalar(Scalar(Fraction(1, 2), Fraction(-1, 2), 2)) == "1/2-1/2*sqrt(2)"
    assert render_scalar(Scalar(5)) == "5"


def test_kernel_of_zero_matrix():
    assert len(kernel(QArray.zeros((3, 3)))) == 3


def test_kernel_of_identity():
    assert kernel(QArray.identity(4)) == []


def test_kernel_with_sqrt2():
    m = ExactMatrix.from_rows([[1, r2]])
    (v,) = kernel(m)
    a, b = v.flat_scalars()
    # proportional to (-sqrt 2, 1)
    assert a == -r2 * b and b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rank_nullity(rows, cols, data):
    vals = data.draw(st.lists(small_ints, min_size=rows * cols * 2, max_size=rows * cols * 2))
    a = np.array(vals[: rows * cols]).reshape(rows, cols)
    b = np.array(vals[rows * cols:]).reshape(rows, cols)
    m = QArray(a, b, 1, 2)
    ker = kernel(m)
    for v in ker:
        assert matmul(m, v).is_zero()
    assert rank(m) + len(ker) == cols


def test_kernel_of_tall_system():
    # many redundant rows exercise the compression path
    rng = np.random.default_rng(3)
    base = rng.integers(-3, 4, (4, 9))
    mix = rng.integers(-2, 3, (60, 4))
    m = QArray.from_ints(mix @ base)
    ker = kernel(m)
    assert len(ker) == 9 - np.linalg.matrix_rank(base)
    assert all(matmul(m, v).is_zero() for v in ker)


def test_solve_identity():
    b = QArray.from_scalars([Scalar(1), Scalar(2, 1, 2), Scalar(-3)])
    x, ker = solve_linear(QArray.identity(3, d=2), b)
    assert x == b and ker == []


def test_solve_inconsistent():
    assert solve_linear(QArray.zeros((2, 2)), QArray.from_ints([1, 0])) is NO_SOLUTION


def test_solve_scalar():
    x, ker = solve_linear(ExactMatrix.from_rows([[2]]), QArray.from_ints([5]))
    assert x.flat_scalars() == [Scalar(Fraction(5, 2))] and ker == []


def test_solve_reports_free_directions():
    x, ker = solve_linear(ExactMatrix.from_rows([[1, 1]]), QArray.from_ints([2]))
    assert len(ker) == 1
    assert matmul(ExactMatrix.from_rows([[1, 1]]), x).flat_scalars() == [Scalar(2)]


def test_inverse_and_determinant():
    m = ExactMatrix.from_rows([[1, r2], [r2, 3]])
    assert m.determinant() == Scalar(1)
    assert m @ m.inverse() == QArray.identity(2, d=2)


def test_large_entries_fall_back_to_python_ints():
    big = QArray.from_ints(np.array([[2**40, 1], [1, 2**40]], dtype=object))
    prod = matmul(big, big)
    assert prod[0, 0] == Scalar(2**80 + 1)
