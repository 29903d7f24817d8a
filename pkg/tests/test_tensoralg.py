from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobijets.exactalg import NO_SOLUTION, QArray
from jacobijets.tensoralg import (
    CovariantTensor,
    SkewEndo,
    TensorSymmetryError,
    metric_embed,
    so_action,
    solve_tensor_combination,
    symmetrize,
    vector,
)

ints = st.integers(-4, 4)


def tensors(n, valence):
    return st.lists(ints, min_size=n ** valence, max_size=n ** valence).map(
        lambda v: CovariantTensor(QArray.from_ints(np.array(v).reshape((n,) * valence)), n)
    )


def skews(n):
    def make(v):
        m = np.zeros((n, n), dtype=np.int64)
        m[np.triu_indices(n, 1)] = v
        return SkewEndo(QArray.from_ints(m - m.T))

    k = n * (n - 1) // 2
    return st.lists(ints, min_size=k, max_size=k).map(make)


def test_rejects_inconsistent_shape():
    with pytest.raises(ValueError):
        CovariantTensor(QArray.zeros((2, 3)))


def test_evaluate_bilinear():
    g = CovariantTensor(QArray.from_ints([[1, 2], [2, 5]]))
    assert g.evaluate(vector([1, 1]), vector([1, -1])) == -4


def test_symmetrize_example():
    t = CovariantTensor(QArray.from_ints([[0, 1], [0, 0]]))
    s = symmetrize(t, [0, 1])
    assert s[0, 1] == Fraction(1, 2) and s[1, 0] == Fraction(1, 2)


@settings(max_examples=25, deadline=None)
@given(tensors(3, 3))
def test_symmetrize_is_idempotent(t):
    s = symmetrize(t, [0, 1, 2])
    assert symmetrize(s, [0, 1, 2]) == s
    assert s.is_symmetric_in([0, 1, 2])


@settings(max_examples=25, deadline=None)
@given(skews(3), tensors(3, 2), tensors(3, 1))
def test_action_is_a_derivation(a, t, u):
    lhs = so_action(a, t.tensor(u))
    rhs = so_action(a, t).tensor(u) + t.tensor(so_action(a, u))
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(skews(3), skews(3), tensors(3, 3))
def test_action_respects_brackets(a, b, t):
    lhs = so_action(a.bracket(b), t)
    rhs = so_action(a, so_action(b, t)) - so_action(b, so_action(a, t))
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(skews(3), tensors(3, 3))
def test_action_commutes_with_metric_embedding(a, t):
    # symmetric in the first slot and in the last pair, as required by the embedding
    t = symmetrize(t, [1, 2])
    g = CovariantTensor(QArray.identity(3), 3)
    assert so_action(a, g).is_zero()
    lhs = so_action(a, metric_embed(t, g))
    rhs = metric_embed(so_action(a, t), g)
    assert lhs == rhs


def test_metric_embed_diagonal_value():
    g = CovariantTensor(QArray.from_ints([[2, 1], [1, 3]]))
    t = symmetrize(CovariantTensor(QArray.from_ints(np.arange(8).reshape(2, 2, 2))), [1, 2])
    e = metric_embed(t, g)
    xi, x, y = vector([1, 2]), vector([3, -1]), vector([0, 1])
    assert e.evaluate(xi, xi, xi, x, y) == g.evaluate(xi, xi) * t.evaluate(xi, x, y)


def test_metric_embed_rejects_asymmetric_input():
    g = CovariantTensor(QArray.identity(2))
    t = CovariantTensor(QArray.from_ints(np.arange(8).reshape(2, 2, 2)))
    with pytest.raises(TensorSymmetryError):
        metric_embed(t, g)


def test_skew_adjoint_check_uses_metric():
    g = QArray.from_ints([[2, 0], [0, 1]])
    ok = QArray.from_scalars([[0, Fraction(1, 2)], [-1, 0]])
    SkewEndo(ok, g)
    with pytest.raises(ValueError):
        SkewEndo(QArray.from_ints([[0, 1], [-1, 0]]), g)


def test_solve_combination():
    a = CovariantTensor(QArray.from_ints([[1, 0], [0, 0]]))
    b = CovariantTensor(QArray.from_ints([[0, 0], [0, 1]]))
    target = a.scale(3) - b.scale(Fraction(1, 2))
    coeffs, unique = solve_tensor_combination(target, [a, b])
    assert coeffs == [3, Fraction(-1, 2)] and unique
    assert solve_tensor_combination(CovariantTensor(QArray.identity(2)), [a]) is NO_SOLUTION
    assert solve_tensor_combination(CovariantTensor(QArray.zeros((2, 2))), []) == ([], True)
