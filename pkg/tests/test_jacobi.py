import math
from fractions import Fraction

import numpy as np
import pytest

from jacobijets.catalog import build_reference
from jacobijets.exactalg import Scalar
from jacobijets.homogeneous import curvature
from jacobijets.jacobi import (
    JacobiRelation,
    NoRelationError,
    UnsupportedSignature,
    diagonal_identity_holds,
    find_relation,
    matching_scale,
    min_relation_order,
    monomials,
    osculating_probe,
    raw_sym_jet,
    scale_invariant_signature,
    sym_jet,
    verify_relation,
)
from jacobijets.stabilizer import so_basis
from jacobijets.tensoralg import random_vector, so_action, symmetrize, vector

from conftest import CATALOG, space


def test_monomial_count():
    assert len(monomials(6, 7)) == math.comb(12, 7)
    assert monomials(3, 0).shape == (1, 3)


@pytest.mark.parametrize("name", CATALOG)
def test_recursion_matches_dense_jets(name):
    s = space(name)
    for k in range(4):
        assert sym_jet(s, k).coeffs == raw_sym_jet(s, k, verify=False).coeffs


@pytest.mark.parametrize("name", CATALOG)
def test_diagonal_identity(name):
    s = space(name)
    for k in range(3):
        assert diagonal_identity_holds(s, sym_jet(s, k), samples=5, seed=k)


def test_dense_form_is_the_symmetrized_curvature():
    s = space("v1")
    r = curvature(s).permute_slots([1, 2, 0, 3])  # (x, a, b, y) -> (a, b, x, y)
    assert sym_jet(s, 0).tensor == symmetrize(r, [0, 1])


def test_action_matches_dense_action():
    s = space("kaplan-n6")
    sj = sym_jet(s, 1)
    a = so_basis(s.metric)[3]
    assert sj.act(a).tensor == so_action(a, sj.tensor)


def test_embedding_multiplies_by_norm():
    s = space("v3")
    sj = sym_jet(s, 1)
    rng = np.random.default_rng(0)
    xi = random_vector(rng, s.n)
    g = s.metric
    norm = sum((xi[i] * g[i, j] * xi[j] for i in range(s.n) for j in range(s.n)), Scalar(0))
    assert sj.embed(g, 2).evaluate(xi) == sj.evaluate(xi).scale(norm * norm)


def test_m6_relation():
    order, rel = min_relation_order(space("m6"), 5)
    assert order == 4
    assert rel.coefficients == {3: Fraction(-5, 8), 1: Fraction(-1, 16)}
    assert rel.minimal
    assert scale_invariant_signature(rel) == 4


@pytest.mark.parametrize("name,c1", [("v1", Fraction(-1, 10)), ("v3", Fraction(-1, 30))])
def test_order_two_relations(name, c1):
    order, rel = min_relation_order(space(name), 3)
    assert order == 2 and rel.coefficients == {1: c1}


def test_order_two_coefficient_is_negative():
    # on a compact space a positive c1 would make the Jacobi operator grow like exp(sqrt(c1) t)
    for name in ("v1", "v3"):
        assert find_relation(space(name), 2).coefficients[1] < 0


def test_kaplan_has_no_relation_through_order_seven():
    s = space("kaplan-n6")
    for k in range(8):
        assert find_relation(s, k) is None


def test_kaplan_horizontal_directions_satisfy_the_quoted_relation():
    # R^5 + 5/4 |xi|^2 R^3 + 1/4 |xi|^4 R^1 vanishes for xi orthogonal to the centre only
    s = space("kaplan-n6")
    jets = {k: sym_jet(s, k) for k in (1, 3, 5)}

    def residual(xi):
        v = vector(xi)
        g = Scalar(sum(x * x for x in xi))
        r = jets[5].evaluate(v) + jets[3].evaluate(v).scale(g * Fraction(5, 4))
        return r + jets[1].evaluate(v).scale(g * g * Fraction(1, 4))

    assert residual([1, 2, 0, -1, 0, 0]).is_zero()
    assert not residual([1, 0, 0, 0, 1, 0]).is_zero()


def test_flat_torus_order_zero():
    rel = find_relation(build_reference("flat-torus", 3), 0)
    assert rel is not None and rel.coefficients == {}
    assert rel.as_equation() == "R^(1) = 0"


def test_scaling_halves_c1():
    s = space("v3")
    rel = find_relation(s.rescaled(2), 2)
    assert rel.coefficients[1] == find_relation(s, 2).coefficients[1] / 2


def test_scaling_keeps_signature():
    rel = find_relation(space("m6").rescaled(3), 4)
    assert rel.coefficients == {3: Fraction(-5, 24), 1: Fraction(-1, 144)}
    assert scale_invariant_signature(rel) == 4


def test_relations_reverify(catalog_space):
    rel = min_relation_order(catalog_space, 4)
    if rel is not None:
        assert verify_relation(catalog_space, rel[1])


def test_signature_examples():
    assert scale_invariant_signature(JacobiRelation(4, {3: Fraction(-5, 4), 1: Fraction(-1, 4)})) == 4
    assert scale_invariant_signature(JacobiRelation(4, {3: Scalar(2), 1: Scalar(-1)})) == 1
    with pytest.raises(UnsupportedSignature):
        scale_invariant_signature(JacobiRelation(2, {1: Scalar(1)}))
    with pytest.raises(UnsupportedSignature):
        # x^2 + x + 1 has no real roots
        scale_invariant_signature(JacobiRelation(4, {3: Scalar(-1), 1: Scalar(-1)}))


def test_probe_finds_witness():
    res = osculating_probe(space("m6"), 4)
    assert res.independent and len(res.witness) == 6


def test_probe_order_zero_is_dependent():
    assert not osculating_probe(build_reference("flat-torus", 3), 0).independent


def test_probe_requires_relation():
    with pytest.raises(NoRelationError):
        osculating_probe(space("kaplan-n6"), 4)


# -- independent oracle: Taylor series along a geodesic of a Lie group --------------------


def _series_jets(s, xi, order):
    """Derivatives of the Jacobi operator in a parallel frame, from power series in floats."""
    f = np.vectorize(float)
    lam = f(np.array(s.nomizu().to_scalars(), dtype=object))
    r = f(np.array(curvature(s).data.to_scalars(), dtype=object))
    n = s.n

    def alpha(v):
        return np.einsum("x,xkj->kj", v, lam)

    v = [np.array(xi, dtype=float)]
    p = [np.eye(n)]
    for m in range(order):
        v.append(-sum(alpha(v[i]) @ v[m - i] for i in range(m + 1)) / (m + 1))
        p.append(-sum(alpha(v[i]) @ p[m - i] for i in range(m + 1)) / (m + 1))
    out = []
    for m in range(order + 1):
        acc = np.zeros((n, n))
        for a in range(m + 1):
            for b in range(m + 1 - a):
                for c in range(m + 1 - a - b):
                    d = m - a - b - c
                    acc += np.einsum("xyzw,xp,y,z,wq->pq", r, p[a], v[b], v[c], p[d])
        out.append(acc * math.factorial(m))
    return out


@pytest.mark.parametrize("xi", [[1, 0, 0, 0, 1, 0], [2, 1, 0, -1, 1, 3]])
def test_jets_agree_with_geodesic_series(xi):
    s = space("kaplan-n6")
    series = _series_jets(s, xi, 5)
    for k in range(6):
        exact = np.vectorize(float)(np.array(sym_jet(s, k).evaluate(vector(xi)).to_scalars(), dtype=object))
        assert np.allclose(series[k], exact, rtol=1e-9, atol=1e-9)


def test_matching_scale():
    rel = find_relation(space("m6").rescaled(3), 4)
    assert matching_scale(rel, {3: Fraction(-5, 8), 1: Fraction(-1, 16)}) == Fraction(1, 3)
    assert matching_scale(rel, {3: Fraction(-5, 8), 1: Fraction(1, 16)}) is None
    v1 = find_relation(space("v1"), 2)
    assert matching_scale(v1, {1: Fraction(-1, 5)}) == Fraction(1, 2)
    # a positive coefficient would need lambda < 0
    assert matching_scale(v1, {1: Fraction(1)}) is None
