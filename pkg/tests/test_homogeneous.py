from fractions import Fraction

import pytest

from jacobijets.catalog import build_reference
from jacobijets.exactalg import QArray, Scalar
from jacobijets.homogeneous import (
    ReductiveSpace,
    ReductiveSpaceError,
    connection_operator,
    curvature,
    curvature_identity_failures,
    jet_invariance_holds,
    nabla_jet,
    ricci,
    second_bianchi_holds,
    sectional_curvature,
)
from jacobijets.lie import LieAlgebraData
from jacobijets.tensoralg import vector

from conftest import space


def e(i, n):
    return vector([1 if j == i else 0 for j in range(n)])


def test_flat_torus_has_zero_curvature():
    s = build_reference("flat-torus", 4)
    assert curvature(s).is_zero()
    assert s.jet_tensor(1).is_zero()


@pytest.mark.parametrize("i,j", [(0, 1), (0, 2), (1, 2)])
def test_bi_invariant_su2_quarter_curvature(i, j):
    s = build_reference("bi-invariant-su2")
    assert sectional_curvature(s, e(i, 3), e(j, 3)) == Fraction(1, 4)


def test_bi_invariant_su2_is_symmetric():
    s = build_reference("bi-invariant-su2")
    assert s.jet_tensor(1).is_zero()


def test_kaplan_h_type_curvatures():
    # K(X, Y) = -3/4 |[X, Y]|^2, K(X, Z) = 1/4, K(Z, Z') = 0 for unit vectors
    s = space("kaplan-n6")
    assert sectional_curvature(s, e(0, 6), e(1, 6)) == Fraction(-3, 4)
    assert sectional_curvature(s, e(0, 6), e(4, 6)) == Fraction(1, 4)
    assert sectional_curvature(s, e(4, 6), e(5, 6)) == 0
    assert sectional_curvature(s, e(1, 6), e(2, 6)) == 0


def test_identities_on_catalog(catalog_space):
    s = catalog_space
    assert curvature_identity_failures(curvature(s)) == []
    assert second_bianchi_holds(s.jet_tensor(1))
    for i in range(s.n):
        assert connection_operator(s, e(i, s.n)).is_skew_adjoint(s.metric)
    for k in range(3):
        assert jet_invariance_holds(s, s.jet_tensor(k))


def test_nabla_jet_verifies():
    jet = nabla_jet(space("v1"), 2)
    assert len(jet.tensors) == 3 and jet[2].valence == 6


@pytest.mark.parametrize("name,constant", [
    ("m6", Fraction(5, 2)),
    ("v1", Fraction(27, 20)),
    ("v3", Fraction(9, 20)),
])
def test_einstein_constants(name, constant):
    _, verdict = ricci(space(name))
    assert verdict.einstein and verdict.constant == constant


def test_kaplan_not_einstein():
    assert not ricci(space("kaplan-n6"))[1].einstein


def test_rescaling():
    s = space("v1")
    t = s.rescaled(2)
    assert t.jet_tensor(0) == s.jet_tensor(0).scale(2)
    assert ricci(t)[1].constant == ricci(s)[1].constant / 2
    with pytest.raises(ValueError):
        s.rescaled(-1)


SO3 = [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]


def test_non_invariant_metric_rejected():
    alg = LieAlgebraData(3, SO3)
    with pytest.raises(ReductiveSpaceError) as info:
        ReductiveSpace(alg, [0], [1, 2], QArray.from_ints([[1, 0], [0, 2]]))
    assert info.value.check == "ad-invariance"


def test_non_subalgebra_rejected():
    alg = LieAlgebraData(3, SO3)
    with pytest.raises(ReductiveSpaceError) as info:
        ReductiveSpace(alg, [0, 1], [2], QArray.identity(1))
    assert info.value.check == "subalgebra"


def test_non_reductive_rejected():
    alg = LieAlgebraData(2, [(0, 1, 1, 1)])  # [e1, e2] = e2
    with pytest.raises(ReductiveSpaceError) as info:
        ReductiveSpace(alg, [1], [0], QArray.identity(1))
    assert info.value.check == "reductive"


def test_indefinite_metric_flagged():
    alg = LieAlgebraData(2, [])
    s = ReductiveSpace(alg, [], [0, 1], QArray.from_ints([[1, 0], [0, -1]]), check=False)
    assert not s.checks()["positive-definite"]


def test_partition_checked():
    alg = LieAlgebraData(2, [])
    with pytest.raises(ReductiveSpaceError):
        ReductiveSpace(alg, [], [0], QArray.identity(1))


def test_m6_metric_is_orthonormal():
    s = space("m6")
    assert s.metric == QArray.identity(6, d=2)
    assert s.d == 2
    assert isinstance(s.metric[0, 0], Scalar)
