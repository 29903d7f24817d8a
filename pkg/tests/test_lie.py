import pytest

from jacobijets.exactalg import QArray, Scalar, tensordot
from jacobijets.lie import (
    LieAlgebraData,
    LieAlgebraError,
    ad_matrix,
    bracket,
    commutator,
    from_matrix_basis,
    killing_form,
    validate,
)

from conftest import space

SO3 = [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]


def so3():
    return LieAlgebraData(3, SO3)


def test_bracket_from_constants():
    alg = so3()
    e = [alg.basis_vector(i) for i in range(3)]
    assert bracket(alg, e[0], e[1]) == e[2]
    assert bracket(alg, e[1], e[0]) == -e[2]


def test_partner_entries_are_implied_and_checked():
    alg = so3()
    assert alg.c[1, 0, 2] == -1
    with pytest.raises(LieAlgebraError, match="antisymmetry"):
        LieAlgebraData(3, SO3 + [(1, 0, 2, 1)])


def test_jacobi_violation_names_a_triple():
    # [e1,e2] = e3, [e1,e3] = e1: the Jacobiator of (e1,e2,e3) is e3
    alg = LieAlgebraData(3, [(0, 1, 2, 1), (0, 2, 0, 1)], check=False)
    v = validate(alg)
    assert v.kind == "jacobi" and v.indices == (1, 2, 3)


def test_range_violation():
    alg = LieAlgebraData(2, [(0, 1, 5, 1)], check=False)
    assert validate(alg).kind == "range"


def test_killing_form_of_so3():
    assert killing_form(so3()) == QArray.identity(3).scale(-2)


def test_ad_matrix_columns():
    alg = so3()
    ad = ad_matrix(alg, alg.basis_vector(0))
    # [e1, e2] = e3 sits in column 2
    assert ad[2, 1] == 1 and ad[1, 2] == -1


@pytest.mark.parametrize("name", ["m6", "v1", "v3", "kaplan-n6"])
def test_killing_form_is_ad_invariant(name):
    alg = space(name).alg
    b = killing_form(alg)
    for i in range(alg.dim):
        ad = ad_matrix(alg, alg.basis_vector(i))
        bad = tensordot(b, ad, axes=([1], [0]))
        assert (bad + bad.transpose()).is_zero()


def test_from_matrix_basis_uses_exact_commutators():
    mats = [
        QArray.from_ints([[0, 0, 0], [0, 0, -1], [0, 1, 0]]),
        QArray.from_ints([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
        QArray.from_ints([[0, -1, 0], [1, 0, 0], [0, 0, 0]]),
    ]
    r2 = Scalar(0, 1, 2)
    alg = from_matrix_basis([m.scale(r2) for m in mats])
    # [sqrt2 L1, sqrt2 L2] = sqrt2 (sqrt2 L3)
    assert alg.d == 2 and alg.c[0, 1, 2] == r2
    assert commutator(mats[0], mats[0]).is_zero()
    assert validate(alg) is None


def test_dependent_matrix_basis_rejected():
    m = QArray.from_ints([[0, 1], [-1, 0]])
    with pytest.raises(LieAlgebraError):
        from_matrix_basis([m, m.scale(2)])
