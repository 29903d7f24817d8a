"""Built-in spaces, constructed from explicit matrix or quaternion models.

No structure constant is typed in by hand: every algebra below comes from
exact matrix commutators (or quaternion products for the H-type group).

=============  ===============================================  ====  ====  ==
identifier     model                                            dim   h     d
=============  ===============================================  ====  ====  ==
m6             SU(3)/T^2, normal metric, E_1..E_6 orthonormal   8     2     2
v1             SO(5)/SO(3)_irr (locally Sp(2)/SU(2)), normal    10    3     1
v3             SO(3)xSU(3)/U(2), -(2c/3) B_su2 - B_su3          11    4     1
kaplan-n6      H + R^2, Clifford bracket, left-invariant        6     0     1
flat-torus-n   abelian R^n                                      n     0     1
bi-invariant-  so(3), identity metric                           3     0     1
su2
=============  ===============================================  ====  ====  ==
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactalg import ExactMatrix, QArray, Scalar, as_scalar, kernel, matmul, tensordot
from .homogeneous import ReductiveSpace
from .lie import LieAlgebraData, _Coordinates, from_matrix_basis, killing_form

__all__ = [
    "SpaceRecipe",
    "RECIPES",
    "build",
    "build_m6",
    "build_v1",
    "build_v3",
    "build_kaplan",
    "build_reference",
    "catalog_ids",
    "realify",
]

HALF = Fraction(1, 2)


# -- matrix helpers -------------------------------------------------------------------


def _mat(rows, d: int = 1) -> QArray:
    return QArray.from_scalars(rows, d)


def _unit(n: int, i: int, j: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def realify(re_part, im_part, d: int = 1) -> QArray:
    """Real 2p x 2p matrix ``[[X, -Y], [Y, X]]`` of the complex matrix ``X + iY``."""
    x = np.array(re_part, dtype=object)
    y = np.array(im_part, dtype=object)
    top = np.concatenate([x, -y], axis=1)
    bottom = np.concatenate([y, x], axis=1)
    return _mat(np.concatenate([top, bottom], axis=0).tolist(), d)


def _block_diag(a: QArray, b: QArray) -> QArray:
    p, q = a.shape[0], b.shape[0]
    d = max(a.d, b.d)
    out = np.full((p + q, p + q), Scalar(0, 0, d), dtype=object)
    out[:p, :p] = np.array(a.to_scalars(), dtype=object)
    out[p:, p:] = np.array(b.to_scalars(), dtype=object)
    return _mat(out.tolist(), d)


def _trace_form(scale) -> Callable[[QArray, QArray], Scalar]:
    s = as_scalar(scale)

    def form(x: QArray, y: QArray) -> Scalar:
        xy = matmul(x, y)
        tr = sum((xy[i, i] for i in range(xy.shape[0])), Scalar(0, 0, xy.d))
        return tr * s

    return form


def _gram(vecs: Sequence[QArray], form: QArray) -> QArray:
    """Gram matrix ``V^T F V`` for coordinate vectors ``vecs`` under bilinear form ``form``."""
    v = QArray.stack(list(vecs), axis=1)
    return tensordot(tensordot(v, form, axes=([0], [0])), v, axes=([1], [0]))


def _combine(mats: Sequence[QArray], coeffs: QArray) -> QArray:
    out = None
    for c, m in zip(coeffs.flat_scalars(), mats):
        if c:
            t = m.scale(c)
            out = t if out is None else out + t
    return out


def _reductive_from_matrices(
    g_mats: Sequence[QArray],
    h_vectors: Sequence[QArray],
    form: QArray,
    name: str,
    h_labels: Sequence[str],
    m_labels: Sequence[str] | None = None,
    scale=1,
) -> ReductiveSpace:
    """g given by matrices; h by coordinate vectors; m := form-orthogonal complement of h."""
    hmat = QArray.stack(list(h_vectors), axis=0)  # (dim h, dim g)
    cond = tensordot(hmat, form, axes=([1], [0]))  # <h_a, .>
    m_vectors = kernel(cond)
    new_mats = [_combine(g_mats, v) for v in h_vectors] + [_combine(g_mats, v) for v in m_vectors]
    nh = len(h_vectors)
    labels = list(h_labels) + list(m_labels or [f"X{i + 1}" for i in range(len(m_vectors))])
    alg = from_matrix_basis(new_mats, labels)
    metric = _gram(m_vectors, form).scale(scale)
    return ReductiveSpace(alg, range(nh), range(nh, nh + len(m_vectors)), metric, name=name)


# -- M^6 = SU(3)/T^2 ------------------------------------------------------------------


def _m6_matrices():
    r = Scalar(0, HALF, 2)  # 1/sqrt(2)
    z3 = [[0] * 3 for _ in range(3)]

    def cplx(re_rows, im_rows, factor=None):
        m = realify(re_rows, im_rows)
        return m.scale(factor) if factor is not None else m

    h1 = cplx(z3, [[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    h2 = cplx(z3, [[0, 0, 0], [0, 1, 0], [0, 0, -1]])
    e1 = cplx([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], z3, r)
    e2 = cplx([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], z3, r)
    e3 = cplx([[0, 0, 0], [0, 0, 1], [0, -1, 0]], z3, r)
    # single 1/sqrt(2) factor so that E_4 has unit length like the others
    e4 = cplx(z3, [[0, 1, 0], [1, 0, 0], [0, 0, 0]], r)
    e5 = cplx(z3, [[0, 0, -1], [0, 0, 0], [-1, 0, 0]], r)
    e6 = cplx(z3, [[0, 0, 0], [0, 0, 1], [0, 1, 0]], r)
    return [h1, h2], [e1, e2, e3, e4, e5, e6]


def build_m6() -> ReductiveSpace:
    """Complex flag manifold SU(3)/S(U(1)^3) with the normal metric ``-Re tr(XY)``."""
    hs, es = _m6_matrices()
    mats = hs + es
    alg = from_matrix_basis(mats, ["H1", "H2", "E1", "E2", "E3", "E4", "E5", "E6"])
    # on realified matrices, -Re tr_C(XY) = -1/2 tr_R(XY)
    form = _trace_form(Fraction(-1, 2))
    metric = [[form(x, y) for y in es] for x in es]
    return ReductiveSpace(alg, [0, 1], range(2, 8), _mat(metric, 2), name="m6")


# -- V_1 = SO(5)/SO(3)_irr --------------------------------------------------------------


def _so3_standard() -> list[QArray]:
    """``L_i`` with ``(L_i)_{jk} = -eps_{ijk}``, so ``[L_1, L_2] = L_3`` cyclically."""
    out = []
    for i in range(3):
        m = [[0] * 3 for _ in range(3)]
        j, k = (i + 1) % 3, (i + 2) % 3
        m[k][j] = 1
        m[j][k] = -1
        out.append(_mat(m))
    return out


def _sym0_basis() -> list[QArray]:
    return [
        _mat([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
        _mat([[0, 0, 0], [0, 1, 0], [0, 0, -1]]),
        _mat([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
        _mat([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        _mat([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    ]


def build_v1(scale=1) -> ReductiveSpace:
    """Berger space as SO(5)/SO(3), so(3) acting on traceless symmetric 3x3 matrices.

    so(5) is realized as the orthogonal algebra of the trace inner product
    ``G`` on Sym^2_0(R^3) written in a rational (non-orthonormal) basis, which
    keeps everything over Q.  Metric: ``-scale * tr(XY)`` restricted to m.
    """
    sym = _sym0_basis()
    coords = _Coordinates(sym)
    gram = _mat([[_trace_form(1)(a, b) for b in sym] for a in sym])
    ginv = ExactMatrix.of(gram).inverse()
    so_g = []
    for a in range(5):
        for b in range(a + 1, 5):
            skew = [[0] * 5 for _ in range(5)]
            skew[a][b], skew[b][a] = 1, -1
            so_g.append(matmul(ginv, _mat(skew)))
    rho = []
    for lmat in _so3_standard():
        cols = [coords(matmul(lmat, s) - matmul(s, lmat)) for s in sym]
        rho.append(QArray.stack(cols, axis=1))
    g_coords = _Coordinates(so_g)
    h_vectors = [g_coords(r) for r in rho]
    tf = _trace_form(-1)
    form = _mat([[tf(x, y) for y in so_g] for x in so_g])
    return _reductive_from_matrices(
        so_g, h_vectors, form, "v1", ["L1", "L2", "L3"], scale=scale
    )


# -- V_3 = SO(3) x SU(3) / U(2) -----------------------------------------------------------


def _su2_basis():
    """u(2) basis as complex 2x2 (re, im) pairs: three su(2) elements, then the centre."""
    return [
        ([[0, 0], [0, 0]], [[1, 0], [0, -1]]),
        ([[0, 1], [-1, 0]], [[0, 0], [0, 0]]),
        ([[0, 0], [0, 0]], [[0, 1], [1, 0]]),
        ([[0, 0], [0, 0]], [[1, 0], [0, 1]]),
    ]


def _su3_basis():
    z = [[0] * 3 for _ in range(3)]
    out = []
    out.append((z, [[1, 0, 0], [0, -1, 0], [0, 0, 0]]))
    out.append((z, [[0, 0, 0], [0, 1, 0], [0, 0, -1]]))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        re_ = [[0] * 3 for _ in range(3)]
        re_[i][j], re_[j][i] = 1, -1
        im_ = [[0] * 3 for _ in range(3)]
        im_[i][j], im_[j][i] = 1, 1
        out.append((re_, z))
        out.append((z, im_))
    return out


def _cmul(x, y):
    """Product of complex matrices given as (re, im) nested lists."""
    xr, xi = np.array(x[0], dtype=object), np.array(x[1], dtype=object)
    yr, yi = np.array(y[0], dtype=object), np.array(y[1], dtype=object)
    return (xr @ yr - xi @ yi).tolist(), (xr @ yi + xi @ yr).tolist()


def _csub(x, y):
    return (
        (np.array(x[0], dtype=object) - np.array(y[0], dtype=object)).tolist(),
        (np.array(x[1], dtype=object) - np.array(y[1], dtype=object)).tolist(),
    )


def build_v3(c=Fraction(3, 2)) -> ReductiveSpace:
    """Wilking space with metric ``-c B'_su(2) - B_su(3)``.

    U(2) embeds by ``A -> (Ad_A on su(2) ~ R^3, diag(A, det(A)^-1))``.  The
    su(2) form is ``B' = (2/3) B`` with ``B`` the Killing form, which places the
    standard metric ``-B_g`` (the Einstein one) at ``c = 3/2``.
    """
    c = as_scalar(c)
    if c.sign() <= 0:
        raise ValueError("parameter c must be positive")
    so3 = _so3_standard()
    su3 = [realify(re_, im_) for re_, im_ in _su3_basis()]
    z33 = QArray.zeros((3, 3))
    z66 = QArray.zeros((6, 6))
    g_mats = [_block_diag(l, z66) for l in so3] + [_block_diag(z33, s) for s in su3]
    g_coords = _Coordinates(g_mats)

    u2 = _su2_basis()
    su2 = u2[:3]
    su2_coords = _Coordinates([realify(*u) for u in su2])
    so3_coords = _Coordinates(so3)
    h_vectors = []
    for x in u2:
        # adjoint action on su(2) in the basis su2; orthogonal basis -> skew matrix
        cols = [su2_coords(realify(*_csub(_cmul(x, u), _cmul(u, x)))) for u in su2]
        ad = QArray.stack(cols, axis=1)
        so_part = ad  # a 3x3 skew-symmetric matrix, i.e. an element of so(3)
        so3_coords(so_part)  # membership check
        tr_im = x[1][0][0] + x[1][1][1]
        tr_re = x[0][0][0] + x[0][1][1]
        re3 = [[x[0][0][0], x[0][0][1], 0], [x[0][1][0], x[0][1][1], 0], [0, 0, -tr_re]]
        im3 = [[x[1][0][0], x[1][0][1], 0], [x[1][1][0], x[1][1][1], 0], [0, 0, -tr_im]]
        h_vectors.append(g_coords(_block_diag(so_part, realify(re3, im3))))

    alg = from_matrix_basis(g_mats)
    b = killing_form(alg)
    proj_so = np.diag([1, 1, 1] + [0] * 8)
    proj_su = np.diag([0, 0, 0] + [1] * 8)
    b_so = matmul(matmul(QArray.from_ints(proj_so), b), QArray.from_ints(proj_so))
    b_su = matmul(matmul(QArray.from_ints(proj_su), b), QArray.from_ints(proj_su))
    form = -(b_so.scale(c * Fraction(2, 3)) + b_su)
    return _reductive_from_matrices(
        g_mats, h_vectors, form, "v3", ["U1", "U2", "U3", "U0"]
    )


# -- Kaplan's H-type group N^6 ------------------------------------------------------------

# quaternion basis 1, i, j, k as indices 0..3
_QMUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def qmul(x: Sequence, y: Sequence) -> list:
    """Product of quaternions given as 4-vectors in the basis (1, i, j, k)."""
    out = [0, 0, 0, 0]
    for p in range(4):
        for q in range(4):
            if x[p] and y[q]:
                s, r = _QMUL[(p, q)]
                out[r] += s * x[p] * y[q]
    return out


def qinv(x: Sequence) -> list:
    n2 = sum(Fraction(v) * v for v in x)
    return [Fraction(x[0]) / n2] + [-Fraction(v) / n2 for v in x[1:]]


def build_kaplan() -> ReductiveSpace:
    """N^6: n = H + R^2 with centre R^2 = span{i_c, j_c} and ``<[a, b], c> = <a c^-1, b>``."""
    e = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    center = {4: [0, 1, 0, 0], 5: [0, 0, 1, 0]}  # i_c, j_c as elements of Cl(R^2) ~ H
    consts = []
    for p in range(4):
        for q in range(p + 1, 4):
            for ci, cq in center.items():
                act = qmul(e[p], qinv(cq))  # c . a = a c^{-1}
                val = sum(Fraction(act[r]) * e[q][r] for r in range(4))
                if val:
                    consts.append((p, q, ci, val))
    labels = ["1", "i", "j", "k", "i_c", "j_c"]
    alg = LieAlgebraData(6, consts, labels)
    return ReductiveSpace(alg, [], range(6), QArray.identity(6), name="kaplan-n6")


# -- reference spaces ------------------------------------------------------------------------


def build_reference(kind: str, n: int = 3) -> ReductiveSpace:
    """``"flat-torus"`` (abelian R^n) or ``"bi-invariant-su2"`` (so(3), identity metric)."""
    if kind == "flat-torus":
        if n < 2:
            raise ValueError("flat torus needs n >= 2")
        alg = LieAlgebraData(n, [])
        return ReductiveSpace(alg, [], range(n), QArray.identity(n), name=f"flat-torus-{n}")
    if kind == "bi-invariant-su2":
        alg = from_matrix_basis(_so3_standard(), ["L1", "L2", "L3"])
        return ReductiveSpace(alg, [], range(3), QArray.identity(3), name="bi-invariant-su2")
    raise ValueError(f"unknown reference space {kind!r}")


# -- recipes ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceRecipe:
    identifier: str
    builder: Callable[..., ReductiveSpace]
    params: dict = field(default_factory=dict)
    description: str = ""
    expected: dict = field(default_factory=dict)


RECIPES: dict[str, SpaceRecipe] = {
    "m6": SpaceRecipe(
        "m6", build_m6, {}, "SU(3)/S(U(1)xU(1)xU(1)), normal metric",
        {"singer": 1, "dims": [3, 2, 2], "relation_order": 4,
         "coefficients": {3: Fraction(-5, 8), 1: Fraction(-1, 16)}, "einstein": True},
    ),
    "v1": SpaceRecipe(
        "v1", build_v1, {"scale": Fraction(1)}, "Berger space Sp(2)/SU(2) ~ SO(5)/SO(3)_irr",
        {"singer": 0, "dims": [3, 3], "relation_order": 2, "coefficients": {1: Fraction(1)},
         "einstein": True},
    ),
    "v3": SpaceRecipe(
        "v3", build_v3, {"c": Fraction(3, 2)}, "Wilking space SO(3)xSU(3)/U(2)",
        {"singer": 0, "dims": [4, 4], "relation_order": 2, "coefficients": {1: Fraction(2, 5)},
         "einstein": True},
    ),
    "kaplan-n6": SpaceRecipe(
        "kaplan-n6", build_kaplan, {}, "Kaplan's H-type group with 2-dimensional centre",
        {"singer": 1, "g1_dim": 4, "relation_order": 4,
         "coefficients": {3: Fraction(-5, 4), 1: Fraction(-1, 4)}, "einstein": False},
    ),
    "flat-torus-n": SpaceRecipe(
        "flat-torus-n", lambda n=3: build_reference("flat-torus", n), {"n": 3}, "abelian R^n",
        {"singer": 0, "relation_order": 0, "einstein": True},
    ),
    "bi-invariant-su2": SpaceRecipe(
        "bi-invariant-su2", lambda: build_reference("bi-invariant-su2"), {},
        "SU(2) with bi-invariant metric", {"singer": 0, "relation_order": 0, "einstein": True},
    ),
}


def catalog_ids() -> list[str]:
    return list(RECIPES)


def build(identifier: str) -> ReductiveSpace:
    """Resolve a catalog identifier such as ``m6``, ``flat-torus-4`` or ``v3:c=2``."""
    m = re.fullmatch(r"flat-torus-(\d+)", identifier)
    if m:
        return build_reference("flat-torus", int(m.group(1)))
    base, _, rest = identifier.partition(":")
    if base not in RECIPES or base == "flat-torus-n":
        raise KeyError(f"unknown catalog space {identifier!r}")
    recipe = RECIPES[base]
    kwargs = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if key not in recipe.params:
                raise KeyError(f"space {base!r} has no parameter {key!r}")
            kwargs[key] = Fraction(val)
    space = recipe.builder(**kwargs)
    if kwargs:
        space.name = identifier
    return space
