"""Reductive homogeneous spaces G/H with an invariant metric.

The tangent space at the base point is identified with the reductive
complement m.  The Levi-Civita connection is encoded by its Nomizu operator
``alpha(x) y = 1/2 [x, y]_m + U(x, y)``, and since every G-invariant tensor is
parallel for the canonical connection, covariant derivatives at the base point
reduce to the algebraic derivation action of ``alpha``:

    (nabla T)(x; a_1, ..., a_r) = (alpha(x) . T)(a_1, ..., a_r)
                                = -sum_i T(a_1, ..., alpha(x) a_i, ..., a_r)

Everything below is finite-dimensional exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactalg import (
    ExactMatrix,
    QArray,
    Scalar,
    as_scalar,
    matmul,
    tensordot,
)
from .lie import LieAlgebraData, validate as validate_lie
from .tensoralg import CovariantTensor, SkewEndo, derivative_action, so_action

__all__ = [
    "ReductiveSpace",
    "ReductiveSpaceError",
    "CurvatureJet",
    "InvariantViolation",
    "EinsteinVerdict",
    "connection_operator",
    "curvature",
    "curvature_identity_failures",
    "raw_curvature",
    "second_bianchi_holds",
    "jet_invariance_holds",
    "sectional_curvature",
    "nabla_jet",
    "ricci",
]


class ReductiveSpaceError(ValueError):
    """Input data do not define a valid reductive space with invariant metric."""

    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check


class InvariantViolation(ArithmeticError):
    """A computed object failed an identity it must satisfy exactly (a bug, not bad input)."""


class ReductiveSpace:
    """``g = h + m`` with a metric on m.

    ``h_idx`` and ``m_idx`` partition the basis indices of ``alg``; ``metric``
    is the Gram matrix of the m basis (in ``m_idx`` order).
    """

    def __init__(
        self,
        alg: LieAlgebraData,
        h_idx: Sequence[int],
        m_idx: Sequence[int],
        metric,
        name: str = "space",
        check: bool = True,
    ):
        self.alg = alg
        self.h_idx = tuple(int(i) for i in h_idx)
        self.m_idx = tuple(int(i) for i in m_idx)
        self.name = name
        metric = metric if isinstance(metric, QArray) else QArray.from_scalars(metric)
        self.metric = ExactMatrix.of(metric.with_field(alg.d))
        self.d = self.metric.d
        self.n = len(self.m_idx)
        self._cache: dict = {}
        if sorted(self.h_idx + self.m_idx) != list(range(alg.dim)):
            raise ReductiveSpaceError("partition", "h and m indices must partition the basis")
        if self.metric.shape != (self.n, self.n):
            raise ReductiveSpaceError("metric", f"metric must be {self.n}x{self.n}")
        c = alg.c
        h, m = list(self.h_idx), list(self.m_idx)
        self._c_mm_m = _sub(c, m, m, m)
        self._c_mm_h = _sub(c, m, m, h)
        self._c_hm_m = _sub(c, h, m, m)
        if check:
            for name_, ok in self.checks().items():
                if not ok:
                    raise ReductiveSpaceError(name_, f"check '{name_}' failed for {self.name}")

    def __repr__(self) -> str:
        return f"ReductiveSpace({self.name!r}, dim g={self.alg.dim}, dim h={len(self.h_idx)}, n={self.n})"

    # -- validation -----------------------------------------------------------
    def checks(self) -> dict[str, bool]:
        """Structural checks: subalgebra, reductivity, metric symmetry, ad(h)-invariance, positivity."""
        c = self.alg.c
        h, m = list(self.h_idx), list(self.m_idx)
        out = {"lie-algebra": validate_lie(self.alg) is None}
        out["subalgebra"] = not h or _sub(c, h, h, m).is_zero()
        out["reductive"] = not h or _sub(c, h, m, h).is_zero()
        g = self.metric
        out["metric-symmetric"] = (g - g.transpose()).is_zero()
        out["ad-invariance"] = all(e.is_skew_adjoint(g) for e in self.isotropy_matrices())
        out["positive-definite"] = out["metric-symmetric"] and self.is_positive_definite()
        return out

    def is_positive_definite(self) -> bool:
        """Leading principal minors, decided exactly."""
        for k in range(1, self.n + 1):
            minor = ExactMatrix.of(self.metric[:k, :k]).determinant()
            if minor.sign() <= 0:
                return False
        return True

    # -- algebraic pieces ---------------------------------------------------------
    @property
    def metric_inverse(self) -> ExactMatrix:
        if "ginv" not in self._cache:
            try:
                self._cache["ginv"] = self.metric.inverse()
            except ZeroDivisionError:
                raise ReductiveSpaceError("metric", "metric is degenerate") from None
        return self._cache["ginv"]

    def metric_tensor(self) -> CovariantTensor:
        return CovariantTensor(self.metric, self.n)

    def isotropy_matrices(self) -> list[SkewEndo]:
        """Matrices of ``ad(h_a)`` restricted to m (column j = m-part of ``[h_a, e_j]``)."""
        out = []
        for a in range(len(self.h_idx)):
            out.append(SkewEndo(self._c_hm_m[a].transpose()))
        return out

    def bracket_m(self) -> QArray:
        """``B[i, j, k]``: k-th m-coordinate of ``[e_i, e_j]`` for m basis vectors."""
        return self._c_mm_m

    def bracket_h(self) -> QArray:
        return self._c_mm_h

    def nomizu(self) -> QArray:
        """``L[x, k, j]`` = k-th coordinate of ``alpha(e_x) e_j``."""
        if "nomizu" not in self._cache:
            self._cache["nomizu"] = _nomizu(self)
        return self._cache["nomizu"]

    def rescaled(self, factor, name: str | None = None) -> "ReductiveSpace":
        """Same algebra with metric multiplied by ``factor`` (> 0)."""
        f = as_scalar(factor)
        if f.sign() <= 0:
            raise ValueError("metric scale must be positive")
        return ReductiveSpace(
            self.alg, self.h_idx, self.m_idx, self.metric.scale(f), name or self.name
        )

    # -- cached jets --------------------------------------------------------
    def jet_tensor(self, k: int) -> CovariantTensor:
        key = ("jet", k)
        if key not in self._cache:
            if k == 0:
                self._cache[key] = curvature(self)
            else:
                prev = self.jet_tensor(k - 1)
                self._cache[key] = derivative_action(self.nomizu(), prev)
        return self._cache[key]

    def drop_jet_cache(self, keep_below: int = 0) -> None:
        for key in [k for k in self._cache if k[0] == "jet" and k[1] >= keep_below]:
            del self._cache[key]


def _sub(c: QArray, a, b, k) -> QArray:
    n1, n2, n3 = len(a), len(b), len(k)
    if not (n1 and n2 and n3):
        return QArray.zeros((n1, n2, n3), c.d)
    part = c[np.ix_(a, b, k)]
    return part if isinstance(part, QArray) else QArray.from_scalars([[[part]]])


def _nomizu(s: ReductiveSpace) -> QArray:
    b = s.bracket_m()  # b[x, y, k]
    g = s.metric
    ginv = s.metric_inverse
    # 2 <U(x, y), z> = <[z, x]_m, y> + <x, [z, y]_m>
    t1 = tensordot(b, g, axes=([2], [0]))  # (z, x, y) = <[z, x], e_y>
    ulow = t1 + t1.transpose((0, 2, 1))  # (z, x, y)
    ulow = ulow.transpose((1, 2, 0)).scale(Fraction(1, 2))  # (x, y, z)
    u = tensordot(ulow, ginv, axes=([2], [0]))  # (x, y, k): U(e_x, e_y)_k
    half = b.scale(Fraction(1, 2))  # (x, y, k)
    lam = (half + u).transpose((0, 2, 1))  # (x, k, j)
    return lam


def connection_operator(s: ReductiveSpace, x) -> SkewEndo:
    """``alpha(x)`` as a skew-adjoint endomorphism of m."""
    x = x if isinstance(x, QArray) else QArray.from_scalars(list(x))
    lam = s.nomizu()
    mat = tensordot(x, lam, axes=([0], [0]))
    op = SkewEndo(mat)
    if not op.is_skew_adjoint(s.metric):
        raise InvariantViolation("connection operator is not skew-adjoint")
    return op


def _check_curvature(r: CovariantTensor) -> list[str]:
    t = r.data
    failed = []
    if not (t + t.transpose((1, 0, 2, 3))).is_zero():
        failed.append("antisymmetry-xy")
    if not (t + t.transpose((0, 1, 3, 2))).is_zero():
        failed.append("antisymmetry-zw")
    if not (t - t.transpose((2, 3, 0, 1))).is_zero():
        failed.append("pair-symmetry")
    # R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w)
    if not (t + t.transpose((2, 0, 1, 3)) + t.transpose((1, 2, 0, 3))).is_zero():
        failed.append("bianchi-1")
    return failed


def raw_curvature(s: ReductiveSpace) -> CovariantTensor:
    """``R(x, y, z, w) = <R(x, y) z, w>`` with
    ``R(x, y) = [alpha(x), alpha(y)] - alpha([x, y]_m) - ad([x, y]_h)``.

    With this convention the sectional curvature of the plane spanned by
    orthonormal ``x, y`` is ``R(x, y, y, x)``.
    """
    lam = s.nomizu()  # (x, k, j)
    n = s.n
    ll = tensordot(lam, lam, axes=([2], [1]))  # (x, k, y, j) = (L_x L_y)[k, j]
    ll = ll.transpose((0, 2, 1, 3))  # (x, y, k, j)
    comm = ll - ll.transpose((1, 0, 2, 3))
    lam_br = tensordot(s.bracket_m(), lam, axes=([2], [0]))  # (x, y, k, j)
    op = comm - lam_br
    if s.h_idx:
        hterm = tensordot(s.bracket_h(), s._c_hm_m, axes=([2], [0]))  # (x, y, j, k)
        op = op - hterm.transpose((0, 1, 3, 2))
    r = tensordot(op, s.metric, axes=([2], [0]))  # (x, y, z=j, w)
    return CovariantTensor(r, n)


def curvature_identity_failures(r: CovariantTensor) -> list[str]:
    """Names of the violated identities among antisymmetries, pair symmetry and Bianchi I."""
    return _check_curvature(r)


def curvature(s: ReductiveSpace) -> CovariantTensor:
    """Curvature tensor (see :func:`raw_curvature`), with its identities checked."""
    tensor = raw_curvature(s)
    failed = _check_curvature(tensor)
    if failed:
        raise InvariantViolation(f"curvature identities failed: {', '.join(failed)}")
    return tensor


@dataclass
class CurvatureJet:
    """``[R, nabla R, ..., nabla^k R]`` at the base point; derivative slots come first."""

    space: ReductiveSpace
    order: int
    tensors: list[CovariantTensor]

    def __getitem__(self, k: int) -> CovariantTensor:
        return self.tensors[k]


def second_bianchi_holds(nabla_r: CovariantTensor) -> bool:
    t = nabla_r.data  # (x; y, z, u, v)
    cyc = t + t.transpose((1, 2, 0, 3, 4)) + t.transpose((2, 0, 1, 3, 4))
    return cyc.is_zero()


def jet_invariance_holds(s: ReductiveSpace, t: CovariantTensor) -> bool:
    return all(so_action(h, t).is_zero() for h in s.isotropy_matrices())


def nabla_jet(s: ReductiveSpace, k: int, verify: bool = True) -> CurvatureJet:
    """Iterated covariant derivatives of the curvature tensor up to order ``k``."""
    if k < 0:
        raise ValueError("order must be non-negative")
    tensors = [s.jet_tensor(j) for j in range(k + 1)]
    if verify:
        if k >= 1 and not second_bianchi_holds(tensors[1]):
            raise InvariantViolation("second Bianchi identity failed")
        for j, t in enumerate(tensors):
            if not jet_invariance_holds(s, t):
                raise InvariantViolation(f"jet of order {j} is not isotropy invariant")
    return CurvatureJet(s, k, tensors)


@dataclass(frozen=True)
class EinsteinVerdict:
    einstein: bool
    constant: Scalar | None  # Ric = constant * g when einstein


def ricci(s: ReductiveSpace) -> tuple[ExactMatrix, EinsteinVerdict]:
    """Ricci form ``Ric(x, y) = sum_ij g^ij R(e_i, x, y, e_j)`` and Einstein verdict."""
    r = s.jet_tensor(0).data
    ginv = s.metric_inverse
    ric = tensordot(r, ginv, axes=([0, 3], [0, 1]))  # (x, y)
    ric = ExactMatrix.of(ric)
    g = s.metric
    lam = ric[0, 0] / g[0, 0]
    einstein = (ric - g.scale(lam)).is_zero()
    return ric, EinsteinVerdict(einstein, lam if einstein else None)


def sectional_curvature(s: ReductiveSpace, x: QArray, y: QArray) -> Scalar:
    """``K(x, y) = R(x, y, y, x) / (|x|^2 |y|^2 - <x, y>^2)``."""
    r = s.jet_tensor(0)
    num = r.evaluate(x, y, y, x)
    g = CovariantTensor(s.metric, s.n)
    den = g.evaluate(x, x) * g.evaluate(y, y) - g.evaluate(x, y) ** 2
    return num / den
