"""Dense covariant tensors on the tangent space and the so(m)-derivation action."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactalg import (
    NO_SOLUTION,
    QArray,
    Scalar,
    as_scalar,
    solve_linear,
    tensordot,
)

__all__ = [
    "CovariantTensor",
    "SkewEndo",
    "symmetrize",
    "so_action",
    "metric_embed",
    "solve_tensor_combination",
    "TensorSymmetryError",
]


class TensorSymmetryError(ValueError):
    pass


class CovariantTensor:
    """Covariant tensor of valence ``r`` on an ``n``-dimensional space.

    Components ``t[i1, ..., ir] = t(e_i1, ..., e_ir)`` are stored densely in a
    :class:`QArray` of shape ``(n,) * r``.
    """

    __slots__ = ("dim", "valence", "data")

    def __init__(self, data: QArray, dim: int | None = None):
        if not isinstance(data, QArray):
            data = QArray.from_scalars(data)
        shape = data.shape
        if dim is None:
            if not shape:
                raise ValueError("dim must be given for valence-0 tensors")
            dim = shape[0]
        if any(s != dim for s in shape):
            raise ValueError(f"components of shape {shape} do not form a tensor on R^{dim}")
        self.dim = dim
        self.valence = len(shape)
        self.data = data

    @classmethod
    def zeros(cls, dim: int, valence: int, d: int = 1) -> "CovariantTensor":
        return cls(QArray.zeros((dim,) * valence, d), dim)

    @classmethod
    def scalar(cls, value, dim: int) -> "CovariantTensor":
        return cls(QArray.from_scalars(value), dim)

    @property
    def d(self) -> int:
        return self.data.d

    def __repr__(self) -> str:
        return f"CovariantTensor(dim={self.dim}, valence={self.valence}, d={self.d})"

    def __getitem__(self, idx) -> Scalar:
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) != self.valence:
            raise IndexError(f"expected {self.valence} indices")
        return self.data[idx] if idx else self.data.to_scalars()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CovariantTensor):
            return NotImplemented
        return self.dim == other.dim and self.valence == other.valence and self.data == other.data

    __hash__ = None

    def __add__(self, other: "CovariantTensor") -> "CovariantTensor":
        return CovariantTensor(self.data + other.data, self.dim)

    def __sub__(self, other: "CovariantTensor") -> "CovariantTensor":
        return CovariantTensor(self.data - other.data, self.dim)

    def __neg__(self) -> "CovariantTensor":
        return CovariantTensor(-self.data, self.dim)

    def scale(self, s) -> "CovariantTensor":
        return CovariantTensor(self.data.scale(s), self.dim)

    def is_zero(self) -> bool:
        return self.data.is_zero()

    def permute_slots(self, order: Sequence[int]) -> "CovariantTensor":
        """New tensor ``s`` with ``s(v_0, ..., v_r) = t(v_order[0], ...)`` in numpy transpose sense."""
        return CovariantTensor(self.data.transpose(tuple(order)), self.dim)

    def tensor(self, other: "CovariantTensor") -> "CovariantTensor":
        """Tensor product ``(t (x) s)(u, v) = t(u) s(v)``."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = tensordot(self.data, other.data, axes=0)
        return CovariantTensor(out, self.dim)

    def contract(self, slot: int, v: QArray) -> "CovariantTensor":
        """Insert the vector ``v`` into ``slot``."""
        out = tensordot(self.data, v, axes=([slot], [0]))
        return CovariantTensor(out, self.dim)

    def evaluate(self, *vectors: QArray) -> Scalar:
        if len(vectors) != self.valence:
            raise ValueError(f"need {self.valence} vectors")
        t = self
        for v in reversed(vectors):
            t = t.contract(t.valence - 1, _vec(v))
        return t.data.to_scalars()

    def is_symmetric_in(self, slots: Iterable[int]) -> bool:
        slots = list(slots)
        for i, j in zip(slots, slots[1:]):
            order = list(range(self.valence))
            order[i], order[j] = order[j], order[i]
            if self.permute_slots(order) != self:
                return False
        return True


def _vec(v) -> QArray:
    return v if isinstance(v, QArray) else QArray.from_scalars(list(v))


class SkewEndo:
    """Endomorphism of m given by its matrix (``A[i, j]`` = i-th coordinate of ``A e_j``).

    When a metric is supplied the skew-adjointness ``g A + (g A)^T = 0`` is
    checked on construction.
    """

    __slots__ = ("dim", "matrix")

    def __init__(self, matrix, metric: QArray | None = None):
        if not isinstance(matrix, QArray):
            matrix = QArray.from_scalars(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("SkewEndo needs a square matrix")
        self.dim = matrix.shape[0]
        self.matrix = matrix
        if metric is not None and not self.is_skew_adjoint(metric):
            raise ValueError("endomorphism is not skew-adjoint for the given metric")

    def is_skew_adjoint(self, metric: QArray) -> bool:
        ga = tensordot(metric, self.matrix, axes=([1], [0]))
        return (ga + ga.transpose()).is_zero()

    def __repr__(self) -> str:
        return f"SkewEndo(dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, SkewEndo):
            return NotImplemented
        return self.matrix == other.matrix

    __hash__ = None

    def __add__(self, other: "SkewEndo") -> "SkewEndo":
        return SkewEndo(self.matrix + other.matrix)

    def __sub__(self, other: "SkewEndo") -> "SkewEndo":
        return SkewEndo(self.matrix - other.matrix)

    def scale(self, s) -> "SkewEndo":
        return SkewEndo(self.matrix.scale(s))

    def compose(self, other: "SkewEndo") -> "SkewEndo":
        return SkewEndo(tensordot(self.matrix, other.matrix, axes=([1], [0])))

    def bracket(self, other: "SkewEndo") -> "SkewEndo":
        return SkewEndo(self.compose(other).matrix - other.compose(self).matrix)

    def apply(self, v: QArray) -> QArray:
        return tensordot(self.matrix, _vec(v), axes=([1], [0]))


def symmetrize(t: CovariantTensor, slots: Iterable[int]) -> CovariantTensor:
    """Average of ``t`` over all permutations of the given slots."""
    slots = sorted(set(slots))
    for s in slots:
        if not 0 <= s < t.valence:
            raise IndexError(f"slot {s} out of range for valence {t.valence}")
    if len(slots) <= 1:
        return t
    total = None
    for perm in itertools.permutations(slots):
        order = list(range(t.valence))
        for src, dst in zip(slots, perm):
            order[src] = dst
        term = t.data.transpose(tuple(order))
        total = term if total is None else total + term
    return CovariantTensor(total.scale(Fraction(1, math.factorial(len(slots)))), t.dim)


def so_action(a: SkewEndo, t: CovariantTensor) -> CovariantTensor:
    """Derivation action ``(a.t)(v_1, ..., v_r) = -sum_i t(v_1, ..., a v_i, ..., v_r)``."""
    if a.dim != t.dim:
        raise ValueError(f"dimension mismatch: endomorphism on R^{a.dim}, tensor on R^{t.dim}")
    if t.valence == 0:
        return CovariantTensor.zeros(t.dim, 0, t.d)
    total = None
    for i in range(t.valence):
        term = tensordot(t.data, a.matrix, axes=([i], [0])).moveaxis(-1, i)
        total = term if total is None else total + term
    return CovariantTensor(-total, t.dim)


def derivative_action(lam: QArray, t: CovariantTensor) -> CovariantTensor:
    """Stack of ``A_x . t`` over a family of endomorphisms, as one tensor.

    ``lam[x, i, j]`` is the matrix of ``A_x``.  The result ``s`` has valence
    ``r + 1`` with ``s[x, ...] = (A_x . t)[...]``.
    """
    total = None
    for i in range(t.valence):
        # contract slot i with lam's row index; new axes are (x, j) at the end
        term = tensordot(t.data, lam, axes=([i], [1])).moveaxis(-1, i).moveaxis(-1, 0)
        total = term if total is None else total + term
    if total is None:
        return CovariantTensor.zeros(t.dim, 1, t.d)
    return CovariantTensor(-total, t.dim)


def metric_embed(t: CovariantTensor, g: CovariantTensor, tail: int = 2) -> CovariantTensor:
    """Include ``Sym^k (x) Sym^2`` into ``Sym^{k+2} (x) Sym^2`` using the metric.

    The result is the symmetrization of ``g (x) t`` over its first ``k + 2``
    slots, so that on the diagonal ``out(xi, ..., xi; x, y) = <xi, xi> t(xi, ..., xi; x, y)``.
    ``tail`` is the number of trailing non-symmetrized slots (2, or 0 for plain
    symmetric forms).
    """
    if g.valence != 2 or not g.is_symmetric_in([0, 1]):
        raise TensorSymmetryError("metric must be a symmetric bilinear form")
    k = t.valence - tail
    if k < 0:
        raise TensorSymmetryError(f"valence {t.valence} too small for {tail} trailing slots")
    if not t.is_symmetric_in(range(k)):
        raise TensorSymmetryError("leading slots are not symmetric")
    if tail == 2 and not t.is_symmetric_in([k, k + 1]):
        raise TensorSymmetryError("trailing pair is not symmetric")
    prod = g.tensor(t)
    return symmetrize(prod, range(k + 2))


def solve_tensor_combination(target: CovariantTensor, basis: Sequence[CovariantTensor]):
    """Exact ``c`` with ``target = sum_i c_i basis_i``.

    Returns ``(coefficients, unique)`` or ``NO_SOLUTION``.
    """
    for b in basis:
        if b.dim != target.dim or b.valence != target.valence:
            raise ValueError("all tensors must share dimension and valence")
    return solve_flat_combination(target.data, [b.data for b in basis])


def solve_flat_combination(target: QArray, basis: Sequence[QArray]):
    """Shared solver for dense or compressed tensors of matching shape."""
    n = target.size
    flat_t = target.reshape((n,))
    if not basis:
        if flat_t.is_zero():
            return [], True
        return NO_SOLUTION
    cols = QArray.stack([b.reshape((n,)) for b in basis], axis=1)
    res = solve_linear(cols, flat_t)
    if res is NO_SOLUTION:
        return NO_SOLUTION
    x, ker = res
    return [x[i] for i in range(len(basis))], not ker


def vector(values, d: int = 1) -> QArray:
    return QArray.from_scalars([as_scalar(v) for v in values], d)


def random_vector(rng: np.random.Generator, n: int, lo: int = -5, hi: int = 6) -> QArray:
    """Random rational vector with small numerators and denominators."""
    nums = rng.integers(lo, hi, size=n)
    dens = rng.integers(1, 4, size=n)
    return QArray.from_scalars([Fraction(int(p), int(q)) for p, q in zip(nums, dens)])
