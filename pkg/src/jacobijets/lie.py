"""Finite-dimensional Lie algebras over Q(sqrt d) given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactalg import (
    ExactMatrix,
    QArray,
    Scalar,
    _bareiss,
    _int_pairs,
    as_scalar,
    common_field,
    matmul,
    tensordot,
)

__all__ = [
    "LieAlgebraData",
    "LieAlgebraError",
    "Violation",
    "bracket",
    "validate",
    "killing_form",
    "ad_matrix",
    "from_matrix_basis",
    "matrix_coordinates",
    "commutator",
]


class LieAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """First failing check; indices are 1-based to match file and report output."""

    kind: str  # "range", "antisymmetry" or "jacobi"
    indices: tuple[int, ...]

    def __str__(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind} violation at ({idx})"


class LieAlgebraData:
    """Lie algebra with ``[e_i, e_j] = sum_k c_ij^k e_k``.

    ``constants`` is a sparse list of ``(i, j, k, value)`` with 0-based indices.
    An entry whose partner ``(j, i, k)`` is absent implies it by antisymmetry;
    if both are present they must be negatives of each other.
    """

    def __init__(
        self,
        dim: int,
        constants: Sequence[tuple[int, int, int, object]],
        labels: Sequence[str] | None = None,
        d: int | None = None,
        check: bool = True,
    ):
        self.dim = dim
        consts = [(int(i), int(j), int(k), as_scalar(v)) for i, j, k, v in constants]
        self.d = common_field(*(v.d for *_, v in consts), d or 1)
        self.constants = tuple(sorted(((i, j, k, v) for i, j, k, v in consts if v), key=lambda c: c[:3]))
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.labels) != dim:
            raise LieAlgebraError(f"{len(self.labels)} labels for a {dim}-dimensional algebra")
        self._range_violation = None
        for i, j, k, _ in self.constants:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                self._range_violation = Violation("range", (i + 1, j + 1, k + 1))
                break
        self.c = self._dense() if self._range_violation is None else None
        if check:
            v = validate(self)
            if v is not None:
                raise LieAlgebraError(str(v))

    def _dense(self) -> QArray:
        n = self.dim
        given = {(i, j, k): v for i, j, k, v in self.constants}
        vals = [[[Scalar(0, 0, self.d)] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), v in given.items():
            vals[i][j][k] = v
            if (j, i, k) not in given and i != j:
                vals[j][i][k] = -v
        return QArray.from_scalars(vals, self.d)

    def __repr__(self) -> str:
        return f"LieAlgebraData(dim={self.dim}, d={self.d}, nonzero={len(self.constants)})"

    def basis_vector(self, i: int) -> QArray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return QArray(e, None, 1, self.d)

    def sparse_upper(self) -> list[tuple[int, int, int, Scalar]]:
        """Canonical sparse form: entries with ``i < j`` read off the dense table."""
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(self.dim):
                    v = self.c[i, j, k]
                    if v:
                        out.append((i, j, k, v))
        return out


def bracket(alg: LieAlgebraData, x: QArray, y: QArray) -> QArray:
    """Bilinear extension of the structure constants."""
    if x.shape != (alg.dim,) or y.shape != (alg.dim,):
        raise ValueError(f"vectors must have length {alg.dim}")
    xc = tensordot(x, alg.c, axes=([0], [0]))  # (j, k)
    return tensordot(y, xc, axes=([0], [0]))


def ad_matrix(alg: LieAlgebraData, x: QArray) -> QArray:
    """Matrix of ``ad x``: column ``j`` holds the coordinates of ``[x, e_j]``."""
    return tensordot(x, alg.c, axes=([0], [0])).transpose()


def validate(alg: LieAlgebraData) -> Violation | None:
    """Check index ranges, antisymmetry and the Jacobi identity; return the first violation."""
    if alg._range_violation is not None:
        return alg._range_violation
    c = alg.c
    n = alg.dim
    sym = c + c.transpose((1, 0, 2))
    if not sym.is_zero():
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if sym[i, j, k]:
                        return Violation("antisymmetry", (i + 1, j + 1, k + 1))
    # J[i, j, k, l] = l-th coordinate of [e_i, [e_j, e_k]]
    inner = tensordot(c, c, axes=([2], [1]))  # (j, k, i, l)
    t = inner.transpose((2, 0, 1, 3))
    jac = t + t.transpose((1, 2, 0, 3)) + t.transpose((2, 0, 1, 3))
    if not jac.is_zero():
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if not jac[i, j, k].is_zero():
                        return Violation("jacobi", (i + 1, j + 1, k + 1))
    return None


def killing_form(alg: LieAlgebraData) -> ExactMatrix:
    """``B(e_i, e_j) = trace(ad e_i ad e_j)``."""
    # ad(e_i)[k, l] = c[i, l, k]
    b = tensordot(alg.c, alg.c, axes=([1, 2], [2, 1]))
    return ExactMatrix.of(b)


# -- algebras defined by explicit matrices -----------------------------------


def commutator(x: QArray, y: QArray) -> QArray:
    return matmul(x, y) - matmul(y, x)


class _Coordinates:
    """Coordinates with respect to a linearly independent list of matrices."""

    def __init__(self, mats: Sequence[QArray]):
        self.n = len(mats)
        self.p = mats[0].shape
        cols = QArray.stack([m.reshape((m.size,)) for m in mats], axis=1)  # (p*p, n)
        self.cols = cols
        d = cols.d
        rows_t, _ = _int_pairs(cols.transpose())
        _, pivots, _ = _bareiss(rows_t, d, cols.shape[0])
        if len(pivots) != self.n:
            raise LieAlgebraError("matrix basis is linearly dependent")
        self.pivots = pivots
        square = ExactMatrix.of(QArray.stack([cols[p] for p in pivots], axis=0))
        self.inv = square.inverse()

    def __call__(self, m: QArray) -> QArray:
        flat = m.reshape((m.size,))
        sel = QArray.from_scalars([flat[p] for p in self.pivots], flat.d)
        coords = matmul(self.inv, sel)
        if not (matmul(self.cols, coords) - flat).is_zero():
            raise LieAlgebraError("matrix does not lie in the span of the basis")
        return coords


def matrix_coordinates(mats: Sequence[QArray]):
    """Callable returning coordinates of a matrix in the span of ``mats`` (exact, verified)."""
    return _Coordinates(mats)


def from_matrix_basis(
    mats: Sequence[QArray], labels: Sequence[str] | None = None
) -> LieAlgebraData:
    """Structure constants of a matrix Lie algebra from exact commutators."""
    coords = _Coordinates(mats)
    n = len(mats)
    consts = []
    for i in range(n):
        for j in range(i + 1, n):
            v = coords(commutator(mats[i], mats[j]))
            for k, s in enumerate(v.flat_scalars()):
                if s:
                    consts.append((i, j, k, s))
    d = common_field(*(m.d for m in mats))
    return LieAlgebraData(n, consts, labels, d=d)
