"""Exact arithmetic in a real quadratic field Q(sqrt d) and dense exact linear algebra.

Two representations live here:

* :class:`Scalar` -- a single field element ``a + b*sqrt(d)`` with rational parts.
* :class:`QArray` -- a dense n-dimensional array over the same field, stored as
  integer numerator arrays ``(a + b*sqrt(d)) / den`` sharing one positive
  denominator.  This is what the tensor code runs on; integer numpy kernels do
  the heavy lifting and fall back to Python ``int`` objects whenever an int64
  overflow cannot be ruled out beforehand.

Kernels and linear solves use fraction-free (Bareiss) elimination over
``Z[sqrt d]``.  Tall systems are first compressed by random integer row
combinations and the result is then re-verified against every original row,
so the answer is exact regardless of the random draw.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldMismatchError",
    "Scalar",
    "QArray",
    "ExactMatrix",
    "NoSolution",
    "NO_SOLUTION",
    "as_scalar",
    "common_field",
    "kernel",
    "rank",
    "solve_linear",
    "parse_scalar",
    "render_scalar",
]

_INT64_SAFE = 2**62


class FieldMismatchError(ValueError):
    """Raised when elements of Q(sqrt d1) and Q(sqrt d2), d1 != d2 > 1, are combined."""


def _is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _join(d1: int, d2: int) -> int:
    if d1 == d2 or d2 == 1:
        return d1
    if d1 == 1:
        return d2
    raise FieldMismatchError(f"cannot combine Q(sqrt {d1}) with Q(sqrt {d2})")


def common_field(*ds: int) -> int:
    return reduce(_join, ds, 1)


class Scalar:
    """Element ``a + b*sqrt(d)`` of Q(sqrt d).

    ``d == 1`` is plain Q; the irrational part is folded into ``a`` there.
    Instances are immutable and hashable.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if d != 1 and not _is_squarefree(d):
            raise ValueError(f"field discriminant must be squarefree and >= 1, got {d}")
        if d == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- coercion -----------------------------------------------------------
    def _other(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self.d)
        return None

    def __repr__(self) -> str:
        if self.d == 1:
            return f"Scalar({self.a})"
        return f"Scalar({self.a}, {self.b}, d={self.d})"

    def __str__(self) -> str:
        return render_scalar(self)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b, _join(self.d, o.d))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a - o.a, self.b - o.b, _join(self.d, o.d))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = _join(self.d, o.d)
        return Scalar(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d b^2``; zero only for the zero element."""
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.d)

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return Scalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        _join(self.d, o.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if (self.b or o.b) and self.d != o.d:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt(d)``, decided exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def is_rational(self) -> bool:
        return self.b == 0


def as_scalar(x, d: int = 1) -> Scalar:
    if isinstance(x, Scalar):
        _join(x.d, d)
        return x if x.d >= d else Scalar(x.a, x.b, d)
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x, 0, d)


# -- textual format -----------------------------------------------------------

_RAT = r"(-?\d+)(?:/(\d+))?"
_SCALAR_RE = re.compile(rf"^\s*{_RAT}\s*(?:([+-])\s*{_RAT}\s*\*\s*sqrt\(\s*(\d+)\s*\))?\s*$")


def _render_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_scalar(s: Scalar) -> str:
    """Render as ``p/q`` or ``p/q+r/s*sqrt(d)``."""
    if s.b == 0:
        return _render_rational(s.a)
    sign = "+" if s.b > 0 else "-"
    return f"{_render_rational(s.a)}{sign}{_render_rational(abs(s.b))}*sqrt({s.d})"


def parse_scalar(text: str) -> Scalar:
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"not a scalar: {text!r}")
    p, q, sign, r, s, d = m.groups()
    if q is not None and int(q) == 0 or s is not None and int(s) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    a = Fraction(int(p), int(q or 1))
    if sign is None:
        return Scalar(a)
    b = Fraction(int(r), int(s or 1))
    if sign == "-":
        b = -b
    d = int(d)
    if d == 0 or not _is_squarefree(d):
        raise ValueError(f"sqrt argument must be a squarefree positive integer in {text!r}")
    return Scalar(a, b, d)


# -- integer array helpers ----------------------------------------------------


def _maxabs(x) -> int:
    if x is None or x.size == 0:
        return 0
    return int(np.max(np.abs(x)))


def _to_obj(x):
    return x if x is None or x.dtype == object else x.astype(object)


def _shrink(x):
    """Use int64 storage when every entry fits comfortably."""
    if x is None or x.dtype != object:
        return x
    if _maxabs(x) < _INT64_SAFE:
        return x.astype(np.int64)
    return x


def _int_array(values, shape) -> np.ndarray:
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    return _shrink(arr.reshape(shape))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _gcd_array(x) -> int:
    if x is None or x.size == 0:
        return 0
    g = np.gcd.reduce(np.abs(np.asarray(x)).ravel())
    return int(g)


class QArray:
    """Dense array over Q(sqrt d): value ``(a + b*sqrt(d)) / den``.

    ``a`` and ``b`` are integer numpy arrays (int64 or object); either may be
    ``None`` to mean identically zero.  Instances are treated as immutable.
    """

    __slots__ = ("a", "b", "den", "d", "shape")

    def __init__(self, a, b, den: int = 1, d: int = 1, shape=None):
        if a is None and b is None:
            if shape is None:
                raise ValueError("shape required for a zero QArray")
        shape = tuple(shape) if shape is not None else (a if a is not None else b).shape
        if d == 1 and b is not None:
            a = b if a is None else _add_int(a, b)
            b = None
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.a = a
        self.b = b
        self.den = int(den)
        self.d = d
        self.shape = shape

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, shape, d: int = 1) -> "QArray":
        return cls(None, None, 1, d, shape)

    @classmethod
    def from_ints(cls, arr, den: int = 1, d: int = 1) -> "QArray":
        arr = np.asarray(arr)
        if arr.dtype != object:
            arr = arr.astype(np.int64)
        return cls(_shrink(arr), None, den, d).normalized()

    @classmethod
    def from_scalars(cls, values, d: int | None = None) -> "QArray":
        """Build from a nested sequence of Scalars, ints, Fractions or scalar strings."""
        arr = np.asarray(values, dtype=object)
        flat = [as_scalar(v) for v in arr.ravel()]
        shape = arr.shape
        dd = common_field(*(s.d for s in flat), d or 1)
        den = 1
        for s in flat:
            den = _lcm(den, _lcm(s.a.denominator, s.b.denominator))
        a_vals = [int(s.a * den) for s in flat]
        b_vals = [int(s.b * den) for s in flat]
        a = _int_array(a_vals, shape) if any(a_vals) else None
        b = _int_array(b_vals, shape) if any(b_vals) else None
        return cls(a, b, den, dd, shape).normalized()

    @classmethod
    def identity(cls, n: int, d: int = 1) -> "QArray":
        return cls(np.eye(n, dtype=np.int64), None, 1, d)

    @classmethod
    def stack(cls, arrays: Sequence["QArray"], axis: int = 0) -> "QArray":
        arrays = list(arrays)
        d = common_field(*(x.d for x in arrays))
        den = reduce(_lcm, (x.den for x in arrays), 1)
        parts_a, parts_b = [], []
        any_a = any(x.a is not None for x in arrays)
        any_b = any(x.b is not None for x in arrays)
        for x in arrays:
            f = den // x.den
            if any_a:
                parts_a.append(_scale_int(x.a, f, x.shape))
            if any_b:
                parts_b.append(_scale_int(x.b, f, x.shape))
        a = _stack_ints(parts_a, axis) if any_a else None
        b = _stack_ints(parts_b, axis) if any_b else None
        shape = list(arrays[0].shape)
        shape.insert(axis if axis >= 0 else len(shape) + 1 + axis, len(arrays))
        return cls(a, b, den, d, shape).normalized()

    # -- basic protocol ---------------------------------------------------------
    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64)) if self.shape else 1

    def __repr__(self) -> str:
        return f"QArray(shape={self.shape}, d={self.d}, den={self.den})"

    def _part(self, which):
        x = self.a if which == "a" else self.b
        return np.zeros(self.shape, dtype=np.int64) if x is None else x

    def __getitem__(self, idx):
        a = None if self.a is None else self.a[idx]
        b = None if self.b is None else self.b[idx]
        probe = np.empty(self.shape, dtype=np.int8)[idx]
        if np.ndim(probe) == 0:
            av = 0 if a is None else int(a)
            bv = 0 if b is None else int(b)
            return Scalar(Fraction(av, self.den), Fraction(bv, self.den), self.d)
        return QArray(a, b, self.den, self.d, probe.shape).normalized()

    def to_scalars(self):
        """Nested lists of Scalars (a bare Scalar for 0-d arrays)."""
        a = self._part("a").ravel().tolist()
        b = self._part("b").ravel().tolist()
        flat = [Scalar(Fraction(int(x), self.den), Fraction(int(y), self.den), self.d) for x, y in zip(a, b)]
        if not self.shape:
            return flat[0]
        return np.array(flat, dtype=object).reshape(self.shape).tolist()

    def flat_scalars(self) -> list[Scalar]:
        a = self._part("a").ravel().tolist()
        b = self._part("b").ravel().tolist()
        return [Scalar(Fraction(int(x), self.den), Fraction(int(y), self.den), self.d) for x, y in zip(a, b)]

    def is_zero(self) -> bool:
        return (self.a is None or not np.any(self.a)) and (self.b is None or not np.any(self.b))

    def __eq__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        if self.shape != other.shape:
            return False
        try:
            return (self - other).is_zero()
        except FieldMismatchError:
            return False

    __hash__ = None

    # -- structure ---------------------------------------------------------
    def _map(self, fn, shape=None) -> "QArray":
        a = None if self.a is None else fn(self.a)
        b = None if self.b is None else fn(self.b)
        if shape is None:
            shape = fn(np.empty(self.shape, dtype=np.int8)).shape
        return QArray(a, b, self.den, self.d, shape)

    def transpose(self, axes=None) -> "QArray":
        return self._map(lambda x: np.ascontiguousarray(np.transpose(x, axes)))

    def reshape(self, *shape) -> "QArray":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return self._map(lambda x: x.reshape(shape))

    def moveaxis(self, src, dst) -> "QArray":
        return self._map(lambda x: np.ascontiguousarray(np.moveaxis(x, src, dst)))

    # -- arithmetic ---------------------------------------------------------
    def with_field(self, d: int) -> "QArray":
        d = _join(self.d, d)
        return self if d == self.d else QArray(self.a, self.b, self.den, d, self.shape)

    def __neg__(self):
        return QArray(
            None if self.a is None else -self.a,
            None if self.b is None else -self.b,
            self.den,
            self.d,
            self.shape,
        )

    def __add__(self, other: "QArray") -> "QArray":
        if not isinstance(other, QArray):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        d = _join(self.d, other.d)
        den = _lcm(self.den, other.den)
        fs, fo = den // self.den, den // other.den
        a = _lin2(self.a, fs, other.a, fo)
        b = _lin2(self.b, fs, other.b, fo)
        return QArray(a, b, den, d, self.shape).normalized()

    def __sub__(self, other: "QArray") -> "QArray":
        if not isinstance(other, QArray):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "QArray":
        """Multiply every entry by the field element ``s``."""
        s = as_scalar(s)
        d = _join(self.d, s.d)
        den_s = _lcm(s.a.denominator, s.b.denominator)
        sa, sb = int(s.a * den_s), int(s.b * den_s)
        # (a + b r)(sa + sb r) = (a sa + d b sb) + (a sb + b sa) r
        a = _lin2(self.a, sa, self.b, d * sb)
        b = _lin2(self.a, sb, self.b, sa)
        return QArray(a, b, self.den * den_s, d, self.shape).normalized()

    def __mul__(self, s):
        if isinstance(s, QArray):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def normalized(self) -> "QArray":
        g = math.gcd(self.den, _gcd_array(self.a), _gcd_array(self.b))
        a = self.a if self.a is None or np.any(self.a) else None
        b = self.b if self.b is None or np.any(self.b) else None
        if a is None and b is None:
            return QArray(None, None, 1, self.d, self.shape)
        if g > 1:
            a = None if a is None else _shrink(a // g)
            b = None if b is None else _shrink(b // g)
            return QArray(a, b, self.den // g, self.d, self.shape)
        return QArray(_shrink(a), _shrink(b), self.den, self.d, self.shape)


def _scale_int(x, f: int, shape):
    if x is None:
        return np.zeros(shape, dtype=np.int64)
    if f == 1:
        return x
    if _maxabs(x) * abs(f) >= _INT64_SAFE:
        return _to_obj(x) * f
    return x * f


def _stack_ints(parts, axis):
    if any(p.dtype == object for p in parts):
        parts = [_to_obj(p) for p in parts]
    return np.stack(parts, axis=axis)


def _add_int(x, y):
    if _maxabs(x) + _maxabs(y) >= _INT64_SAFE:
        return _to_obj(x) + _to_obj(y)
    return x + y


def _lin2(x, fx: int, y, fy: int):
    """Integer combination ``x*fx + y*fy`` (None means zero)."""
    terms = []
    bound = 0
    if x is not None and fx:
        terms.append((x, fx))
        bound += _maxabs(x) * abs(fx)
    if y is not None and fy:
        terms.append((y, fy))
        bound += _maxabs(y) * abs(fy)
    if not terms:
        return None
    big = bound >= _INT64_SAFE
    out = None
    for arr, f in terms:
        arr = _to_obj(arr) if big else arr
        t = arr if f == 1 else arr * f
        out = t if out is None else out + t
    return out


def _tdot(x, y, axes):
    if x is None or y is None:
        return None
    k = 1
    if isinstance(axes, int):
        ax_x = range(x.ndim - axes, x.ndim)
    else:
        ax_x = axes[0] if isinstance(axes[0], (list, tuple)) else [axes[0]]
    for ax in ax_x:
        k *= x.shape[ax]
    if _maxabs(x) * _maxabs(y) * max(k, 1) >= _INT64_SAFE:
        x, y = _to_obj(x), _to_obj(y)
    return np.asarray(np.tensordot(x, y, axes=axes))


def tensordot(x: QArray, y: QArray, axes) -> QArray:
    """Exact ``np.tensordot`` over Q(sqrt d)."""
    d = _join(x.d, y.d)
    aa = _tdot(x.a, y.a, axes)
    bb = _tdot(x.b, y.b, axes)
    ab = _tdot(x.a, y.b, axes)
    ba = _tdot(x.b, y.a, axes)
    shape = np.tensordot(np.zeros(x.shape, np.int8), np.zeros(y.shape, np.int8), axes=axes).shape
    a = _lin2(aa, 1, bb, d)
    b = _lin2(ab, 1, ba, 1)
    return QArray(a, b, x.den * y.den, d, shape).normalized()


def matmul(x: QArray, y: QArray) -> QArray:
    return tensordot(x, y, axes=([x.ndim - 1], [0]))


# -- matrices and linear algebra ----------------------------------------------


class ExactMatrix(QArray):
    """A two-dimensional :class:`QArray`."""

    __slots__ = ()

    def __init__(self, a, b, den=1, d=1, shape=None):
        super().__init__(a, b, den, d, shape)
        if len(self.shape) != 2:
            raise ValueError(f"ExactMatrix needs 2 dimensions, got shape {self.shape}")

    @classmethod
    def of(cls, q: QArray) -> "ExactMatrix":
        return cls(q.a, q.b, q.den, q.d, q.shape)

    @classmethod
    def from_rows(cls, rows, d: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("empty matrix; use ExactMatrix.zeros")
        return cls.of(QArray.from_scalars(rows, d))

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def rows_scalars(self) -> list[list[Scalar]]:
        return self.to_scalars()

    def __matmul__(self, other):
        if isinstance(other, QArray):
            out = matmul(self, other)
            return ExactMatrix.of(out) if out.ndim == 2 else out
        return NotImplemented

    def T(self) -> "ExactMatrix":
        return ExactMatrix.of(self.transpose())

    def determinant(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        pairs, _ = _int_pairs(self)
        ech, pivots, sign = _bareiss(pairs, self.d, self.cols)
        if len(pivots) < self.rows:
            return Scalar(0, 0, self.d)
        p, q = ech[self.rows - 1][self.cols - 1]
        det = Scalar(p, q, self.d) * sign
        return det / Scalar(self.den, 0, self.d) ** self.rows

    def inverse(self) -> "ExactMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        cols = []
        for j in range(n):
            e = QArray.from_ints(np.eye(n, dtype=np.int64)[:, j], d=self.d)
            res = solve_linear(self, e)
            if res is NO_SOLUTION or res[1]:
                raise ZeroDivisionError("matrix is singular")
            cols.append(res[0])
        return ExactMatrix.of(QArray.stack(cols, axis=1))


def _int_pairs(m: QArray):
    """Rows of integer pairs (p, q) with m = (p + q sqrt d) / den."""
    a = m._part("a").tolist()
    b = m._part("b").tolist()
    rows = [[(int(x), int(y)) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return rows, m.den


def _pmul(x, y, d):
    return (x[0] * y[0] + d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _pdiv_exact(x, y, d):
    n = y[0] * y[0] - d * y[1] * y[1]
    p = x[0] * y[0] - d * x[1] * y[1]
    q = x[1] * y[0] - x[0] * y[1]
    if p % n or q % n:
        raise ArithmeticError("inexact Bareiss division (internal error)")
    return (p // n, q // n)


def _bareiss(rows, d: int, ncols: int):
    """Fraction-free row echelon form over Z[sqrt d].

    Returns the echelon rows, the pivot column list and the sign of the row
    permutation.  Entries of the echelon form are minors of the input, so every
    division is exact.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    prev = (1, 0)
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != (0, 0)), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        pr = m[r]
        p = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f == (0, 0):
                if prev != (1, 0) or p != (1, 0):
                    for j in range(c + 1, ncols):
                        row[j] = _pdiv_exact(_pmul(p, row[j], d), prev, d)
            else:
                for j in range(c + 1, ncols):
                    t = _pmul(p, row[j], d)
                    u = _pmul(f, pr[j], d)
                    row[j] = _pdiv_exact((t[0] - u[0], t[1] - u[1]), prev, d)
            row[c] = (0, 0)
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots, sign


def _echelon_kernel(rows, d: int, ncols: int) -> list[list[Scalar]]:
    ech, pivots, _ = _bareiss(rows, d, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x: list[Scalar] = [Scalar(0, 0, d)] * ncols
        x[f] = Scalar(1, 0, d)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = Scalar(0, 0, d)
            for j in range(c + 1, ncols):
                if x[j] and ech[r][j] != (0, 0):
                    s = s + Scalar(*ech[r][j], d) * x[j]
            x[c] = -s / Scalar(*ech[r][c], d)
        basis.append(x)
    return basis


def _compress(m: QArray, nrows: int, seed: int) -> QArray:
    """Random integer row combinations: ``R @ m`` with small entries in R."""
    rng = np.random.default_rng(seed)
    r = rng.integers(-3, 4, size=(nrows, m.shape[0])).astype(np.int64)
    return matmul(QArray(r, None, 1, m.d), m)


def _dedupe_rows(m: QArray) -> QArray:
    """Drop zero rows and exact duplicates; the row space is unchanged."""
    a = m._part("a")
    b = m._part("b")
    both = np.concatenate([a, b], axis=1) if m.b is not None else a
    keep = np.any(both != 0, axis=1)
    both = both[keep]
    if both.shape[0] == 0:
        return QArray.zeros((0, m.shape[1]), m.d)
    if both.dtype != object:
        both = np.unique(both, axis=0)
    n = m.shape[1]
    a2 = both[:, :n]
    b2 = both[:, n:] if m.b is not None else None
    return QArray(a2, b2, m.den, m.d, (both.shape[0], n))


_SMALL_ROWS = 64


def kernel(m: QArray) -> list[QArray]:
    """Exact basis of the right nullspace of ``m``.

    Returns a list of 1-d QArrays; each one is checked to satisfy ``m @ v = 0``.
    """
    if m.ndim != 2:
        raise ValueError("kernel expects a matrix")
    ncols = m.shape[1]
    work = _dedupe_rows(m)
    attempt = 0
    while True:
        if work.shape[0] <= max(_SMALL_ROWS, 2 * ncols):
            small = work
        else:
            small = _compress(work, ncols + 8 + 8 * attempt, seed=1234 + attempt)
        rows, _ = _int_pairs(small) if small.shape[0] else ([], 1)
        basis = _echelon_kernel(rows, m.d, ncols)
        vecs = [QArray.from_scalars(v, m.d) for v in basis]
        if not vecs:
            return []
        check = matmul(work, QArray.stack(vecs, axis=1))
        if check.is_zero():
            return vecs
        if small is work:
            raise ArithmeticError("kernel verification failed (internal error)")
        attempt += 1


def rank(m: QArray) -> int:
    return m.shape[1] - len(kernel(m))


class NoSolution:
    """Marker returned when a linear system is inconsistent."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NO_SOLUTION"

    def __bool__(self):
        return False


NO_SOLUTION = NoSolution()


def solve_linear(a: QArray, b: QArray):
    """Solve ``a @ x = b`` exactly.

    Returns ``(x, kernel_basis)`` for one particular solution ``x`` (free
    variables set to zero) or :data:`NO_SOLUTION`.
    """
    if a.ndim != 2 or b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    n = a.shape[1]
    aug = QArray.stack([a.transpose()[j] for j in range(n)] + [-b], axis=1)
    basis = kernel(aug)
    # solutions correspond to kernel vectors with a nonzero last coordinate
    sol = None
    homog = []
    for v in basis:
        last = v[n]
        if sol is None and last:
            sol = v.scale(last.inverse())
        else:
            homog.append(v)
    if sol is None:
        return NO_SOLUTION
    hk = []
    for v in homog:
        last = v[n]
        if last:
            v = v - sol.scale(last)
        hk.append(v[:n])
    x = sol[:n]
    if not (matmul(a, x) - b).is_zero():
        raise ArithmeticError("solution verification failed (internal error)")
    return x, hk


def vectors_span_equal(u: Sequence[QArray], v: Sequence[QArray]) -> bool:
    """Equality of spans via dimension plus containment."""
    ru = _span_rank(u)
    rv = _span_rank(v)
    if ru != rv:
        return False
    return _span_rank(list(u) + list(v)) == ru


def _span_rank(vs: Sequence[QArray]) -> int:
    vs = list(vs)
    if not vs:
        return 0
    return rank(QArray.stack(vs, axis=1))


def in_span(x: QArray, vs: Iterable[QArray]) -> bool:
    vs = list(vs)
    return _span_rank(vs + [x]) == _span_rank(vs)
