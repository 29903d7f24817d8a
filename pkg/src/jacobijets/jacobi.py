"""Symmetrized Jacobi jets and linear Jacobi relations.

A tensor in ``Sym^m (x) Sym^2`` is determined by its diagonal values
``T(xi, ..., xi; x, y)``, a matrix-valued homogeneous polynomial of degree
``m`` in ``xi``.  :class:`SymJet` stores exactly those polynomial
coefficients: ``coeffs[u, x, y]`` multiplies the monomial ``xi^alpha_u``.
This is the compressed storage for high valences (``Sym^7(R^6) (x) Sym^2``
has 792 * 36 coefficients instead of 6^9 dense entries), and every operation
we need has a direct polynomial meaning:

* metric inclusion  = multiplication by ``<xi, xi>``,
* the so(m) action  = minus the derivative along ``A xi`` plus the action on ``(x, y)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactalg import (
    NO_SOLUTION,
    QArray,
    Scalar,
    as_scalar,
    kernel,
    rank,
    tensordot,
)
from .homogeneous import InvariantViolation, ReductiveSpace
from .tensoralg import CovariantTensor, SkewEndo, random_vector, solve_flat_combination

__all__ = [
    "SymJet",
    "JacobiRelation",
    "ProbeResult",
    "sym_jet",
    "raw_sym_jet",
    "advance",
    "find_relation",
    "min_relation_order",
    "osculating_probe",
    "scale_invariant_signature",
    "matching_scale",
    "UnsupportedSignature",
    "NoRelationError",
]


# -- monomial bookkeeping ---------------------------------------------------------


@lru_cache(maxsize=None)
def monomials(n: int, m: int) -> np.ndarray:
    """Exponent vectors of degree ``m`` in ``n`` variables, one per row (deterministic order)."""
    rows = []
    for combo in itertools.combinations_with_replacement(range(n), m):
        e = [0] * n
        for i in combo:
            e[i] += 1
        rows.append(e)
    if not rows:
        rows = [[0] * n]
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def _codes(exps: np.ndarray, m: int) -> np.ndarray:
    base = m + 1
    weights = base ** np.arange(exps.shape[1], dtype=np.int64)
    return exps @ weights


@lru_cache(maxsize=None)
def _code_table(n: int, m: int):
    codes = _codes(monomials(n, m), m)
    order = np.argsort(codes)
    return codes[order], order


def monomial_index(exps: np.ndarray, m: int, n: int) -> np.ndarray:
    sorted_codes, order = _code_table(n, m)
    c = _codes(exps, m)
    pos = np.searchsorted(sorted_codes, c)
    return order[pos]


@lru_cache(maxsize=None)
def _tuple_to_monomial(n: int, m: int) -> np.ndarray:
    """Monomial index of every index tuple in ``range(n) ** m`` (row-major order)."""
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    idx = np.indices((n,) * m).reshape(m, -1)
    base = m + 1
    codes = np.zeros(idx.shape[1], dtype=np.int64)
    for s in range(m):
        codes += base ** idx[s]
    sorted_codes, order = _code_table(n, m)
    return order[np.searchsorted(sorted_codes, codes)]


def _index_map(q: QArray, src: np.ndarray, dst: np.ndarray, weight: np.ndarray, nout: int) -> QArray:
    """``out[dst[t]] += weight[t] * q[src[t]]`` along axis 0, exactly."""
    tail = q.shape[1:]
    parts = []
    for part in (q.a, q.b):
        if part is None:
            parts.append(None)
            continue
        w = weight.reshape((-1,) + (1,) * len(tail))
        bound = int(np.max(np.abs(part))) * int(np.max(np.abs(weight)) if weight.size else 0) * max(len(src), 1)
        if bound >= 2**62 or part.dtype == object:
            out = np.zeros((nout,) + tail, dtype=object)
            np.add.at(out, dst, part[src].astype(object) * w.astype(object))
        else:
            out = np.zeros((nout,) + tail, dtype=np.int64)
            np.add.at(out, dst, part[src] * w)
        parts.append(out)
    return QArray(parts[0], parts[1], q.den, q.d, (nout,) + tail).normalized()


@lru_cache(maxsize=None)
def _multiply_map(n: int, m: int, i: int, j: int):
    """Index map for multiplication by ``xi_i xi_j``: degree m -> m + 2."""
    src_exps = monomials(n, m)
    dst_exps = src_exps.copy()
    dst_exps[:, i] += 1
    dst_exps[:, j] += 1
    dst = monomial_index(dst_exps, m + 2, n)
    return np.arange(len(src_exps)), dst


@lru_cache(maxsize=None)
def _shift_map(n: int, m: int, i: int, j: int):
    """Index map for ``xi_j d/dxi_i``: degree m -> m with weight ``alpha_i``."""
    exps = monomials(n, m)
    src = np.nonzero(exps[:, i] > 0)[0]
    dst_exps = exps[src].copy()
    w = dst_exps[:, i].copy()
    dst_exps[:, i] -= 1
    dst_exps[:, j] += 1
    dst = monomial_index(dst_exps, m, n) if len(src) else np.zeros(0, dtype=np.int64)
    return src, dst, w


# -- SymJet --------------------------------------------------------------------------------


@dataclass
class SymJet:
    """Symmetrized k-th derivative of the curvature tensor, in Sym^{k+2} (x) Sym^2.

    ``coeffs[u, x, y]`` is the coefficient of ``monomials(n, k+2)[u]`` in the
    polynomial ``xi -> nabla^k_{xi..xi} R(e_x, xi, xi, e_y)``.  ``degree`` is the
    polynomial degree (``k + 2`` for an honest jet, larger after metric inclusion).
    """

    order: int
    dim: int
    degree: int
    coeffs: QArray

    def evaluate(self, xi: QArray) -> QArray:
        """Matrix ``T(xi, ..., xi; ., .)``."""
        vals = _monomial_values(xi, self.dim, self.degree)
        return tensordot(vals, self.coeffs, axes=([0], [0]))

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def embed(self, metric: QArray, times: int = 1) -> "SymJet":
        """Multiply the diagonal polynomial by ``<xi, xi>**times``."""
        out = self
        for _ in range(times):
            out = _times_quadratic(out, metric)
        return out

    def act(self, a: SkewEndo) -> "SymJet":
        """Derivation action of ``a`` on the underlying symmetric tensor."""
        return SymJet(self.order, self.dim, self.degree, _act_poly(self.coeffs, a.matrix, self.dim, self.degree))

    @property
    def tensor(self) -> CovariantTensor:
        """Dense tensor of valence ``degree + 2`` (only sensible for small sizes)."""
        n, m = self.dim, self.degree
        idx = _tuple_to_monomial(n, m)
        mult = _multinomials(n, m)
        c = self.coeffs
        dense = QArray(
            None if c.a is None else c.a[idx],
            None if c.b is None else c.b[idx],
            c.den,
            c.d,
            (len(idx), n, n),
        )
        # divide each row by its multinomial coefficient
        inv = QArray.from_scalars([Fraction(1, int(k)) for k in mult[idx]])
        scaled = _rowscale(dense, inv)
        return CovariantTensor(scaled.reshape((n,) * (m + 2)), n)


def _rowscale(q: QArray, w: QArray) -> QArray:
    ones = QArray.from_ints(np.ones(q.shape[1:], dtype=np.int64))
    return _hadamard(q, tensordot(w, ones, axes=0))


def _hadamard(x: QArray, y: QArray) -> QArray:
    d = x.d if x.d != 1 else y.d

    def mul(p, q):
        if p is None or q is None:
            return None
        return p.astype(object) * q.astype(object)

    aa, bb, ab, ba = mul(x.a, y.a), mul(x.b, y.b), mul(x.a, y.b), mul(x.b, y.a)

    def add(u, v, f=1):
        if u is None and v is None:
            return None
        if u is None:
            return v * f
        if v is None:
            return u
        return u + v * f

    return QArray(add(aa, bb, d), add(ab, ba), x.den * y.den, d, x.shape).normalized()


@lru_cache(maxsize=None)
def _multinomials(n: int, m: int) -> np.ndarray:
    exps = monomials(n, m)
    return np.array([math.factorial(m) // math.prod(math.factorial(int(e)) for e in row) for row in exps], dtype=object)


def _monomial_values(xi: QArray, n: int, m: int) -> QArray:
    scalars = xi.flat_scalars()
    vals = []
    for row in monomials(n, m):
        v = Scalar(1, 0, xi.d)
        for i, e in enumerate(row):
            if e:
                v = v * scalars[i] ** int(e)
        vals.append(v)
    return QArray.from_scalars(vals, xi.d)


def _times_quadratic(s: SymJet, metric: QArray) -> SymJet:
    n, m = s.dim, s.degree
    nout = len(monomials(n, m + 2))
    total = None
    for i in range(n):
        for j in range(i, n):
            gij = metric[i, j]
            if not gij:
                continue
            coef = gij if i == j else gij * 2
            src, dst = _multiply_map(n, m, i, j)
            term = _index_map(s.coeffs, src, dst, np.ones(len(src), dtype=np.int64), nout).scale(coef)
            total = term if total is None else total + term
    if total is None:
        total = QArray.zeros((nout, n, n), s.coeffs.d)
    return SymJet(s.order, n, m + 2, total)


def _act_poly(c: QArray, a: QArray, n: int, m: int) -> QArray:
    nmono = c.shape[0]
    total = None
    for i in range(n):
        for j in range(n):
            aij = a[i, j]
            if not aij:
                continue
            src, dst, w = _shift_map(n, m, i, j)
            if len(src) == 0:
                continue
            term = _index_map(c, src, dst, w, nmono).scale(aij)
            total = term if total is None else total + term
    # action on the (x, y) slots: (A^T P + P A)
    pa = tensordot(c, a, axes=([2], [0]))  # (u, x, y')
    atp = tensordot(c, a, axes=([1], [0])).transpose((0, 2, 1))
    xy = pa + atp
    total = xy if total is None else total + xy
    return -total


@lru_cache(maxsize=None)
def _raise_map(n: int, m: int, i: int, a: int, b: int):
    """Index map for ``xi_a xi_b d/dxi_i``: degree m -> m + 1 with weight ``alpha_i``."""
    exps = monomials(n, m)
    src = np.nonzero(exps[:, i] > 0)[0]
    dst_exps = exps[src].copy()
    w = dst_exps[:, i].copy()
    dst_exps[:, i] -= 1
    dst_exps[:, a] += 1
    dst_exps[:, b] += 1
    dst = monomial_index(dst_exps, m + 1, n) if len(src) else np.zeros(0, dtype=np.int64)
    return src, dst, w


@lru_cache(maxsize=None)
def _linear_map(n: int, m: int, a: int):
    """Index map for multiplication by ``xi_a``: degree m -> m + 1."""
    exps = monomials(n, m).copy()
    exps[:, a] += 1
    return np.arange(len(exps)), monomial_index(exps, m + 1, n)


def advance(sj: SymJet, lam: QArray) -> SymJet:
    """Next symmetrized jet straight from the polynomial form.

    With ``P(xi) = R^{k)}(xi..; ., .)`` and ``alpha`` the connection operator,
    ``R^{k+1)}(xi)`` is ``-dP(xi)[alpha(xi) xi] - P(alpha(xi) ., .) - P(., alpha(xi) .)``.
    """
    n, m = sj.dim, sj.degree
    c = sj.coeffs
    nout = len(monomials(n, m + 1))
    total = None

    def add(term):
        nonlocal total
        total = term if total is None else total + term

    # alpha(xi) xi has k-th coordinate sum_{a,b} lam[a, k, b] xi_a xi_b
    for i in range(n):
        for a in range(n):
            for b in range(a, n):
                coef = lam[a, i, b] if a == b else lam[a, i, b] + lam[b, i, a]
                if not coef:
                    continue
                src, dst, w = _raise_map(n, m, i, a, b)
                if len(src):
                    add(_index_map(c, src, dst, w, nout).scale(coef))
    for a in range(n):
        la = lam[a]  # (k, j): k-th coordinate of alpha(e_a) e_j
        if la.is_zero():
            continue
        px = tensordot(c, la, axes=([1], [0])).transpose((0, 2, 1))  # P(alpha_a x, y)
        both = px + px.transpose((0, 2, 1))
        src, dst = _linear_map(n, m, a)
        add(_index_map(both, src, dst, np.ones(len(src), dtype=np.int64), nout))
    if total is None:
        total = QArray.zeros((nout, n, n), c.d)
    return SymJet(sj.order + 1, n, m + 1, -total)


# raw jets of valence above this many entries are never formed for SymJets
RAW_JET_LIMIT = 2_000_000


def sym_jet(s: ReductiveSpace, k: int, verify: bool = True, samples: int = 5) -> SymJet:
    """``R^{k)}`` with ``R^{k)}(xi, ..., xi; x, y) = nabla^k_{xi..xi} R(x, xi, xi, y)``.

    Order 0 is read off the curvature tensor; higher orders follow the
    polynomial recursion :func:`advance`.  When the raw jet is small enough
    it is formed as well and the diagonal identity is checked.
    """
    key = ("symjet", k)
    if key in s._cache:
        return s._cache[key]
    if k > 0:
        sj = advance(sym_jet(s, k - 1, verify, samples), s.nomizu())
        if not (sj.coeffs - sj.coeffs.transpose((0, 2, 1))).is_zero():
            raise InvariantViolation(f"symmetrized jet of order {k} is not symmetric in (x, y)")
        if verify and s.n ** (k + 4) <= RAW_JET_LIMIT and not diagonal_identity_holds(s, sj, samples=samples):
            raise InvariantViolation(f"diagonal identity failed for order {k}")
        s._cache[key] = sj
        return sj
    return raw_sym_jet(s, k, verify, samples)


def raw_sym_jet(s: ReductiveSpace, k: int, verify: bool = True, samples: int = 5) -> SymJet:
    """``R^{k)}`` by symmetrizing the dense jet ``nabla^k R`` (valence ``k + 4``)."""
    key = ("symjet", k) if k == 0 else ("rawsymjet", k)
    if key in s._cache:
        return s._cache[key]
    n = s.n
    t = s.jet_tensor(k).data  # (d_1..d_k, x, a, b, y)
    order = list(range(k)) + [k + 1, k + 2, k, k + 3]
    t = t.transpose(tuple(order)).reshape((n ** (k + 2), n, n))
    idx = _tuple_to_monomial(n, k + 2)
    nmono = len(monomials(n, k + 2))
    coeffs = _index_map(t, np.arange(len(idx)), idx, np.ones(len(idx), dtype=np.int64), nmono)
    sj = SymJet(k, n, k + 2, coeffs)
    if not (coeffs - coeffs.transpose((0, 2, 1))).is_zero():
        raise InvariantViolation(f"symmetrized jet of order {k} is not symmetric in (x, y)")
    if verify and not diagonal_identity_holds(s, sj, samples=samples):
        raise InvariantViolation(f"diagonal identity failed for order {k}")
    s._cache[key] = sj
    return sj


def diagonal_identity_holds(s: ReductiveSpace, sj: SymJet, samples: int = 5, seed: int = 7) -> bool:
    """Compare ``R^{k)}(xi..; x, y)`` with the raw jet evaluated on ``(xi.., x, xi, xi, y)``."""
    rng = np.random.default_rng(seed)
    k = sj.order
    raw = s.jet_tensor(k)
    for _ in range(samples):
        xi = random_vector(rng, s.n)
        x = random_vector(rng, s.n)
        y = random_vector(rng, s.n)
        lhs = tensordot(tensordot(sj.evaluate(xi), x, axes=([0], [0])), y, axes=([0], [0])).to_scalars()
        rhs = raw.evaluate(*([xi] * k + [x, xi, xi, y]))
        if lhs != rhs:
            return False
    return True


# -- relations ------------------------------------------------------------------------


@dataclass
class JacobiRelation:
    """``R^{k+1)} = sum_j c_j <xi, xi>^{(k+1-j)/2} R^{j)}`` over ``j = k-1, k-3, ...``."""

    order: int
    coefficients: dict[int, Scalar] = field(default_factory=dict)
    minimal: bool = True

    def as_equation(self) -> str:
        terms = [f"R^({self.order + 1})"]
        for j, c in sorted(self.coefficients.items(), reverse=True):
            p = (self.order + 1 - j) // 2
            terms.append(f"({c})*g^{p}*R^({j})")
        return terms[0] + " = " + (" + ".join(terms[1:]) if len(terms) > 1 else "0")


class NoRelationError(ValueError):
    pass


def _lower_orders(k: int) -> list[int]:
    return list(range(k - 1, -1, -2))


def embedded_basis(s: ReductiveSpace, k: int) -> list[SymJet]:
    """``<xi, xi>^p R^{j)}`` for ``j = k-1, k-3, ...``, all of degree ``k + 3``."""
    out = []
    for j in _lower_orders(k):
        out.append(sym_jet(s, j).embed(s.metric, (k + 1 - j) // 2))
    return out


def find_relation(s: ReductiveSpace, k: int) -> JacobiRelation | None:
    """Linear Jacobi relation of order ``k`` with exact coefficients, or ``None``."""
    if k < 0:
        raise ValueError("order must be non-negative")
    target = sym_jet(s, k + 1)
    basis = embedded_basis(s, k)
    res = solve_flat_combination(target.coeffs, [b.coeffs for b in basis])
    if res is NO_SOLUTION:
        return None
    coeffs, unique = res
    rel = JacobiRelation(k, dict(zip(_lower_orders(k), coeffs)), minimal=unique)
    if not verify_relation(s, rel):
        raise InvariantViolation("relation failed re-verification")
    return rel


def verify_relation(s: ReductiveSpace, rel: JacobiRelation) -> bool:
    k = rel.order
    lhs = sym_jet(s, k + 1).coeffs
    rhs = QArray.zeros(lhs.shape, lhs.d)
    for j, c in rel.coefficients.items():
        rhs = rhs + sym_jet(s, j).embed(s.metric, (k + 1 - j) // 2).coeffs.scale(c)
    return (lhs - rhs).is_zero()


def min_relation_order(s: ReductiveSpace, k_max: int) -> tuple[int, JacobiRelation] | None:
    """Smallest ``k <= k_max`` admitting a linear Jacobi relation."""
    for k in range(k_max + 1):
        rel = find_relation(s, k)
        if rel is not None:
            return k, rel
    return None


# -- osculating probe --------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    independent: bool
    witness: tuple[Scalar, ...] | None = None
    samples_tried: int = 0

    def __str__(self) -> str:
        return "independent" if self.independent else "dependent-for-all-samples"


def sphere_point(t: Sequence[Fraction]) -> list[Fraction]:
    """Rational point on the unit sphere in R^{len(t)+1} by inverse stereographic projection."""
    s2 = sum(x * x for x in t)
    den = s2 + 1
    return [2 * x / den for x in t] + [(s2 - 1) / den]


def osculating_probe(s: ReductiveSpace, k: int, samples: int = 8, seed: int = 11) -> ProbeResult:
    """Search for a direction where ``<xi,xi>^i R^{k-1-2i)}(xi..; ., .)`` are independent.

    For ``k = 0`` the family is empty and the probe reports dependence.
    """
    if find_relation(s, k) is None:
        raise NoRelationError(f"no linear Jacobi relation of order {k}")
    orders = _lower_orders(k)
    if not orders:
        return ProbeResult(False, None, 0)
    jets = [sym_jet(s, j) for j in orders]
    rng = np.random.default_rng(seed)
    g = s.metric
    for trial in range(samples):
        t = [Fraction(int(p), int(q)) for p, q in zip(rng.integers(-4, 5, s.n - 1), rng.integers(1, 4, s.n - 1))]
        xi = QArray.from_scalars(sphere_point(t))
        norm2 = tensordot(tensordot(g, xi, axes=([1], [0])), xi, axes=([0], [0])).to_scalars()
        mats = []
        for i, sj in enumerate(jets):
            mats.append(sj.evaluate(xi).scale(norm2 ** i).reshape((s.n * s.n,)))
        stacked = QArray.stack(mats, axis=1)
        if rank(stacked) == len(mats):
            return ProbeResult(True, tuple(xi.flat_scalars()), trial + 1)
    return ProbeResult(False, None, samples)


# -- scaling-robust signature ----------------------------------------------------------


class UnsupportedSignature(ValueError):
    pass


def exact_sqrt(x: Scalar) -> Scalar | None:
    """Square root inside Q(sqrt d) (d taken from ``x``, or the new field if x is rational)."""
    if x.sign() < 0:
        return None
    if not x:
        return Scalar(0, 0, x.d)
    if x.b == 0:
        r = _rat_sqrt(x.a)
        if r is not None:
            return Scalar(r, 0, x.d)
        # x = q^2 * d' for the squarefree part d'
        num, den = x.a.numerator * x.a.denominator, x.a.denominator**2
        sf = _squarefree_part(num)
        q = _rat_sqrt(Fraction(num, sf * den))
        if q is None:
            return None
        if x.d != 1 and sf != x.d:
            return None
        return Scalar(0, q, sf)
    # (p + q sqrt d)^2 = a + b sqrt d: p^2 + d q^2 = a, 2 p q = b
    nrm = _rat_sqrt(x.norm())
    if nrm is None:
        return None
    for p2 in ((x.a + nrm) / 2, (x.a - nrm) / 2):
        p = _rat_sqrt(p2)
        if p:
            q = x.b / (2 * p)
            cand = Scalar(p, q, x.d)
            if cand * cand == x:
                return cand if cand.sign() > 0 else -cand
    return None


def _rat_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _squarefree_part(n: int) -> int:
    out, k = 1, 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
        if n % k == 0:
            out *= k
            n //= k
        k += 1
    return out * n


def scale_invariant_signature(rel: JacobiRelation) -> Scalar:
    """Ratio (normalized to modulus >= 1) of the roots of ``x^2 - c3 x - c1``.

    Under ``g -> lambda g`` both roots scale by ``1/lambda``, so the ratio is a
    metric-scale invariant of an order-4 relation.
    """
    if rel.order != 4:
        raise UnsupportedSignature("signature is defined for order-4 relations")
    c3 = as_scalar(rel.coefficients.get(3, 0))
    c1 = as_scalar(rel.coefficients.get(1, 0))
    disc = c3 * c3 + c1 * 4
    root = exact_sqrt(disc)
    if root is None:
        raise UnsupportedSignature(f"discriminant {disc} has no square root in the field")
    r1 = (c3 + root) / 2
    r2 = (c3 - root) / 2
    if not r1 or not r2:
        raise UnsupportedSignature("zero root")
    ratio = r1 / r2
    if (ratio * ratio - 1).sign() < 0:
        ratio = r2 / r1
    return ratio


def matching_scale(rel: JacobiRelation, expected: dict[int, Fraction]) -> Fraction | None:
    """Rational ``lambda > 0`` such that the relation of ``lambda g`` has the expected coefficients.

    Under ``g -> lambda g`` the coefficient ``c_j`` picks up ``lambda^{-p}`` with
    ``p = (k+1-j)/2``; returns ``None`` when no positive rational works.
    """
    if set(expected) - set(_lower_orders(rel.order)):
        return None
    found = {j: as_scalar(rel.coefficients.get(j, 0)) for j in _lower_orders(rel.order)}
    want = {j: as_scalar(expected.get(j, 0)) for j in found}
    lam = None
    for j in sorted(found, reverse=True):
        c, e = found[j], want[j]
        if not c or not e:
            if c or e:
                return None
            continue
        ratio = c / e  # lambda^p
        if ratio.b != 0 or ratio.sign() <= 0:
            return None
        p = (rel.order + 1 - j) // 2
        root = _rat_root(ratio.a, p)
        if root is None or (lam is not None and root != lam):
            return None
        lam = root
    return lam if lam is not None else Fraction(1)


def _rat_root(q: Fraction, p: int) -> Fraction | None:
    def iroot(n: int) -> int | None:
        r = round(n ** (1 / p))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**p == n:
                return c
        return None

    n, d = iroot(q.numerator), iroot(q.denominator)
    return None if n is None or d is None else Fraction(n, d)
