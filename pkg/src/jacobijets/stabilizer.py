"""Stabilizer chain g(0) >= g(1) >= ... of the curvature jet and the Singer invariant."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import QArray, kernel, vectors_span_equal, _span_rank
from .homogeneous import InvariantViolation, ReductiveSpace, ReductiveSpaceError
from .jacobi import sym_jet
from .tensoralg import SkewEndo, so_action

__all__ = [
    "StabilizerChain",
    "ChainEntry",
    "so_basis",
    "g_k",
    "g_k_symmetrized",
    "singer_invariant",
    "isotropy_image",
    "span_equal",
    "span_contains",
    "is_subalgebra",
]


def so_basis(metric: QArray) -> list[SkewEndo]:
    """Basis ``g^{-1}(e_ab - e_ba)``, ``a < b``, of the metric's orthogonal Lie algebra."""
    from .exactalg import ExactMatrix

    n = metric.shape[0]
    try:
        ginv = ExactMatrix.of(metric).inverse()
    except ZeroDivisionError:
        raise ValueError("metric is degenerate") from None
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            rows = [[0] * n for _ in range(n)]
            rows[a][b] = 1
            rows[b][a] = -1
            skew = QArray.from_scalars(rows, metric.d)
            out.append(SkewEndo(ginv @ skew, metric))
    return out


def _flat(e: SkewEndo) -> QArray:
    return e.matrix.reshape((e.dim * e.dim,))


def span_equal(u: list[SkewEndo], v: list[SkewEndo]) -> bool:
    return vectors_span_equal([_flat(e) for e in u], [_flat(e) for e in v])


def span_contains(big: list[SkewEndo], small: list[SkewEndo]) -> bool:
    fb = [_flat(e) for e in big]
    return _span_rank(fb + [_flat(e) for e in small]) == _span_rank(fb)


def is_subalgebra(basis: list[SkewEndo]) -> bool:
    """Brackets of basis elements stay in the span (exact membership)."""
    brackets = [x.bracket(y) for i, x in enumerate(basis) for y in basis[i + 1:]]
    return span_contains(basis, brackets)


def _restrict(basis: list[SkewEndo], images: list[QArray]) -> list[SkewEndo]:
    """Combinations of ``basis`` whose images (linear in the element) all vanish."""
    if not basis:
        return []
    cols = QArray.stack([im.reshape((im.size,)) for im in images], axis=1)
    ker = kernel(cols)
    out = []
    for v in ker:
        m = None
        for coef, e in zip(v.flat_scalars(), basis):
            if coef:
                term = e.matrix.scale(coef)
                m = term if m is None else m + term
        out.append(SkewEndo(m))
    return out


def _annihilators(basis: list[SkewEndo], tensor) -> list[SkewEndo]:
    return _restrict(basis, [so_action(e, tensor).data for e in basis])


def g_k(s: ReductiveSpace, k: int) -> list[SkewEndo]:
    """Basis of ``g(k) = {A in so(m) : A . nabla^j R = 0 for j <= k}``."""
    if k < 0:
        raise ValueError("order must be non-negative")
    key = ("g", k)
    if key not in s._cache:
        prev = so_basis(s.metric) if k == 0 else g_k(s, k - 1)
        s._cache[key] = _annihilators(prev, s.jet_tensor(k))
    return s._cache[key]


def g_k_symmetrized(s: ReductiveSpace, k: int) -> list[SkewEndo]:
    """Same subalgebra computed from the symmetrized jets ``R^{0)}, ..., R^{k)}``."""
    if k < 0:
        raise ValueError("order must be non-negative")
    key = ("gsym", k)
    if key not in s._cache:
        prev = so_basis(s.metric) if k == 0 else g_k_symmetrized(s, k - 1)
        sj = sym_jet(s, k)
        s._cache[key] = _restrict(prev, [sj.act(e).coeffs for e in prev])
    return s._cache[key]


def isotropy_image(s: ReductiveSpace) -> list[SkewEndo]:
    """``rho_*(h)``: matrices of ``ad(h)|_m`` for the isotropy basis."""
    if not s.checks()["reductive"]:
        raise ReductiveSpaceError("reductive", "[h, m] is not contained in m")
    mats = s.isotropy_matrices()
    for e in mats:
        if not e.is_skew_adjoint(s.metric):
            raise ReductiveSpaceError("ad-invariance", "isotropy acts by non-skew endomorphisms")
    return mats


@dataclass
class ChainEntry:
    order: int
    basis: list[SkewEndo]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class StabilizerChain:
    space: ReductiveSpace
    entries: list[ChainEntry] = field(default_factory=list)
    singer: int | None = None

    @property
    def dims(self) -> list[int]:
        return [e.dim for e in self.entries]

    def __getitem__(self, k: int) -> list[SkewEndo]:
        return self.entries[k].basis


def singer_invariant(s: ReductiveSpace, max_order: int | None = None) -> tuple[int, StabilizerChain]:
    """Least ``k`` with ``g(k) = g(k+1)``, plus the chain up to ``k + 1``.

    ``g(k+2)`` is also computed and must agree; a disagreement, or running past
    the order cap, means an internal error.
    """
    n = s.n
    cap = n * (n - 1) // 2 + 1 if max_order is None else max_order
    chain = StabilizerChain(s)
    iso = isotropy_image(s)
    k = 0
    chain.entries.append(ChainEntry(0, g_k(s, 0)))
    while True:
        if k > cap:
            raise InvariantViolation(f"stabilizer chain did not stabilize by order {cap}")
        nxt = g_k(s, k + 1)
        cur = chain.entries[k].basis
        if not span_contains(cur, nxt):
            raise InvariantViolation(f"g({k + 1}) is not contained in g({k})")
        chain.entries.append(ChainEntry(k + 1, nxt))
        if len(nxt) == len(cur):
            break
        k += 1
    probe = g_k(s, k + 2)
    if len(probe) != len(chain.entries[k].basis):
        raise InvariantViolation(f"g({k + 2}) differs from g({k}) after stabilization")
    for e in chain.entries:
        if not span_contains(e.basis, iso):
            raise InvariantViolation(f"isotropy image not contained in g({e.order})")
    chain.singer = k
    return k, chain
