"""Concrete ballean presentations: metric line, finitary permutation actions,
the paired-points ballean, filter-modified chains, discrete balleans, subballeans, products."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

from coarsekit.core import BalleanPresentation, Bornology, FiniteBornology, ScaleWindow, Verdict
from coarsekit.subsets import All, Arithmetic, FiniteList, SubsetSpec


# ----------------------------------------------------------------- metric


def _abs_distance(x, y):
    return np.abs(np.asarray(x) - np.asarray(y))


def make_metric() -> BalleanPresentation:
    """ℕ with d(x, y) = |x - y|; E_r[x] = [max(0, x-r), x+r]."""
    return BalleanPresentation(
        ball=lambda x, r: range(max(0, x - r), x + r + 1),
        compose_index=lambda r, s: r + s,
        bornology=FiniteBornology(),
        label="metric",
        distance=_abs_distance,
        interval_radius=lambda r: r,
    )


def make_reindexed(b: BalleanPresentation, factor: int = 2, label: str | None = None) -> BalleanPresentation:
    """Same coarse structure, base reindexed as E'_r = E_{factor·r}."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    distance = None
    if b.distance is not None:
        base_distance = b.distance

        def distance(x, y):
            d = np.asarray(base_distance(x, y))
            return -(-d // factor)

    radius = None
    if b.interval_radius is not None:
        base_radius = b.interval_radius
        radius = lambda r: base_radius(factor * r)  # noqa: E731
    return BalleanPresentation(
        ball=lambda x, r: b.ball(x, factor * r),
        compose_index=lambda r, s: -(-b.compose_index(factor * r, factor * s) // factor),
        bornology=b.bornology,
        label=label or f"{b.label}{factor}x",
        ground=b.ground,
        distance=distance,
        interval_radius=radius,
        discrete=b.discrete,
    )


# --------------------------------------------------------------- finitary


def cycle(*points: int) -> dict[int, int]:
    """Permutation table of the cycle (p0 p1 … pk)."""
    if len(set(points)) != len(points):
        raise ValueError("cycle points must be distinct")
    return {p: points[(i + 1) % len(points)] for i, p in enumerate(points)}


@dataclass(frozen=True)
class BlockPermutation:
    """The same permutation ``table`` of [0, block) applied inside every block [k·block, (k+1)·block)."""

    block: int
    table: tuple

    def __post_init__(self):
        table = tuple(self.table)
        if self.block < 1 or len(table) != self.block or sorted(table) != list(range(self.block)):
            raise ValueError("block table must be a permutation of range(block)")
        object.__setattr__(self, "table", table)

    def __call__(self, x: int) -> int:
        q, r = divmod(x, self.block)
        return q * self.block + self.table[r]

    def inverse(self) -> "BlockPermutation":
        inv = [0] * self.block
        for i, j in enumerate(self.table):
            inv[j] = i
        return BlockPermutation(self.block, tuple(inv))


class FinitePermutation:
    """Finite-support permutation of ℕ given by a table; fixes every point off its support."""

    def __init__(self, table: Mapping[int, int]):
        table = {int(k): int(v) for k, v in table.items() if int(k) != int(v)}
        if set(table) != set(table.values()):
            raise ValueError(f"generator table is not a bijection on its support: {table}")
        if any(k < 0 for k in table):
            raise ValueError("generator table has negative points")
        self.table = table

    @property
    def support(self) -> frozenset:
        return frozenset(self.table)

    def __call__(self, x: int) -> int:
        return self.table.get(x, x)

    def inverse(self) -> "FinitePermutation":
        return FinitePermutation({v: k for k, v in self.table.items()})


@dataclass(frozen=True)
class FinitaryGroupParams:
    generators: tuple

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if isinstance(g, (FinitePermutation, BlockPermutation)):
                gens.append(g)
            elif isinstance(g, Mapping):
                gens.append(FinitePermutation(g))
            else:
                raise TypeError(f"unsupported generator {g!r}")
        object.__setattr__(self, "generators", tuple(gens))


def make_finitary(params: FinitaryGroupParams, label: str = "finitary") -> BalleanPresentation:
    """Orbit ball of words of length ≤ r over the generators and their inverses."""
    moves = []
    for g in params.generators:
        moves.extend([g, g.inverse()])
    finite_support = all(isinstance(g, FinitePermutation) for g in params.generators)
    layers: dict[int, list[frozenset]] = {}

    def ball(x, r):
        # BFS layers are memoised per point so every r is answered from one search
        found = layers.setdefault(x, [frozenset([x])])
        while len(found) <= r:
            prev = found[-1]
            if len(found) > 1 and found[-2] == prev:
                found.append(prev)
                continue
            grown = set(prev)
            for y in prev:
                grown.update(m(y) for m in moves)
            found.append(frozenset(grown))
        return found[r]

    return BalleanPresentation(
        ball=ball,
        compose_index=lambda r, s: r + s,
        bornology=FiniteBornology(),
        label=label,
        discrete=finite_support,
    )


# ------------------------------------------------------- paired points


def partner(x: int) -> int:
    """Pairing 1↔2, 3↔4, …"""
    if x < 1:
        raise ValueError("partner is defined on ℕ ≥ 1")
    return x + 1 if x % 2 else x - 1


def make_example5() -> BalleanPresentation:
    """ℕ≥1 with entourages (F×F) ∪ A ∪ △, A pairing 2n+1 with 2n+2.

    Scale 0 is the diagonal; scale r ≥ 1 uses F_r = {1, …, r}.
    """

    def ball(x, r):
        if r == 0:
            return (x,)
        if x <= r:
            return set(range(1, r + 1)) | {partner(x)}
        return (x, partner(x))

    return BalleanPresentation(
        ball=ball,
        compose_index=lambda r, s: r + s,
        bornology=FiniteBornology(),
        label="example5",
        ground=Arithmetic(1, 1),
    )


# ------------------------------------------------------- filter-modified


@dataclass(frozen=True)
class TailChain:
    """Φ_r = {x ≥ step·(r + 1) + offset}; decreasing by construction."""

    step: int = 10
    offset: int = 0

    def __post_init__(self):
        if self.step < 0 or self.offset < 0:
            raise ValueError("TailChain needs step >= 0 and offset >= 0")

    def __call__(self, r: int) -> SubsetSpec:
        return Arithmetic(self.step * (r + 1) + self.offset, 1)


@dataclass(frozen=True)
class FilterChainParams:
    base: BalleanPresentation
    phi_chain: Callable[[int], SubsetSpec]
    check_window: int = 256
    check_rmax: int = 32


def make_filter_modified(params: FilterChainParams, label: str | None = None) -> BalleanPresentation:
    """E_φ chain: H_r[x] = {x} if x ∈ Φ_r, else E_r[x] ∖ Φ_r.

    The decreasing chain Φ_0 ⊇ Φ_1 ⊇ … is checked on [0, check_window) for
    r < check_rmax.
    """
    base, phi = params.base, params.phi_chain
    prev = set(phi(0).enumerate(params.check_window))
    for r in range(1, params.check_rmax + 1):
        cur = set(phi(r).enumerate(params.check_window))
        if not cur <= prev:
            raise ValueError(f"phi_chain is not decreasing at r={r}: {sorted(cur - prev)[:5]}")
        prev = cur
    phis: dict[int, SubsetSpec] = {}

    def phi_at(r):
        spec = phis.get(r)
        if spec is None:
            spec = phis[r] = phi(r)
        return spec

    def ball(x, r):
        tail = phi_at(r)
        if x in tail:
            return (x,)
        return [y for y in base.ball(x, r) if y not in tail]

    return BalleanPresentation(
        ball=ball,
        compose_index=base.compose_index,
        bornology=base.bornology,
        label=label or f"{base.label}_phi",
        ground=base.ground,
        discrete=base.discrete,
    )


# ---------------------------------------------------------------- discrete

BoundedChain = Callable[[int], Iterable[int]]


def prefix_chain(step: int = 1) -> BoundedChain:
    """B_r = [0, step·r)."""
    if step < 1:
        raise ValueError("step must be >= 1")
    return lambda r: range(step * r)


def make_discrete_from_bornology(chain: BoundedChain, label: str = "discrete", check_rmax: int = 64) -> BalleanPresentation:
    """E_r[x] = B_r if x ∈ B_r, else {x}, for an ascending chain of finite sets B_r."""
    sets: list[frozenset] = []

    def bounded(r):
        while len(sets) <= r:
            sets.append(frozenset(chain(len(sets))))
        return sets[r]

    for r in range(check_rmax):
        if not bounded(r) <= bounded(r + 1):
            raise ValueError(f"bounded chain is not ascending at r={r}")

    def ball(x, r):
        b = bounded(r)
        return b if x in b else (x,)

    return BalleanPresentation(
        ball=ball,
        compose_index=lambda r, s: max(r, s),
        bornology=FiniteBornology(),
        label=label,
        discrete=True,
    )


# -------------------------------------------------------------- subballean


class RestrictedBornology(Bornology):
    """Bornology of Y inherited from X, in Y's own point indexing."""

    def __init__(self, base: Bornology, members: "_MemberCache"):
        self.base = base
        self.members = members
        self.coherent = base.coherent
        self.finite_type = base.finite_type

    def _base_window(self, sw):
        return ScaleWindow(sw.rmax, self.members.label(sw.window), self.members.label(sw.cutoff))

    def classify(self, spec, sw):
        if self.finite_type:
            return FiniteBornology().classify(spec, sw)
        return self.classify_points(spec.enumerate(sw.window), sw)

    def classify_points(self, points, sw):
        if self.finite_type:
            return FiniteBornology().classify_points(points, sw)
        labels = [self.members.label(i) for i in points]
        return self.base.classify_points(labels, self._base_window(sw))


class _MemberCache:
    """i-th member of Y and the inverse ranking, memoised."""

    def __init__(self, y: SubsetSpec):
        self.y = y
        self._labels: list[int] = []
        self._iter = y.members()

    def label(self, i: int) -> int:
        while len(self._labels) <= i:
            self._labels.append(next(self._iter))
        return self._labels[i]

    def index(self, m: int) -> int:
        return self.y.rank(m)


def make_subballean(b: BalleanPresentation, y: SubsetSpec, sw: ScaleWindow | None = None,
                    label: str | None = None) -> BalleanPresentation:
    """Restriction of ``b`` to Y, re-indexed so that point i is the i-th member of Y."""
    if isinstance(y, All):
        return b
    probe = sw.window if sw is not None else 64
    if not y.enumerate(probe):
        raise ValueError(f"subset {y.describe()} is empty in window {probe}")
    members = _MemberCache(y)

    def ball(i, r):
        return [members.index(m) for m in b.ball(members.label(i), r) if m in y]

    distance = None
    if b.distance is not None:
        base_distance = b.distance

        def distance(i, j):
            li = np.vectorize(members.label)(np.asarray(i))
            lj = np.vectorize(members.label)(np.asarray(j))
            return base_distance(li, lj)

    ground = FiniteList(range(sum(1 for _ in y.members()))) if y.is_finite() else All()
    pres = BalleanPresentation(
        ball=ball,
        compose_index=b.compose_index,
        bornology=RestrictedBornology(b.bornology, members),
        label=label or f"{b.label}|{y.describe()}",
        ground=ground,
        distance=distance,
        discrete=b.discrete,
    )
    pres.members = members
    return pres


# ----------------------------------------------------------------- product


def pair(x: int, y: int) -> int:
    """Cantor pairing ℕ×ℕ → ℕ."""
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(n: int) -> tuple[int, int]:
    s = (math.isqrt(8 * n + 1) - 1) // 2
    y = n - s * (s + 1) // 2
    return s - y, y


def _triangle_side(n: int) -> int:
    """Largest k with every pair x + y < k having index < n."""
    return (math.isqrt(8 * n + 1) - 1) // 2


class ProductBornology(Bornology):
    """A set of pairs is bounded iff both projections are bounded."""

    def __init__(self, first: Bornology, second: Bornology):
        self.first, self.second = first, second
        self.coherent = first.coherent and second.coherent
        self.finite_type = first.finite_type and second.finite_type

    def classify(self, spec, sw):
        if self.finite_type:
            return FiniteBornology().classify(spec, sw)
        return self.classify_points(spec.enumerate(sw.window), sw)

    def classify_points(self, points, sw):
        if self.finite_type:
            return FiniteBornology().classify_points(points, sw)
        k = max(_triangle_side(sw.cutoff), 1)
        factor_sw = ScaleWindow(sw.rmax, max(_triangle_side(sw.window), k + 1), k)
        coords = [unpair(p) for p in points]
        v1 = self.first.classify_points([c[0] for c in coords], factor_sw)
        v2 = self.second.classify_points([c[1] for c in coords], factor_sw)
        if v1.is_yes and v2.is_yes:
            return Verdict.yes(sw, basis="projections")
        if v1.is_no or v2.is_no:
            return Verdict.no(sw, basis="projections")
        return Verdict.unknown(sw, basis="projections")


class _PairedGround(SubsetSpec):
    def __init__(self, g1: SubsetSpec, g2: SubsetSpec):
        self.g1, self.g2 = g1, g2

    def __contains__(self, n):
        x, y = unpair(n)
        return x in self.g1 and y in self.g2

    def members(self):
        n = 0
        while True:
            if n in self:
                yield n
            n += 1

    def enumerate(self, window):
        return [n for n in range(window) if n in self]

    def is_finite(self):
        f1, f2 = self.g1.is_finite(), self.g2.is_finite()
        if f1 is True and f2 is True:
            return True
        if f1 is False or f2 is False:
            return False
        return None

    def describe(self):
        return f"pairs({self.g1.describe()};{self.g2.describe()})"


def make_product(b1: BalleanPresentation, b2: BalleanPresentation, label: str | None = None) -> BalleanPresentation:
    """Product chain on Cantor-paired points: E_r[(x, y)] = E_r[x] × E_r[y]."""

    def ball(n, r):
        x, y = unpair(n)
        second = b2.ball(y, r)
        return [pair(u, v) for u in b1.ball(x, r) for v in second]

    both_all = isinstance(b1.ground, All) and isinstance(b2.ground, All)
    return BalleanPresentation(
        ball=ball,
        compose_index=lambda r, s: max(b1.compose_index(r, s), b2.compose_index(r, s)),
        bornology=ProductBornology(b1.bornology, b2.bornology),
        label=label or f"{b1.label}x{b2.label}",
        ground=All() if both_all else _PairedGround(b1.ground, b2.ground),
    )


# --------------------------------------------------------------- catalogue


def shipped_presentations() -> dict[str, BalleanPresentation]:
    """The fixed catalogue of presentations exercised by the axiom suite."""
    metric = make_metric()
    discrete = make_discrete_from_bornology(prefix_chain(1))
    return {
        "metric": metric,
        "finitary": make_finitary(FinitaryGroupParams((cycle(0, 1, 2), cycle(5, 6)))),
        "example5": make_example5(),
        "filter": make_filter_modified(FilterChainParams(metric, TailChain(10))),
        "discrete": discrete,
        "product": make_product(metric, discrete),
        "metric_evens": make_subballean(metric, Arithmetic(0, 2)),
    }
