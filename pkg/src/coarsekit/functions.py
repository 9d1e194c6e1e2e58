"""Macro-uniform and slowly oscillating function checks, submetrizability
witnesses, asymptotic neighbourhoods and normality separators."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from coarsekit.core import BalleanPresentation, ScaleWindow, Verdict
from coarsekit.relations import asymptotically_disjoint, hit_radii, window_points
from coarsekit.subsets import All, FiniteList, SubsetSpec


class PreconditionError(ValueError):
    """An operation was asked to compute through a violated precondition."""


# ------------------------------------------------------------ function specs


class RealFunctionSpec:
    #: structural boundedness of the function's range (None: not known)
    bounded: Optional[bool] = None

    def evaluate(self, xs, b: BalleanPresentation, sw: ScaleWindow) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


class _Elementary(RealFunctionSpec):
    name = ""

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return f"{type(self).__name__}()"

    def describe(self):
        return self.name


class Identity(_Elementary):
    name, bounded = "identity", False

    def evaluate(self, xs, b, sw):
        return np.asarray(xs, dtype=float)


class Sqrt(_Elementary):
    name, bounded = "sqrt", False

    def evaluate(self, xs, b, sw):
        return np.sqrt(np.asarray(xs, dtype=float))


class Log1p(_Elementary):
    name, bounded = "log1p", False

    def evaluate(self, xs, b, sw):
        return np.log1p(np.asarray(xs, dtype=float))


class Square(_Elementary):
    name, bounded = "square", False

    def evaluate(self, xs, b, sw):
        x = np.asarray(xs, dtype=float)
        return x * x


class Mod2(_Elementary):
    name, bounded = "mod2", True

    def evaluate(self, xs, b, sw):
        return (np.asarray(xs, dtype=np.int64) % 2).astype(float)


@dataclass(frozen=True)
class PiecewiseTable(RealFunctionSpec):
    """Tabulated values; points past the table take the last value."""

    values: tuple
    name: str = "table"
    bounded = True

    def __post_init__(self):
        if not self.values:
            raise ValueError("table must be non-empty")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def evaluate(self, xs, b, sw):
        table = np.asarray(self.values)
        idx = np.minimum(np.asarray(xs, dtype=np.int64), table.size - 1)
        return table[idx]

    def describe(self):
        return self.name


def log2_staircase(window: int) -> PiecewiseTable:
    """⌊log₂(x + 1)⌋ tabulated on [0, window)."""
    return PiecewiseTable(tuple((x + 1).bit_length() - 1 for x in range(window)), name="staircase")


@dataclass(frozen=True)
class DistanceRatio(RealFunctionSpec):
    """f = d(·, A) / (d(·, A) + d(·, B)) for the chain distance of a metric-like presentation.

    Distances are taken to the window traces of A and B and saturate at the
    window size, which keeps f inside [0, 1].
    """

    A: SubsetSpec
    B: SubsetSpec
    bounded = True

    def _distance_to(self, xs, S, b, sw):
        cap = sw.window
        members = np.asarray(window_points(b, S, sw), dtype=np.int64)
        out = np.full(len(xs), float(cap))
        if members.size == 0:
            return out
        xs = np.asarray(xs, dtype=np.int64)
        for lo in range(0, xs.size, 512):
            chunk = xs[lo:lo + 512]
            d = b.distance(chunk[:, None], members[None, :]).min(axis=1)
            out[lo:lo + 512] = np.minimum(d, cap)
        return out

    def evaluate(self, xs, b, sw):
        if b.distance is None:
            raise PreconditionError(f"{b.label} provides no distance")
        da = self._distance_to(xs, self.A, b, sw)
        db = self._distance_to(xs, self.B, b, sw)
        total = da + db
        with np.errstate(invalid="ignore", divide="ignore"):
            f = np.where(total > 0, da / np.where(total > 0, total, 1.0), 0.0)
        return f

    def describe(self):
        return f"ratio({self.A.describe()};{self.B.describe()})"


def shipped_candidates(window: int = 4096) -> list[RealFunctionSpec]:
    return [Identity(), Sqrt(), Log1p(), Square(), Mod2(), log2_staircase(window)]


# ----------------------------------------------------------- ball diameters


def _ball_stats(b: BalleanPresentation, values: np.ndarray, xs: np.ndarray, r: int):
    """(diam f(E_r[x]), max E_r[x]) for each x, with f given on [0, len(values))."""
    if b.interval_radius is not None:
        rho = b.interval_radius(r)
        reach = xs + rho
        if rho == 0:
            return np.zeros(xs.size), reach
        n = values.size
        padded = np.concatenate([np.full(rho, values[0]), values, np.full(rho, values[-1])])
        windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * rho + 1)
        diam = windows.max(axis=1) - windows.min(axis=1)
        return diam[xs], reach
    diam = np.zeros(xs.size)
    reach = np.zeros(xs.size, dtype=np.int64)
    n = values.size
    for k, x in enumerate(xs.tolist()):
        ball = b.ball(x, r)
        top = max(ball)
        reach[k] = top
        if top < n and len(ball) > 1:
            vals = values[list(ball)]
            diam[k] = vals.max() - vals.min()
    return diam, reach


def _prefixes(window: int) -> list[int]:
    return [window // 8, window // 4, window // 2, window]


def _sup(diam, reach, limit) -> float:
    sel = diam[reach < limit]
    return float(sel.max()) if sel.size else 0.0


def macro_uniform_check(b: BalleanPresentation, f: RealFunctionSpec, sw: ScaleWindow) -> Verdict:
    """Per scale, the sup of diam f(E_r[x]) over interior window points.

    Yes-at-scale when every sup is already reached in the first half of the
    window; No when some sup at least doubles across three window doublings.
    """
    xs = np.asarray(b.points(sw.window), dtype=np.int64)
    values = f.evaluate(np.arange(sw.window), b, sw)
    table = {}
    unknown = []
    for r in range(sw.rmax + 1):
        diam, reach = _ball_stats(b, values, xs, r)
        sups = [_sup(diam, reach, p) for p in _prefixes(sw.window)]
        table[r] = sups[-1]
        if sups[0] > 0 and all(hi >= 2 * lo for lo, hi in zip(sups, sups[1:])):
            return Verdict.no(sw, r=r, sups=tuple(sups))
        if sups[-1] != sups[-2]:
            unknown.append(r)
    if unknown:
        return Verdict.unknown(sw, r=unknown[0], table=table)
    return Verdict.yes(sw, at_scale=True, table=table)


def slowly_oscillating_check(b: BalleanPresentation, f: RealFunctionSpec, epsilon: float,
                             sw: ScaleWindow) -> Verdict:
    """Per scale, the least c with diam f(E_r[x]) < ε for every interior x ≥ c.

    Yes-at-scale when each exceptional set is bounded; No when for some r the
    violations leave the bounded region and the per-block maxima over the
    last three window doublings stay ≥ ε without decreasing.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    xs = np.asarray(b.points(sw.window), dtype=np.int64)
    values = f.evaluate(np.arange(sw.window), b, sw)
    cutoffs = {}
    unknown = None
    for r in range(sw.rmax + 1):
        diam, reach = _ball_stats(b, values, xs, r)
        inside = reach < sw.window
        bad = xs[inside & (diam >= epsilon)]
        v = b.bornology.classify_points(bad.tolist(), sw)
        if v.is_yes:
            cutoffs[r] = int(bad.max()) + 1 if bad.size else 0
            continue
        p = _prefixes(sw.window)
        blocks = []
        for lo, hi in zip(p, p[1:]):
            sel = diam[inside & (xs >= lo) & (xs < hi)]
            blocks.append(float(sel.max()) if sel.size else 0.0)
        if all(m >= epsilon for m in blocks) and blocks[0] <= blocks[1] <= blocks[2]:
            return Verdict.no(sw, r=r, points=[int(x) for x in bad[-3:]])
        if unknown is None:
            unknown = r
    if unknown is not None:
        return Verdict.unknown(sw, r=unknown, cutoffs=cutoffs)
    return Verdict.yes(sw, at_scale=True, cutoffs=cutoffs)


def sob_check(b: BalleanPresentation, f: RealFunctionSpec, sw: ScaleWindow,
              epsilons: Sequence[float] = (0.25, 0.1)) -> Verdict:
    """Membership in the bounded slowly oscillating functions over an ε grid."""
    if f.bounded is False:
        return Verdict.no(sw, basis="unbounded")
    verdicts = [slowly_oscillating_check(b, f, eps, sw) for eps in epsilons]
    for eps, v in zip(epsilons, verdicts):
        if v.is_no:
            return Verdict.no(sw, r=v.witness["r"], epsilon=eps)
    if any(v.is_unknown for v in verdicts):
        return Verdict.unknown(sw)
    if f.bounded is None:
        return Verdict.unknown(sw, basis="range")
    return Verdict.yes(sw, at_scale=True)


@dataclass(frozen=True)
class SubmetrizabilityResult:
    function: Optional[RealFunctionSpec]
    verdict: Verdict


def submetrizable_witness(b: BalleanPresentation, candidates: Sequence[RealFunctionSpec],
                          sw: ScaleWindow) -> SubmetrizabilityResult:
    """First candidate that is macro-uniform at scale and unbounded along the window."""
    xs = np.asarray(b.points(sw.window), dtype=np.int64)
    for f in candidates:
        if f.bounded is True:
            continue
        if not macro_uniform_check(b, f, sw).is_yes:
            continue
        values = f.evaluate(xs, b, sw)
        tops = [float(values[xs < p].max()) if (xs < p).any() else -math.inf for p in _prefixes(sw.window)]
        if all(lo < hi for lo, hi in zip(tops, tops[1:])):
            return SubmetrizabilityResult(f, Verdict.yes(sw, at_scale=True, function=f.describe()))
    return SubmetrizabilityResult(None, Verdict.unknown(sw))


# ---------------------------------------------------- asymptotic neighbourhoods


def is_asymptotic_neighbourhood(b: BalleanPresentation, U: SubsetSpec, A: SubsetSpec,
                                sw: ScaleWindow) -> Verdict:
    """Every E_r[A] ∖ U bounded."""
    if isinstance(U, All):
        return Verdict.yes(sw, basis="everything")
    if b.bornology.coherent and b.is_bounded(A, sw).is_yes:
        return Verdict.yes(sw, basis="bounded")
    ys = b.points(sw.window)
    outside = np.asarray([y not in U for y in ys], dtype=bool)
    reach = hit_radii(b, ys, FiniteList(window_points(b, A, sw)), sw)
    ys = np.asarray(ys, dtype=np.int64)
    unknown = False
    for r in range(sw.rmax + 1):
        spill = ys[(reach <= r) & outside].tolist()
        v = b.bornology.classify_points(spill, sw)
        if v.is_no:
            return Verdict.no(sw, r=r, points=[p for p in spill if p >= sw.cutoff][:5])
        unknown |= v.is_unknown
    if unknown:
        return Verdict.unknown(sw)
    return Verdict.yes(sw, at_scale=True)


@dataclass(frozen=True)
class SeparatorResult:
    function: DistanceRatio
    zero_on_a: bool
    one_on_b: bool
    slowly_oscillating: Verdict
    neighbourhoods: tuple
    disjoint: bool
    neighbourhood_verdicts: tuple

    @property
    def separated(self) -> bool:
        """All exact checks hold and every at-scale check answered Yes."""
        return (self.zero_on_a and self.one_on_b and self.disjoint
                and self.slowly_oscillating.is_yes
                and all(v.is_yes for v in self.neighbourhood_verdicts))


def normality_separator(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow,
                        epsilon: float = 0.25) -> SeparatorResult:
    """Build f = d(·,A)/(d(·,A)+d(·,B)) and check it separates A from B.

    Raises PreconditionError unless b is metric-like and A, B are disjoint
    and asymptotically disjoint at scale.
    """
    if b.distance is None:
        raise PreconditionError(f"{b.label} is not metric-like")
    xa, xb = window_points(b, A, sw), window_points(b, B, sw)
    if set(xa) & set(xb):
        raise PreconditionError("A and B intersect")
    if not xa or not xb:
        raise PreconditionError("A or B has no points in the window")
    ad = asymptotically_disjoint(b, A, B, sw)
    if not ad.is_yes:
        raise PreconditionError(f"A and B are not asymptotically disjoint at scale ({ad.label})")
    f = DistanceRatio(A, B)
    xs = np.asarray(b.points(sw.window), dtype=np.int64)
    values = f.evaluate(xs, b, sw)
    by_point = dict(zip(xs.tolist(), values.tolist()))
    zero = all(by_point[a] == 0.0 for a in xa)
    one = all(by_point[x] == 1.0 for x in xb)
    so = slowly_oscillating_check(b, f, epsilon, sw)
    u_a = FiniteList(xs[values < 1 / 3].tolist(), truncated=True)
    u_b = FiniteList(xs[values > 2 / 3].tolist(), truncated=True)
    disjoint = not (set(u_a.points) & set(u_b.points))
    nbhd = (is_asymptotic_neighbourhood(b, u_a, A, sw), is_asymptotic_neighbourhood(b, u_b, B, sw))
    return SeparatorResult(f, zero, one, so, (u_a, u_b), disjoint, nbhd)
