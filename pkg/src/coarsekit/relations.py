"""Scale-bounded decision procedures for closeness, linkness and friends.

Every procedure scans scales 0..rmax over the window and answers with a
three-valued :class:`~coarsekit.core.Verdict`.  A No for an existential claim
(close, linked, large) is only given with a certificate valid at every
scale; otherwise the answer is Unknown.  Presentations are assumed valid
(symmetric), which lets ``y ∈ E_r[S]`` be tested as ``E_r[y] ∩ S ≠ ∅``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from coarsekit.core import BalleanPresentation, ScaleWindow, Truth, Verdict
from coarsekit.subsets import DifferenceWithinWindow, FiniteList, Intersection, SubsetSpec

SAMPLE = 5  # witness points kept in verdicts


def window_points(b: BalleanPresentation, spec: SubsetSpec, sw: ScaleWindow) -> list[int]:
    """Members of ``spec`` that are ground points of ``b`` inside the window."""
    ground = b.ground
    return [x for x in spec.enumerate(sw.window) if x in ground]


def hit_radii(b: BalleanPresentation, xs: Sequence[int], target: SubsetSpec, sw: ScaleWindow) -> np.ndarray:
    """For each x, the least r ≤ rmax with E_r[x] ∩ target ≠ ∅ (rmax + 1 when there is none)."""
    rmax = sw.rmax
    out = np.full(len(xs), rmax + 1, dtype=np.int64)
    if not len(xs):
        return out
    if b.interval_radius is not None and b.ground.describe() == "all":
        rho = np.array([b.interval_radius(r) for r in range(rmax + 1)], dtype=np.int64)
        x = np.asarray(xs, dtype=np.int64)
        members = np.asarray(target.enumerate(int(x.max() + rho[-1] + 1)), dtype=np.int64)
        if members.size == 0:
            return out
        i = np.searchsorted(members, x)
        left = members[np.clip(i - 1, 0, members.size - 1)]
        right = members[np.clip(i, 0, members.size - 1)]
        d = np.minimum(np.abs(x - left), np.abs(x - right))
        return np.searchsorted(rho, d, side="left").astype(np.int64)
    bound = 2 * sw.window + 1
    index = frozenset(target.enumerate(bound))

    def hits(x, r):
        ball = b.ball(x, r)
        if max(ball) < bound:
            return not ball.isdisjoint(index)
        return any(y in index if y < bound else y in target for y in ball)

    # balls ascend with r, so the least hitting scale can be bisected
    for k, x in enumerate(xs):
        if x in index:
            out[k] = 0
            continue
        if not hits(x, rmax):
            continue
        lo, hi = 0, rmax
        while lo < hi:
            mid = (lo + hi) // 2
            if hits(x, mid):
                hi = mid
            else:
                lo = mid + 1
        out[k] = lo
    return out


def interior_mask(b: BalleanPresentation, xs: Sequence[int], r: int, limit: int) -> np.ndarray:
    """Points whose E_r-ball lies inside [0, limit)."""
    if b.interval_radius is not None:
        return np.asarray(xs, dtype=np.int64) + b.interval_radius(r) < limit
    return np.array([max(b.ball(x, r)) < limit for x in xs], dtype=bool)


def _sample(points) -> list[int]:
    return [int(p) for p in list(points)[:SAMPLE]]


# ------------------------------------------------------------------ closeness


def is_close_at(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, r: int, sw: ScaleWindow) -> bool:
    """A ⊆ E_r[B] and B ⊆ E_r[A] over the window."""
    if r > sw.rmax:
        raise ValueError("r must not exceed sw.rmax")
    local = sw.with_rmax(r)
    ha = hit_radii(b, window_points(b, A, sw), B, local)
    hb = hit_radii(b, window_points(b, B, sw), A, local)
    return bool(np.all(ha <= r) and np.all(hb <= r))


def _surely_bounded(v: Verdict) -> bool:
    """A bounded verdict read off the description rather than the cutoff proxy."""
    return v.is_yes and v.witness.get("basis") == "finite"


def _one_side_bounded(va: Verdict, vb: Verdict) -> bool:
    return (_surely_bounded(va) and vb.is_no) or (va.is_no and _surely_bounded(vb))


def _mismatch_certificate(b, A, B, sw) -> Optional[Verdict]:
    if not b.bornology.coherent:
        return None
    if _one_side_bounded(b.is_bounded(A, sw), b.is_bounded(B, sw)):
        return Verdict.no(sw, basis="bounded-vs-unbounded")
    return None


class _Reach:
    """Hit radii of the window members of A towards B and of B towards A."""

    def __init__(self, b, A, B, sw):
        self.xa = np.asarray(window_points(b, A, sw), dtype=np.int64)
        self.xb = np.asarray(window_points(b, B, sw), dtype=np.int64)
        self.ha = hit_radii(b, self.xa.tolist(), B, sw)
        self.hb = hit_radii(b, self.xb.tolist(), A, sw)

    @property
    def close_radius(self) -> int:
        return max(int(self.ha.max(initial=0)), int(self.hb.max(initial=0)))


def _closeness(b, A, B, sw, reach: Optional[_Reach] = None) -> Verdict:
    cert = _mismatch_certificate(b, A, B, sw)
    if cert is not None:
        return cert
    if b.discrete and b.bornology.coherent:
        for left, right in ((A, B), (B, A)):
            diff = DifferenceWithinWindow(left, right)
            if b.is_bounded(diff, sw).is_no:
                return Verdict.no(sw, basis="discrete", points=_sample(window_points(b, diff, sw)))
    reach = reach or _Reach(b, A, B, sw)
    need = reach.close_radius
    if need <= sw.rmax:
        return Verdict.yes(sw, r=need)
    far = sorted(reach.xa[reach.ha > sw.rmax].tolist() + reach.xb[reach.hb > sw.rmax].tolist())
    return Verdict.unknown(sw, points=_sample(far))


def closeness(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow) -> Verdict:
    """A δ B: Yes with the least witnessing scale, No only with a certificate."""
    return _closeness(b, A, B, sw)


# ------------------------------------------------------------------- linkness


def _linked_scan(b, sw, reach: _Reach):
    classify = b.bornology.classify_points
    for r in range(sw.rmax + 1):
        la = reach.xa[reach.ha <= r]
        if not la.size or not classify(la.tolist(), sw).is_no:
            continue
        lb = reach.xb[reach.hb <= r]
        if lb.size and classify(lb.tolist(), sw).is_no:
            return r, la
    return None, None


def is_linked(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow) -> Verdict:
    """A λ B.

    Both bounded: Yes.  Exactly one bounded: No (literal reading).  Otherwise
    Yes when A δ B, or when for some r both L_r(A,B) = {a ∈ A : E_r[a] ∩ B ≠ ∅}
    and L_r(B,A) are unbounded.  (L_r(A,B), L_r(B,A)) is the largest r-close
    pair inside (A, B), so the scan needs only a hereditary bornology.
    """
    va, vb = b.is_bounded(A, sw), b.is_bounded(B, sw)
    if va.is_yes and vb.is_yes:
        return Verdict.yes(sw, basis="both-bounded")
    if (va.is_yes and vb.is_no) or (va.is_no and vb.is_yes):
        if _one_side_bounded(va, vb) or not b.bornology.coherent:
            return Verdict.no(sw, basis="one-side-bounded")
    if b.discrete and b.bornology.coherent and va.is_no and vb.is_no:
        if _surely_bounded(b.is_bounded(Intersection((A, B)), sw)):
            return Verdict.no(sw, basis="discrete")
    reach = _Reach(b, A, B, sw)
    if va.is_no and vb.is_no:
        close = _closeness(b, A, B, sw, reach)
        if close.is_yes:
            return Verdict.yes(sw, r=close.witness["r"], basis="close")
    r, la = _linked_scan(b, sw, reach)
    if r is not None:
        return Verdict.yes(sw, r=r, points=_sample(la))
    return Verdict.unknown(sw)


def linked_at_scale(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow) -> bool:
    """The windowed decision: both bounded, or an unbounded close pair inside (A, B) at some r ≤ rmax."""
    va, vb = b.is_bounded(A, sw), b.is_bounded(B, sw)
    if va.is_yes and vb.is_yes:
        return True
    if va.is_yes or vb.is_yes:
        return False
    r, _ = _linked_scan(b, sw, _Reach(b, A, B, sw))
    return r is not None


# ---------------------------------------------------- asymptotic disjointness


def asymptotically_disjoint(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow) -> Verdict:
    """Every E_r[A] ∩ E_r[B] bounded.

    For unbounded A, B a linked verdict settles it (No with the same scale).
    Otherwise the images of the window traces of A and B are intersected
    over the window, scale by scale.
    """
    if b.bornology.coherent:
        if _surely_bounded(b.is_bounded(A, sw)) or _surely_bounded(b.is_bounded(B, sw)):
            return Verdict.yes(sw, basis="bounded-side")
        if b.discrete and _surely_bounded(b.is_bounded(Intersection((A, B)), sw)):
            return Verdict.yes(sw, basis="discrete")
    link = is_linked(b, A, B, sw)
    if link.is_yes and "r" in link.witness:
        return Verdict.no(sw, r=link.witness["r"], basis="linked")
    ys = b.points(sw.window)
    trace_a = FiniteList(window_points(b, A, sw))
    trace_b = FiniteList(window_points(b, B, sw))
    reach = np.maximum(hit_radii(b, ys, trace_a, sw), hit_radii(b, ys, trace_b, sw))
    ys = np.asarray(ys, dtype=np.int64)
    unknown = False
    for r in range(sw.rmax + 1):
        meet = ys[reach <= r].tolist()
        v = b.bornology.classify_points(meet, sw)
        if v.is_no:
            return Verdict.no(sw, r=r, points=_sample(p for p in meet if p >= sw.cutoff))
        unknown |= v.is_unknown
    if unknown:
        return Verdict.unknown(sw)
    return Verdict.yes(sw, at_scale=True)


# ------------------------------------------------------------------ discreteness


def is_discrete_at(b: BalleanPresentation, sw: ScaleWindow) -> Verdict:
    """Every D_r = {x : |E_r[x]| > 1} bounded for r ≤ rmax."""
    xs = b.points(sw.window)
    unknown = False
    for r in range(sw.rmax + 1):
        if b.interval_radius is not None and b.interval_radius(r) > 0:
            crowded = xs
        else:
            crowded = [x for x in xs if len(b.ball(x, r)) > 1]
        v = b.bornology.classify_points(crowded, sw)
        if v.is_no:
            return Verdict.no(sw, r=r, points=_sample(p for p in crowded if p >= sw.cutoff))
        unknown |= v.is_unknown
    if unknown:
        return Verdict.unknown(sw)
    return Verdict.yes(sw, at_scale=True)


# ------------------------------------------------------------------- largeness


def is_large_at(b: BalleanPresentation, Y: SubsetSpec, sw: ScaleWindow) -> Verdict:
    """Least r with E_r[Y] covering every window point whose E_r-ball stays in the window."""
    if b.bornology.coherent:
        if _surely_bounded(b.is_bounded(Y, sw)) and b.is_bounded(b.ground, sw).is_no:
            return Verdict.no(sw, basis="bounded")
        if b.discrete:
            rest = DifferenceWithinWindow(b.ground, Y)
            if b.is_bounded(rest, sw).is_no:
                return Verdict.no(sw, basis="discrete", points=_sample(window_points(b, rest, sw)))
    xs = b.points(sw.window)
    h = hit_radii(b, xs, Y, sw)
    for r in range(sw.rmax + 1):
        inside = interior_mask(b, xs, r, sw.window)
        if inside.any() and bool(np.all(h[inside] <= r)):
            return Verdict.yes(sw, r=r)
    return Verdict.unknown(sw)


def separated_net(b: BalleanPresentation, r: int, sw: ScaleWindow) -> FiniteList:
    """Greedy smallest-first maximal set of window points with pairwise disjoint E_r-balls."""
    if r > sw.rmax:
        raise ValueError("r must not exceed sw.rmax")
    used: set = set()
    chosen = []
    for x in b.points(sw.window):
        ball = b.ball(x, r)
        if used.isdisjoint(ball):
            chosen.append(x)
            used.update(ball)
    return FiniteList(chosen, truncated=True)


# ------------------------------------------------------------------ comparator


@dataclass(frozen=True)
class RelationReport:
    pair: tuple
    close: Verdict
    linked: Verdict
    asym_disjoint: Verdict

    @property
    def witnesses(self) -> dict:
        return {name: v.witness.get("r") for name, v in
                (("close", self.close), ("linked", self.linked), ("asym_disjoint", self.asym_disjoint))
                if "r" in v.witness}

    def consistent(self, b: BalleanPresentation, sw: ScaleWindow) -> bool:
        """close ⟹ linked; for unbounded pairs linked ⟹ not asymptotically disjoint."""
        if self.close.is_yes and not self.linked.is_yes:
            return False
        unbounded = all(b.is_bounded(s, sw).is_no for s in self.pair)
        if unbounded and self.linked.is_yes and self.asym_disjoint.is_yes:
            return False
        return True


def relation_report(b: BalleanPresentation, A: SubsetSpec, B: SubsetSpec, sw: ScaleWindow) -> RelationReport:
    return RelationReport((A, B), closeness(b, A, B, sw), is_linked(b, A, B, sw), asymptotically_disjoint(b, A, B, sw))


def _agree(v1: Verdict, v2: Verdict) -> bool:
    if v1.is_unknown or v2.is_unknown:
        return True
    return v1.value is v2.value


@dataclass
class ComparisonRow:
    pair: tuple
    first: RelationReport
    second: RelationReport
    delta_agree: bool
    lambda_agree: bool

    @property
    def agree(self) -> bool:
        return self.delta_agree and self.lambda_agree


@dataclass
class Comparison:
    rows: list = field(default_factory=list)

    @property
    def delta_disagreement(self) -> bool:
        return any(not row.delta_agree for row in self.rows)

    @property
    def lambda_disagreement(self) -> bool:
        return any(not row.lambda_agree for row in self.rows)

    def __iter__(self):
        return iter(self.rows)


def compare_relations(b1: BalleanPresentation, b2: BalleanPresentation,
                      family: Iterable[tuple], sw: ScaleWindow) -> Comparison:
    """Per-pair δ/λ comparison of two presentations of the same ground set.

    Only definite verdicts can disagree; Unknown on either side counts as
    agreement.  This samples δ/λ-equivalence on the given family only.
    """
    if b1.ground.describe() != b2.ground.describe():
        raise ValueError(f"ground sets differ: {b1.ground.describe()} vs {b2.ground.describe()}")
    out = Comparison()
    for A, B in family:
        r1, r2 = relation_report(b1, A, B, sw), relation_report(b2, A, B, sw)
        out.rows.append(ComparisonRow((A, B), r1, r2, _agree(r1.close, r2.close), _agree(r1.linked, r2.linked)))
    return out
