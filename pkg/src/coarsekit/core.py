"""Presentation contract for balleans given as countable ascending entourage chains.

A presentation supplies the ball E_r[x] for every natural scale r, an index
t = compose_index(r, s) with E_r ∘ E_s ⊆ E_t, and an independent bornology
oracle.  Scale 0 is the diagonal for every shipped presentation.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from coarsekit.subsets import All, FiniteList, SubsetSpec


class Truth(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ScaleWindow:
    """Computation budget: scales 0..rmax, points 0..window-1, bounded region [0, cutoff)."""

    rmax: int
    window: int
    cutoff: int

    def __post_init__(self):
        if self.rmax < 0:
            raise ValueError("rmax must be >= 0")
        if not 0 < self.cutoff < self.window:
            raise ValueError("need 0 < cutoff < window")

    @classmethod
    def default(cls, window: int = 4096, rmax: int = 16) -> "ScaleWindow":
        return cls(rmax=rmax, window=window, cutoff=window // 2)

    def with_rmax(self, rmax: int) -> "ScaleWindow":
        return ScaleWindow(rmax, self.window, self.cutoff)

    def describe(self) -> str:
        return f"rmax={self.rmax} window={self.window} cutoff={self.cutoff}"


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer tagged with the budget it was decided at.

    ``at_scale`` marks a Yes for a claim quantified over every entourage that
    was only checked for scales up to ``decided_at.rmax``; such a Yes may
    still turn into No at larger scales.  Every other Yes/No is definite for
    the window it was computed on.
    """

    value: Truth
    decided_at: Optional[ScaleWindow] = None
    witness: dict = field(default_factory=dict)
    at_scale: bool = False

    @classmethod
    def yes(cls, sw=None, at_scale=False, **witness) -> "Verdict":
        return cls(Truth.YES, sw, witness, at_scale)

    @classmethod
    def no(cls, sw=None, **witness) -> "Verdict":
        return cls(Truth.NO, sw, witness)

    @classmethod
    def unknown(cls, sw=None, **witness) -> "Verdict":
        return cls(Truth.UNKNOWN, sw, witness)

    @property
    def is_yes(self) -> bool:
        return self.value is Truth.YES

    @property
    def is_no(self) -> bool:
        return self.value is Truth.NO

    @property
    def is_unknown(self) -> bool:
        return self.value is Truth.UNKNOWN

    @property
    def definite(self) -> bool:
        """Yes/No that cannot change when rmax grows."""
        return self.value is Truth.NO or (self.value is Truth.YES and not self.at_scale)

    @property
    def label(self) -> str:
        if self.value is Truth.YES and self.at_scale:
            return "yes-at-scale"
        return self.value.value

    def __str__(self):
        return self.label


# ---------------------------------------------------------------- bornologies


class Bornology:
    """Bounded-set oracle.  Yes means bounded, No means unbounded."""

    #: E_r-images of bounded sets are bounded (required by several No certificates)
    coherent = True
    #: bounded <=> finite
    finite_type = False

    def classify(self, spec: SubsetSpec, sw: ScaleWindow) -> Verdict:
        raise NotImplementedError

    def classify_points(self, points: Iterable[int], sw: ScaleWindow) -> Verdict:
        raise NotImplementedError


class FiniteBornology(Bornology):
    """Bounded sets are the finite sets.

    Specs are judged structurally when their description decides finiteness;
    window-computed point sets (and specs whose finiteness is not structural)
    fall back on the cutoff proxy: bounded iff every point lies below the
    cutoff.
    """

    finite_type = True

    def classify(self, spec, sw):
        if isinstance(spec, FiniteList) and spec.truncated:
            return self.classify_points(spec.points, sw)
        fin = spec.is_finite()
        if fin is True:
            return Verdict.yes(sw, basis="finite")
        if fin is False:
            return Verdict.no(sw, basis="infinite")
        return self.classify_points(spec.enumerate(sw.window), sw)

    def classify_points(self, points, sw):
        beyond = [p for p in points if p >= sw.cutoff]
        if beyond:
            return Verdict.no(sw, basis="cutoff", point=min(beyond))
        return Verdict.yes(sw, basis="cutoff")

    def __repr__(self):
        return "FiniteBornology()"


class CutoffBornology(Bornology):
    """Window proxy only: a set is bounded iff its window members lie in [0, cutoff).

    Not coherent: the E_r-image of a set inside the cutoff region may leave it.
    """

    coherent = False

    def classify(self, spec, sw):
        return self.classify_points(spec.enumerate(sw.window), sw)

    def classify_points(self, points, sw):
        beyond = [p for p in points if sw.cutoff <= p < sw.window]
        if beyond:
            return Verdict.no(sw, basis="cutoff", point=min(beyond))
        return Verdict.yes(sw, basis="cutoff")

    def __repr__(self):
        return "CutoffBornology()"


# --------------------------------------------------------------- presentation


class BalleanPresentation:
    """A ballean presented by a symmetric ascending chain of entourages E_0 ⊆ E_1 ⊆ ….

    Parameters
    ----------
    ball : callable (x, r) -> iterable of points, the ball E_r[x]
    compose_index : callable (r, s) -> t with E_r ∘ E_s ⊆ E_t
    bornology : Bornology
    label : str
    ground : SubsetSpec of ground points (default: all of ℕ)
    distance : optional vectorised callable (x, y) -> least r with y in E_r[x];
        presentations providing it are "metric-like"
    interval_radius : optional callable r -> ρ meaning E_r[x] = [x-ρ, x+ρ] ∩ ℕ;
        enables numpy fast paths
    discrete : structural certificate that every D_r = {x : |E_r[x]| > 1} is
        bounded in ``bornology``
    """

    def __init__(
        self,
        ball: Callable[[int, int], Iterable[int]],
        compose_index: Callable[[int, int], int],
        bornology: Bornology,
        label: str,
        ground: SubsetSpec = All(),
        distance: Optional[Callable[[Any, Any], Any]] = None,
        interval_radius: Optional[Callable[[int], int]] = None,
        discrete: bool = False,
    ):
        self._ball_fn = ball
        self._compose_fn = compose_index
        self.bornology = bornology
        self.label = label
        self.ground = ground
        self.distance = distance
        self.interval_radius = interval_radius
        self.discrete = discrete
        self._cache: dict = {}

    def ball(self, x: int, r: int) -> frozenset:
        key = (x, r)
        hit = self._cache.get(key)
        if hit is None:
            hit = frozenset(self._ball_fn(x, r))
            self._cache[key] = hit
        return hit

    def compose_index(self, r: int, s: int) -> int:
        return self._compose_fn(r, s)

    def is_bounded(self, spec: SubsetSpec, sw: ScaleWindow) -> Verdict:
        return self.bornology.classify(spec, sw)

    def points(self, window: int) -> list[int]:
        """Ground points in [0, window)."""
        return self.ground.enumerate(window)

    def with_bornology(self, bornology: Bornology, label: Optional[str] = None) -> "BalleanPresentation":
        """Same chain, different bornology oracle; the discreteness certificate is dropped."""
        return BalleanPresentation(
            self._ball_fn,
            self._compose_fn,
            bornology,
            label or self.label,
            ground=self.ground,
            distance=self.distance,
            interval_radius=self.interval_radius,
            discrete=False,
        )

    def __repr__(self):
        return f"BalleanPresentation({self.label!r})"


def validate_presentation(b: BalleanPresentation, sw: ScaleWindow) -> Verdict:
    """Exhaustively check the chain axioms for ground x < window and r, s ≤ rmax.

    Checked in order: reflexivity, symmetry, monotonicity, composition.  The
    first violation is returned as a No with its witness.
    """
    xs = b.points(sw.window)
    scales = range(sw.rmax + 1)
    for r in scales:
        for x in xs:
            if x not in b.ball(x, r):
                return Verdict.no(sw, axiom="reflexivity", x=x, r=r)
    for r in scales:
        for x in xs:
            for y in sorted(b.ball(x, r)):
                if x not in b.ball(y, r):
                    return Verdict.no(sw, axiom="symmetry", x=x, y=y, r=r)
    for r in range(sw.rmax):
        for x in xs:
            missing = b.ball(x, r) - b.ball(x, r + 1)
            if missing:
                return Verdict.no(sw, axiom="monotone", x=x, r=r, y=min(missing))
    for x in xs:
        for r, s in itertools.product(scales, scales):
            t = b.compose_index(r, s)
            target = b.ball(x, t)
            for y in sorted(b.ball(x, s)):
                extra = b.ball(y, r) - target
                if extra:
                    return Verdict.no(sw, axiom="composition", x=x, r=r, s=s, t=t, y=y, z=min(extra))
    return Verdict.yes(sw)
