"""Property suites over shipped presentations with pass/fail/unknown reports.

Each check carries one anchor naming the statement it exercises (or the tag
"plumbing").  Unknown verdicts stay unknown: a suite never turns them into a
pass or a fail.  Sample families are fixed and versioned so reports are
byte-stable.
"""
from __future__ import annotations

import shlex
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from coarsekit.constructions import make_example5, make_reindexed
from coarsekit.core import BalleanPresentation, ScaleWindow, Verdict
from coarsekit.functions import (
    PreconditionError,
    Square,
    macro_uniform_check,
    normality_separator,
    sob_check,
    shipped_candidates,
)
from coarsekit.relations import (
    closeness,
    compare_relations,
    is_discrete_at,
    is_large_at,
    is_linked,
    window_points,
)
from coarsekit.subsets import (
    All,
    Arithmetic,
    DifferenceWithinWindow,
    Drift,
    FiniteList,
    Geometric,
    Intersection,
    SubsetSpec,
    Union,
)

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"
PLUMBING = "plumbing"

SAMPLE_FAMILY_VERSION = 1

_G4 = Geometric(1, 4)

#: fixed named sample sets (version 1): progressions with b in {1,2,3,5},
#: geometrics with q in {2,4}, finite lists and partner sets
SAMPLE_SETS: tuple = (
    ("all", All()),
    ("pos", Arithmetic(1, 1)),
    ("evens", Arithmetic(0, 2)),
    ("odds", Arithmetic(1, 2)),
    ("3n", Arithmetic(0, 3)),
    ("3n+1", Arithmetic(1, 3)),
    ("5n", Arithmetic(0, 5)),
    ("5n+2", Arithmetic(2, 5)),
    ("pow2", Geometric(1, 2)),
    ("pow4", _G4),
    ("2pow4", Geometric(2, 4)),
    ("pow4+n", Drift(_G4, 1, 1)),
    ("one", FiniteList((0,))),
    ("few", FiniteList((1, 2, 3))),
    ("spread", FiniteList((5, 100, 1000))),
    ("4n+1", Arithmetic(1, 4)),
    ("4n+2", Arithmetic(2, 4)),
    ("6n", Intersection((Arithmetic(0, 2), Arithmetic(0, 3)))),
    ("pow2+7", Union((FiniteList((7,)), Geometric(1, 2)))),
    ("empty", Intersection((Arithmetic(0, 2), Arithmetic(1, 2)))),
)

#: fixed named pairs (version 1) for relation-transfer checks
SAMPLE_PAIRS: tuple = (
    ("evens", "odds"),
    ("evens", "all"),
    ("evens", "3n"),
    ("3n", "3n+1"),
    ("5n", "5n+2"),
    ("pow4", "2pow4"),
    ("pow4", "pow4+n"),
    ("pow2", "pow2+7"),
    ("4n+1", "4n+2"),
    ("one", "few"),
    ("few", "spread"),
    ("pow4", "evens"),
)

#: Y family (version 1) for the largeness vs. closeness-to-X check
EXAMPLE5_SETS: tuple = (
    ("2N", Arithmetic(2, 2)),
    ("odds", Arithmetic(1, 2)),
    ("4n+1", Arithmetic(1, 4)),
    ("4n+2", Arithmetic(2, 4)),
    ("3n+1", Arithmetic(1, 3)),
    ("pow2", Geometric(1, 2)),
    ("few", FiniteList((1, 2, 3))),
    ("N", Arithmetic(1, 1)),
    ("2N+1pt", Union((Arithmetic(2, 2), FiniteList((1,))))),
    ("2N+3", Arithmetic(3, 2)),
)


def sample_sets() -> dict[str, SubsetSpec]:
    return dict(SAMPLE_SETS)


def sample_pairs() -> list[tuple[str, SubsetSpec, SubsetSpec]]:
    sets = sample_sets()
    return [(f"{a}~{b}", sets[a], sets[b]) for a, b in SAMPLE_PAIRS]


# -------------------------------------------------------------------- reports


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, dict):
        return ",".join(f"{k}:{_fmt(v)}" for k, v in value.items())
    return str(value)


def render_fields(fields: Sequence[tuple[str, object]]) -> str:
    """One record line: key=value pairs in the given order, shell-quoted."""
    return " ".join(f"{k}={shlex.quote(_fmt(v))}" for k, v in fields)


def witness_text(witness: dict) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in witness.items())


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str
    outcome: str
    witness: dict = field(default_factory=dict)
    runtime: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.outcome not in (PASS, FAIL, UNKNOWN):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if not self.anchor:
            raise ValueError("every check needs an anchor or the plumbing tag")
        if self.outcome == FAIL and not self.witness:
            raise ValueError(f"fail record {self.check_id} needs a witness")


@dataclass
class SuiteReport:
    suite_name: str
    checks: list = field(default_factory=list)

    def add(self, check_id: str, anchor: str, outcome: str, witness: Optional[dict] = None,
            runtime: float = 0.0, note: str = "") -> CheckRecord:
        rec = CheckRecord(check_id, anchor, outcome, dict(witness or {}), runtime, note)
        self.checks.append(rec)
        return rec

    def timed(self, check_id: str, anchor: str, fn: Callable[[], tuple]) -> CheckRecord:
        """Run ``fn() -> (outcome, witness[, note])`` and record it with its runtime."""
        t0 = time.perf_counter()
        out = fn()
        note = out[2] if len(out) > 2 else ""
        return self.add(check_id, anchor, out[0], out[1], time.perf_counter() - t0, note)

    @property
    def counts(self) -> dict:
        c = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        for rec in self.checks:
            c[rec.outcome] += 1
        return c

    @property
    def failed(self) -> bool:
        return self.counts[FAIL] > 0

    def records(self, timings: bool = False) -> list[str]:
        lines = []
        for rec in self.checks:
            fields = [("suite", self.suite_name), ("check", rec.check_id), ("anchor", rec.anchor),
                      ("outcome", rec.outcome), ("witness", witness_text(rec.witness))]
            if rec.note:
                fields.append(("note", rec.note))
            if timings:
                fields.append(("runtime", f"{rec.runtime:.6f}"))
            lines.append(render_fields(fields))
        c = self.counts
        lines.append(render_fields([("suite", self.suite_name), ("summary", "counts"),
                                    ("pass", c[PASS]), ("fail", c[FAIL]), ("unknown", c[UNKNOWN])]))
        return lines

    def text(self, timings: bool = False) -> str:
        lines = [f"== {self.suite_name} =="]
        for rec in self.checks:
            line = f"[{rec.outcome:7}] {rec.check_id}  ({rec.anchor})"
            if rec.witness:
                line += f"  {witness_text(rec.witness)}"
            if rec.note:
                line += f"  # {rec.note}"
            if timings:
                line += f"  [{rec.runtime:.3f}s]"
            lines.append(line)
        c = self.counts
        lines.append(f"-- pass={c[PASS]} fail={c[FAIL]} unknown={c[UNKNOWN]}")
        return "\n".join(lines)


def _outcome(v: Verdict, expect_yes: bool = True) -> str:
    """pass/fail/unknown for a verdict expected to be Yes (or No)."""
    if v.is_unknown:
        return UNKNOWN
    return PASS if v.is_yes == expect_yes else FAIL


def _verdict_witness(v: Verdict) -> dict:
    w = {"verdict": v.label}
    w.update(v.witness)
    return w


# -------------------------------------------------------------- theorem1 suite


def proof_witness(b: BalleanPresentation, r: int, sw: ScaleWindow) -> tuple[FiniteList, FiniteList]:
    """Y = greedy smallest-first points with |E_r[y]| > 1 and pairwise disjoint balls,
    Z = {z_y = min(E_r[y] ∖ {y})}."""
    used: set = set()
    ys, zs = [], []
    for y in b.points(sw.window):
        ball = b.ball(y, r)
        if len(ball) < 2 or not used.isdisjoint(ball):
            continue
        used.update(ball)
        ys.append(y)
        zs.append(min(ball - {y}))
    return FiniteList(ys, truncated=True), FiniteList(zs, truncated=True)


def run_theorem1(b: BalleanPresentation, sample: Optional[Sequence[tuple[str, SubsetSpec]]] = None,
                 sw: Optional[ScaleWindow] = None) -> SuiteReport:
    """Discrete at scale: close pairs have bounded differences, linked unbounded
    pairs meet in an unbounded set.  Not discrete: a disjoint linked pair built from partners."""
    sw = sw or ScaleWindow.default()
    sample = list(sample if sample is not None else SAMPLE_SETS)
    report = SuiteReport(f"theorem1:{b.label}")
    disc = is_discrete_at(b, sw)
    report.add("t1.discreteness", PLUMBING, PASS, _verdict_witness(disc))
    if disc.is_unknown:
        report.add("t1.mode", "Theorem 1", UNKNOWN, _verdict_witness(disc), note="discreteness undecided")
        return report
    if disc.is_yes:
        for i, (na, A) in enumerate(sample):
            for nb, B in sample[i:]:
                pair = f"{na}~{nb}"
                close = closeness(b, A, B, sw)
                if close.is_yes:
                    def check2(A=A, B=B, close=close):
                        left = b.is_bounded(DifferenceWithinWindow(A, B), sw)
                        right = b.is_bounded(DifferenceWithinWindow(B, A), sw)
                        w = {"close_r": close.witness.get("r", "-"), "left": left.label, "right": right.label}
                        if left.is_no or right.is_no:
                            return FAIL, w
                        if left.is_yes and right.is_yes:
                            return PASS, w
                        return UNKNOWN, w
                    report.timed(f"t1.2.{pair}", "Theorem 1(2)", check2)
                unbounded = b.is_bounded(A, sw).is_no and b.is_bounded(B, sw).is_no
                link = is_linked(b, A, B, sw) if unbounded else None
                if link is not None and link.is_yes:
                    def check3(A=A, B=B, link=link):
                        meet = b.is_bounded(Intersection((A, B)), sw)
                        w = {"linked_r": link.witness.get("r", "-"), "meet": meet.label}
                        return _outcome(meet, expect_yes=False), w
                    report.timed(f"t1.3.{pair}", "Theorem 1(3)", check3)
        return report
    r = int(disc.witness["r"])

    def witness_check():
        Y, Z = proof_witness(b, r, sw)
        link = is_linked(b, Y, Z, sw)
        unbounded = b.is_bounded(Y, sw)
        disjoint = not (set(Y.points) & set(Z.points))
        w = {"r": r, "y": list(Y.points[:4]), "z": list(Z.points[:4]), "linked": link.label,
             "y_unbounded": unbounded.is_no, "disjoint": disjoint}
        if not disjoint or unbounded.is_yes or link.is_no:
            return FAIL, w
        if link.is_yes and unbounded.is_no:
            return PASS, w
        return UNKNOWN, w

    report.timed("t1.witness", "Theorem 1 proof", witness_check)
    return report


# ------------------------------------------------------- filter construction


def run_filter_construction(base: BalleanPresentation, modified: BalleanPresentation,
                            sw: Optional[ScaleWindow] = None) -> SuiteReport:
    """Inclusion and strictness of the modified chain, equal bornologies, and
    linkness transfer in both directions on the fixed pair family."""
    sw = sw or ScaleWindow.default()
    report = SuiteReport(f"filter:{modified.label}")
    xs = base.points(sw.window)

    def inclusion():
        for r in range(sw.rmax + 1):
            for x in xs:
                extra = modified.ball(x, r) - base.ball(x, r)
                if extra:
                    return FAIL, {"x": x, "r": r, "y": min(extra)}
        return PASS, {"points": len(xs), "rmax": sw.rmax}

    def strictness():
        for r in range(sw.rmax + 1):
            for x in xs:
                lost = base.ball(x, r) - modified.ball(x, r)
                if lost:
                    return PASS, {"x": x, "r": r, "y": min(lost)}
        return FAIL, {"window": sw.window, "rmax": sw.rmax, "proper": False}

    report.timed("filter.inclusion", "Theorem 3 (E_phi in E)", inclusion)
    report.timed("filter.strict", "Theorem 3 (strict)", strictness)
    for name, S in SAMPLE_SETS:
        def same_bounded(S=S):
            v1, v2 = base.is_bounded(S, sw), modified.is_bounded(S, sw)
            w = {"base": v1.label, "modified": v2.label}
            if v1.is_unknown or v2.is_unknown:
                return UNKNOWN, w
            return (PASS if v1.value is v2.value else FAIL), w
        report.timed(f"filter.bornology.{name}", "Theorem 3 (same bornology)", same_bounded)
    for pair, A, B in sample_pairs():
        lm, lb = is_linked(modified, A, B, sw), is_linked(base, A, B, sw)
        w = {"modified": lm.label, "base": lb.label}
        if lm.is_yes:
            report.add(f"filter.down.{pair}", "Theorem 3 (linked in E_phi => in E)", _outcome(lb), w)
        if lb.is_yes:
            if lm.is_no:
                report.add(f"filter.up.{pair}", "Theorem 3 (linked in E => in E_phi)", UNKNOWN, w,
                           note="expected: ultrafilter hypothesis unmet")
            else:
                report.add(f"filter.up.{pair}", "Theorem 3 (linked in E => in E_phi)", _outcome(lm), w)
    return report


# -------------------------------------------------------------- example5 suite


def run_example5(sw: Optional[ScaleWindow] = None, b: Optional[BalleanPresentation] = None) -> SuiteReport:
    sw = sw or ScaleWindow.default()
    b = b or make_example5()
    report = SuiteReport(f"example5:{b.label}")

    def two_n_large():
        v = is_large_at(b, Arithmetic(2, 2), sw)
        ok = v.is_yes and v.witness.get("r") == 1
        return (PASS if ok else (UNKNOWN if v.is_unknown else FAIL)), _verdict_witness(v)

    report.timed("e5.large.2N", "Example 5", two_n_large)
    for name, Y in EXAMPLE5_SETS:
        def large_iff_close(Y=Y):
            large = is_large_at(b, Y, sw)
            close = closeness(b, Y, b.ground, sw)
            w = {"large": large.label, "close": close.label,
                 "large_r": large.witness.get("r", "-"), "close_r": close.witness.get("r", "-")}
            if large.is_unknown or close.is_unknown:
                return UNKNOWN, w
            same = large.value is close.value and large.witness.get("r") == close.witness.get("r")
            return (PASS if same else FAIL), w
        report.timed(f"e5.large_iff_close.{name}", "Example 5 (Y large iff Y close to X)", large_iff_close)

    def not_discrete():
        v = is_discrete_at(b, sw)
        return _outcome(v, expect_yes=False), _verdict_witness(v)

    report.timed("e5.not_discrete", "Example 5", not_discrete)
    report.add("e5.rigidity", "Example 5", UNKNOWN, {},
               note="untestable: rigidity quantifies over all coarse structures")
    return report


# ------------------------------------------------------------- mu / so suites


def run_mu_so_suites(pairs: Sequence[tuple[BalleanPresentation, BalleanPresentation]],
                     metric: BalleanPresentation, discrete: BalleanPresentation,
                     sw: Optional[ScaleWindow] = None, candidates=None) -> SuiteReport:
    """Equal mu/sob verdicts on reindexed pairs; the metric-vs-discrete contrapositive."""
    sw = sw or ScaleWindow.default()
    candidates = candidates if candidates is not None else shipped_candidates(sw.window)
    report = SuiteReport("mu_so")
    for b1, b2 in pairs:
        for f in candidates:
            for kind, check, anchor in (("mu", macro_uniform_check, "Theorem 7"), ("sob", sob_check, "Theorem 9")):
                def equal(check=check, f=f, b1=b1, b2=b2):
                    v1, v2 = check(b1, f, sw), check(b2, f, sw)
                    w = {b1.label: v1.label, b2.label: v2.label}
                    if v1.is_unknown or v2.is_unknown:
                        return UNKNOWN, w
                    return (PASS if v1.label == v2.label else FAIL), w
                report.timed(f"{kind}.{b1.label}~{b2.label}.{f.describe()}", anchor, equal)

    def square_differs():
        v1, v2 = macro_uniform_check(metric, Square(), sw), macro_uniform_check(discrete, Square(), sw)
        w = {metric.label: v1.label, discrete.label: v2.label}
        if v1.is_unknown or v2.is_unknown:
            return UNKNOWN, w
        return (PASS if v1.is_no and v2.is_yes else FAIL), w

    def lambda_differs():
        evens, odds = Arithmetic(0, 2), Arithmetic(1, 2)
        row = next(iter(compare_relations(metric, discrete, [(evens, odds)], sw)))
        w = {metric.label: row.first.linked.label, discrete.label: row.second.linked.label}
        if row.first.linked.is_unknown or row.second.linked.is_unknown:
            return UNKNOWN, w
        return (PASS if not row.lambda_agree else FAIL), w

    report.timed(f"mu.{metric.label}~{discrete.label}.square", "Theorem 7 (contrapositive)", square_differs)
    report.timed(f"lambda.{metric.label}~{discrete.label}.evens~odds", "Theorem 7 (contrapositive)", lambda_differs)
    return report


def reindexed_pairs(metric: BalleanPresentation, discrete: BalleanPresentation):
    return [(metric, make_reindexed(metric, 2)), (discrete, make_reindexed(discrete, 2))]


# ------------------------------------------------------------------ normality

SEPARATE, PRECONDITION = "separate", "precondition"

#: fixed normality pairs (version 1) with the expected outcome
NORMALITY_PAIRS: tuple = (
    ("pow4~2pow4", _G4, Geometric(2, 4), SEPARATE),
    ("pow4~pow4+n", _G4, Drift(_G4, 1, 1), SEPARATE),
    ("evens~odds", Arithmetic(0, 2), Arithmetic(1, 2), PRECONDITION),
)


def run_normality(b: BalleanPresentation, pairs: Sequence[tuple] = NORMALITY_PAIRS,
                  sw: Optional[ScaleWindow] = None, epsilon: float = 0.25) -> SuiteReport:
    sw = sw or ScaleWindow.default(rmax=4)
    report = SuiteReport(f"normality:{b.label}")
    for name, A, B, expect in pairs:
        def check(A=A, B=B, expect=expect):
            try:
                res = normality_separator(b, A, B, sw, epsilon)
            except PreconditionError as exc:
                w = {"precondition": str(exc)}
                return (PASS if expect == PRECONDITION else FAIL), w
            w = {"zero_on_a": res.zero_on_a, "one_on_b": res.one_on_b, "so": res.slowly_oscillating.label,
                 "disjoint": res.disjoint, "nbhd_a": res.neighbourhood_verdicts[0].label,
                 "nbhd_b": res.neighbourhood_verdicts[1].label}
            if expect == PRECONDITION:
                return FAIL, dict(w, expected="precondition failure")
            verdicts = (res.slowly_oscillating,) + tuple(res.neighbourhood_verdicts)
            exact = res.zero_on_a and res.one_on_b and res.disjoint
            if not exact or any(v.is_no for v in verdicts):
                return FAIL, w
            if any(v.is_unknown for v in verdicts):
                return UNKNOWN, w
            return PASS, w
        anchor = "normality (precondition gate)" if expect == PRECONDITION else "normality separator"
        report.timed(f"normality.{name}", anchor, check)
    return report


# ------------------------------------------------------------------------ all

SUITES = ("theorem1", "filter", "example5", "mu_so", "normality")


def run_suite(name: str, presentations: dict, sw: ScaleWindow, normality_rmax: int = 4,
              ballean: Optional[str] = None) -> list[SuiteReport]:
    """Run one named suite (or "all") over the configured presentations."""
    if name == "all":
        out = []
        for n in SUITES:
            out.extend(run_suite(n, presentations, sw, normality_rmax))
        return out
    get = presentations.__getitem__
    if name == "theorem1":
        names = [ballean] if ballean else ["discrete", "metric", "example5"]
        return [run_theorem1(get(n), sw=sw) for n in names]
    if name == "filter":
        return [run_filter_construction(get("metric"), get(ballean or "filter"), sw)]
    if name == "example5":
        return [run_example5(sw, get(ballean or "example5"))]
    if name == "mu_so":
        metric, discrete = get("metric"), get("discrete")
        return [run_mu_so_suites(reindexed_pairs(metric, discrete), metric, discrete, sw)]
    if name == "normality":
        return [run_normality(get(ballean or "metric"), sw=sw.with_rmax(normality_rmax))]
    raise ValueError(f"unknown suite {name!r}")
