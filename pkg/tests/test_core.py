import pytest

from coarsekit.core import (
    BalleanPresentation,
    CutoffBornology,
    FiniteBornology,
    ScaleWindow,
    Truth,
    Verdict,
    validate_presentation,
)
from coarsekit.subsets import Arithmetic, FiniteList, Geometric, Intersection


def test_scale_window_validation():
    assert ScaleWindow.default() == ScaleWindow(16, 4096, 2048)
    with pytest.raises(ValueError):
        ScaleWindow(4, 100, 100)
    with pytest.raises(ValueError):
        ScaleWindow(4, 100, 0)
    with pytest.raises(ValueError):
        ScaleWindow(-1, 100, 50)


def test_verdict_labels_and_definiteness():
    sw = ScaleWindow.default()
    assert Verdict.yes(sw).label == "yes" and Verdict.yes(sw).definite
    v = Verdict.yes(sw, at_scale=True)
    assert v.label == "yes-at-scale" and not v.definite and v.is_yes
    assert Verdict.no(sw, r=3).definite and Verdict.no(sw, r=3).witness == {"r": 3}
    u = Verdict.unknown(sw)
    assert u.value is Truth.UNKNOWN and not u.definite and str(u) == "unknown"


def test_finite_bornology_structural_first():
    sw = ScaleWindow(4, 64, 32)
    born = FiniteBornology()
    assert born.classify(FiniteList((50, 60)), sw).is_yes
    assert born.classify(Geometric(1, 4), sw).is_no
    assert born.classify(FiniteList((50,), truncated=True), sw).is_no
    assert born.classify(FiniteList((5,), truncated=True), sw).is_yes
    undecided = Intersection((Geometric(1, 2), Arithmetic(0, 2)))
    assert born.classify(undecided, sw).is_no  # 32 reaches the cutoff
    assert born.classify(undecided, ScaleWindow(4, 64, 40)).is_yes  # 2, 4, ..., 32 all below 40
    assert born.classify_points([1, 40], sw).witness["point"] == 40


def test_cutoff_bornology_is_proxy_only():
    sw = ScaleWindow(2, 8, 2)
    born = CutoffBornology()
    assert not born.coherent
    assert born.classify(FiniteList((0, 1)), sw).is_yes
    assert born.classify(FiniteList((0, 5)), sw).is_no
    assert born.classify(Arithmetic(0, 1), sw).is_no


def _interval(x, r):
    return range(max(0, x - r), x + r + 1)


def test_validate_accepts_metric_chain():
    b = BalleanPresentation(_interval, lambda r, s: r + s, FiniteBornology(), "m")
    assert validate_presentation(b, ScaleWindow(6, 40, 20)).is_yes


def test_validate_reports_asymmetry():
    b = BalleanPresentation(lambda x, r: {x, x + 1} if r else {x}, lambda r, s: r + s, FiniteBornology(), "asym")
    v = validate_presentation(b, ScaleWindow(2, 10, 5))
    assert v.is_no
    assert v.witness == {"axiom": "symmetry", "x": 0, "y": 1, "r": 1}


def test_validate_reports_bad_composition():
    b = BalleanPresentation(_interval, lambda r, s: max(r, s), FiniteBornology(), "cmax")
    v = validate_presentation(b, ScaleWindow(2, 10, 5))
    assert v.is_no and v.witness["axiom"] == "composition"
    x, r, s, y, z = (v.witness[k] for k in ("x", "r", "s", "y", "z"))
    assert (x, r, s) == (0, 1, 1)
    assert y in b.ball(x, s) and z in b.ball(y, r) and z not in b.ball(x, v.witness["t"])


def test_validate_reports_non_reflexive_and_non_monotone():
    b = BalleanPresentation(lambda x, r: {x + 1} if x == 3 else {x}, lambda r, s: r + s, FiniteBornology(), "nr")
    assert validate_presentation(b, ScaleWindow(1, 8, 4)).witness == {"axiom": "reflexivity", "x": 3, "r": 0}
    shrink = BalleanPresentation(lambda x, r: range(max(0, x - 1), x + 2) if r == 0 else {x},
                                 lambda r, s: r + s, FiniteBornology(), "shrink")
    v = validate_presentation(shrink, ScaleWindow(1, 8, 4))
    assert v.witness["axiom"] in ("monotone",)


def test_with_bornology_drops_discrete_certificate():
    b = BalleanPresentation(lambda x, r: {x}, max, FiniteBornology(), "d", discrete=True)
    c = b.with_bornology(CutoffBornology(), "d-proxy")
    assert b.discrete and not c.discrete and c.label == "d-proxy"
    assert c.ball(3, 2) == frozenset({3})
