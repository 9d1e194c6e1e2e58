import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsekit.constructions import make_reindexed
from coarsekit.core import ScaleWindow
from coarsekit.functions import (
    DistanceRatio,
    Identity,
    Log1p,
    Mod2,
    PiecewiseTable,
    PreconditionError,
    Sqrt,
    Square,
    is_asymptotic_neighbourhood,
    log2_staircase,
    macro_uniform_check,
    normality_separator,
    shipped_candidates,
    slowly_oscillating_check,
    sob_check,
    submetrizable_witness,
)
from coarsekit.subsets import All, Arithmetic, Band, Drift, FiniteList, Geometric

P4 = Geometric(1, 4)


def _least_cutoff(diam, window, r, eps):
    """Independent scan: least c with diam(x) < eps for every interior x >= c."""
    bad = [x for x in range(window - r) if diam(x) >= eps]
    return bad[-1] + 1 if bad else 0


def test_sqrt_cutoff_matches_direct_scan(shipped, sw):
    m = shipped["metric"]
    v = slowly_oscillating_check(m, Sqrt(), 0.1, sw.with_rmax(1))
    expected = _least_cutoff(lambda x: math.sqrt(x + 1) - math.sqrt(max(x - 1, 0)), sw.window, 1, 0.1)
    assert v.label == "yes-at-scale"
    assert v.witness["cutoffs"][1] == expected == 101


def test_log1p_cutoff_is_twenty(shipped, sw):
    m = shipped["metric"]
    v = slowly_oscillating_check(m, Log1p(), 0.1, sw.with_rmax(1))
    expected = _least_cutoff(lambda x: math.log1p(x + 1) - math.log1p(max(x - 1, 0)), sw.window, 1, 0.1)
    assert v.is_yes and v.witness["cutoffs"][1] == expected == 20


def test_mod2_not_slowly_oscillating(shipped, sw):
    v = slowly_oscillating_check(shipped["metric"], Mod2(), 0.5, sw.with_rmax(1))
    assert v.is_no and v.witness["r"] == 1
    with pytest.raises(ValueError):
        slowly_oscillating_check(shipped["metric"], Mod2(), 0.0, sw)


def test_macro_uniform_examples(shipped, sw):
    m = shipped["metric"]
    v = macro_uniform_check(m, Identity(), sw)
    assert v.label == "yes-at-scale"
    assert v.witness["table"] == {r: float(2 * r) for r in range(sw.rmax + 1)}
    v = macro_uniform_check(m, Square(), sw)
    assert v.is_no and v.witness["r"] == 1
    assert macro_uniform_check(shipped["discrete"], Square(), sw).label == "yes-at-scale"


def test_mu_verdicts_survive_reindexing(shipped, sw):
    for name in ("metric", "discrete"):
        b = shipped[name]
        b2 = make_reindexed(b, 2)
        for f in shipped_candidates(sw.window):
            assert macro_uniform_check(b, f, sw).label == macro_uniform_check(b2, f, sw).label, (name, f)
            assert sob_check(b, f, sw).label == sob_check(b2, f, sw).label, (name, f)


def test_sob_rejects_unbounded_functions(shipped, sw):
    assert sob_check(shipped["discrete"], Identity(), sw).is_no
    assert sob_check(shipped["discrete"], Mod2(), sw).label == "yes-at-scale"
    assert sob_check(shipped["metric"], Mod2(), sw).is_no


def test_staircase_table():
    t = log2_staircase(16)
    vals = t.evaluate(np.arange(20), None, None)
    assert vals.tolist() == [float((x + 1).bit_length() - 1) for x in range(15)] + [4.0] * 5
    with pytest.raises(ValueError):
        PiecewiseTable(())


def test_submetrizable_examples(shipped, sw):
    res = submetrizable_witness(shipped["metric"], [Identity()], sw)
    assert res.function == Identity() and res.verdict.is_yes
    res = submetrizable_witness(shipped["discrete"], [Identity()], sw)
    assert res.function == Identity()
    for b in shipped.values():
        res = submetrizable_witness(b, [Mod2()], ScaleWindow(4, 256, 128))
        assert res.function is None and res.verdict.is_unknown


def test_asymptotic_neighbourhood_examples(shipped, sw):
    m = shipped["metric"]
    assert is_asymptotic_neighbourhood(m, Band(P4, 1), P4, sw).label == "yes-at-scale"
    v = is_asymptotic_neighbourhood(m, Arithmetic(0, 2), Arithmetic(0, 2), sw)
    assert v.is_no and v.witness["r"] == 1
    for b in shipped.values():
        assert is_asymptotic_neighbourhood(b, All(), Arithmetic(0, 3), sw).is_yes


def test_distance_ratio_values(shipped, sw):
    m = shipped["metric"]
    f = DistanceRatio(FiniteList((0,)), FiniteList((10,)))
    vals = f.evaluate(np.arange(12), m, sw)
    assert vals[:11].tolist() == [x / 10 for x in range(11)]
    assert vals[11] == 11 / 12
    with pytest.raises(PreconditionError):
        DistanceRatio(P4, Geometric(2, 4)).evaluate([1, 2], shipped["discrete"], sw)


@pytest.mark.parametrize("B", [Geometric(2, 4), Drift(P4, 1, 1)], ids=["2pow4", "pow4+n"])
def test_normality_separator_on_power_pairs(shipped, sw, B):
    res = normality_separator(shipped["metric"], P4, B, sw.with_rmax(4))
    assert res.zero_on_a and res.one_on_b and res.disjoint
    assert res.slowly_oscillating.label == "yes-at-scale"
    assert all(v.label == "yes-at-scale" for v in res.neighbourhood_verdicts)
    assert res.separated


def test_normality_separator_preconditions(shipped, sw):
    m = shipped["metric"]
    with pytest.raises(PreconditionError, match="asymptotically disjoint"):
        normality_separator(m, Arithmetic(0, 2), Arithmetic(1, 2), sw)
    with pytest.raises(PreconditionError, match="intersect"):
        normality_separator(m, Arithmetic(0, 2), Arithmetic(0, 4), sw)
    with pytest.raises(PreconditionError, match="metric-like"):
        normality_separator(shipped["discrete"], P4, Geometric(2, 4), sw)
    # at rmax 16 the window sees 4^5 and 4^5 + 5 as close
    with pytest.raises(PreconditionError):
        normality_separator(m, P4, Drift(P4, 1, 1), sw)


def test_normality_separator_bounded_pair(shipped, sw):
    res = normality_separator(shipped["metric"], FiniteList((0,)), FiniteList((sw.window - 2,)), sw)
    assert res.zero_on_a and res.one_on_b
    assert res.slowly_oscillating.label == "yes-at-scale"
    assert res.separated


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 200), min_size=1, max_size=6), st.lists(st.integers(201, 400), min_size=1, max_size=6))
def test_separator_neighbourhoods_disjoint_whenever_separated(shipped, a, b):
    sw = ScaleWindow(4, 512, 256)
    res = normality_separator(shipped["metric"], FiniteList(tuple(a)), FiniteList(tuple(b)), sw)
    if res.separated:
        u_a, u_b = res.neighbourhoods
        assert not set(u_a.points) & set(u_b.points)
    assert res.zero_on_a and res.one_on_b
