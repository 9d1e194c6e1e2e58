import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsekit.constructions import (
    BlockPermutation,
    FilterChainParams,
    FinitaryGroupParams,
    FinitePermutation,
    TailChain,
    cycle,
    make_discrete_from_bornology,
    make_example5,
    make_filter_modified,
    make_finitary,
    make_metric,
    make_product,
    make_reindexed,
    make_subballean,
    pair,
    partner,
    prefix_chain,
    unpair,
)
from coarsekit.core import ScaleWindow, validate_presentation
from coarsekit.subsets import All, Arithmetic, Geometric

SW = ScaleWindow(rmax=8, window=64, cutoff=32)


def test_metric_balls():
    m = make_metric()
    assert m.ball(5, 2) == {3, 4, 5, 6, 7}
    assert m.ball(0, 3) == {0, 1, 2, 3}
    assert all(m.ball(x, 0) == {x} for x in range(20))
    assert m.compose_index(2, 3) == 5
    assert int(m.distance(3, 10)) == 7


def test_reindexed_metric():
    m2 = make_reindexed(make_metric(), 2)
    assert m2.label == "metric2x"
    assert m2.ball(5, 1) == {3, 4, 5, 6, 7}
    assert validate_presentation(m2, SW).is_yes


def test_finitary_examples():
    three = make_finitary(FinitaryGroupParams((cycle(0, 1, 2),)))
    assert three.ball(0, 1) == {0, 1, 2}
    assert all(three.ball(5, r) == {5} for r in range(6))
    swap = make_finitary(FinitaryGroupParams((cycle(0, 1),)))
    assert swap.ball(0, 4) == {0, 1}


def test_finitary_rejects_non_bijection():
    with pytest.raises(ValueError):
        FinitePermutation({0: 1, 1: 1})
    with pytest.raises(ValueError):
        cycle(0, 0)
    with pytest.raises(ValueError):
        BlockPermutation(3, (0, 0, 1))


def test_block_permutation_generator():
    flip = BlockPermutation(2, (1, 0))
    b = make_finitary(FinitaryGroupParams((flip,)), label="flip")
    assert b.ball(6, 1) == {6, 7} and b.ball(7, 3) == {6, 7}
    assert flip.inverse()(flip(9)) == 9


def test_example5_balls():
    e5 = make_example5()
    assert partner(5) == 6 and partner(2) == 1 and partner(6) == 5
    assert e5.ball(5, 3) == {5, 6}
    assert e5.ball(2, 3) == {1, 2, 3}
    # scale 0 is the diagonal; the pairs appear from scale 1 on
    assert e5.ball(7, 0) == {7}
    assert e5.ball(7, 1) == {7, 8}


def test_filter_modified_examples():
    f = make_filter_modified(FilterChainParams(make_metric(), TailChain(10)))
    assert f.ball(35, 2) == {35}
    assert f.ball(5, 2) == {3, 4, 5, 6, 7}
    assert f.ball(28, 2) == {26, 27, 28, 29}


def test_filter_chain_must_decrease():
    growing = lambda r: Arithmetic(max(0, 50 - r), 1)  # noqa: E731
    with pytest.raises(ValueError):
        make_filter_modified(FilterChainParams(make_metric(), growing))


def test_discrete_examples():
    d = make_discrete_from_bornology(prefix_chain(1))
    assert d.ball(2, 5) == {0, 1, 2, 3, 4}
    assert d.ball(7, 5) == {7}
    assert d.ball(0, 0) == {0}
    assert d.compose_index(3, 7) == 7 and d.discrete


def test_subballean_examples():
    m = make_metric()
    ev = make_subballean(m, Arithmetic(0, 2))
    i = ev.members.index(4)
    assert {ev.members.label(j) for j in ev.ball(i, 2)} == {2, 4, 6}
    g = make_subballean(m, Geometric(1, 4))
    k = g.members.index(16)
    assert {g.members.label(j) for j in g.ball(k, 3)} == {16}
    assert make_subballean(m, All()) is m
    with pytest.raises(ValueError):
        make_subballean(m, Arithmetic(1000, 1))


def test_product_examples():
    m = make_metric()
    d = make_discrete_from_bornology(prefix_chain(1))
    mm = make_product(m, m)
    assert {unpair(n) for n in mm.ball(pair(0, 0), 1)} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    md = make_product(m, d)
    assert {unpair(n) for n in md.ball(pair(5, 7), 5)} == {(x, 7) for x in range(11)}
    assert all(mm.ball(pair(x, x), 0) == {pair(x, x)} for x in range(10))


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_pairing_round_trip(x, y):
    assert unpair(pair(x, y)) == (x, y)


def test_every_shipped_presentation_is_valid(shipped):
    for name, b in shipped.items():
        v = validate_presentation(b, SW)
        assert v.is_yes, (name, v.witness)


def test_shipped_catalogue_names(shipped):
    assert set(shipped) == {"metric", "finitary", "example5", "filter", "discrete", "product", "metric_evens"}
