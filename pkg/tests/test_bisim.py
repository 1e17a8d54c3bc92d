import itertools
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guarded_proc.bisim import (
    back_and_forth,
    bisim_chain,
    bisim_level,
    bisim_level_coalgebraic,
    bisim_stable,
    check_is_bisimulation,
    coalgebraic_bisim_check,
    coincidence,
    final_coalgebra_coincidence,
    mismatch,
)
from guarded_proc.functor_kit import Relation
from strategies import glts_systems

FIG1_PAIRS = [("x0", "y0"), ("x1", "y1"), ("x0", "y2"), ("x2", "y1")]


def recursive_bisim(g):
    """``B_n`` straight from its inductive definition."""

    @lru_cache(maxsize=None)
    def b(x, y, n):
        fx, fy = g.trans[x], g.trans[y]
        if n == 0:
            return {a for a, _ in fx} == {a for a, _ in fy}
        forth = all(any(a == c and b(x1, y1, n - 1) for c, y1 in fy) for a, x1 in fx)
        back = all(any(a == c and b(x1, y1, n - 1) for a, x1 in fx) for c, y1 in fy)
        return forth and back

    return b


def test_fig1_pairs_related_at_all_levels(fig1):
    R, k = bisim_stable(fig1)
    assert k <= len(fig1.states) ** 2 + 1
    for x, y in FIG1_PAIRS:
        assert R(x, y)
        for n in range(k + 2):
            assert bisim_level(fig1, n).rel(x, y)
    assert check_is_bisimulation(fig1, R)


def test_fig1_relation_is_bisimulation(fig1):
    pairs = FIG1_PAIRS + [(y, x) for x, y in FIG1_PAIRS]
    R = Relation.of(fig1.states, fig1.states, pairs)
    assert check_is_bisimulation(fig1, R)


def test_hml_pair_only_level0(hml_example):
    g, p, q = hml_example
    assert bisim_level(g, 0).rel(p, q)
    for n in range(1, 6):
        assert not bisim_level(g, n).rel(p, q)
        m = mismatch(g, p, q, n)
        assert m is not None and m.level == n
    assert mismatch(g, p, q, 0) is None


@given(glts_systems(), st.integers(0, 5))
def test_chain_matches_definition(g, n):
    b = recursive_bisim(g)
    chain = bisim_chain(g, n)
    for k in range(n + 1):
        for x in g.states:
            for y in g.states:
                assert ((x, y) in chain[k]) == b(x, y, k)


@given(glts_systems(), st.integers(0, 4))
def test_levels_are_equivalences(g, n):
    R = bisim_level(g, n).rel
    S = list(g.states)
    for x in S:
        assert R(x, x)
        for y in S:
            assert R(x, y) == R(y, x)
            for z in S:
                if R(x, y) and R(y, z):
                    assert R(x, z)


@given(glts_systems(), st.integers(0, 5))
def test_chain_antitone(g, n):
    chain = bisim_chain(g, n + 1)
    for k in range(n + 1):
        assert chain[k + 1] <= chain[k]


@given(glts_systems(max_states=3, max_actions=2))
@settings(max_examples=60)
def test_stable_is_greatest_bisimulation(g):
    S = list(g.states)
    all_pairs = list(itertools.product(S, S))
    union = set()
    for mask in range(2 ** len(all_pairs)):
        chosen = [p for i, p in enumerate(all_pairs) if mask >> i & 1]
        R = Relation.of(S, S, chosen)
        if check_is_bisimulation(g, R):
            union |= set(chosen)
    limit, _ = bisim_stable(g)
    assert set(limit.pairs) == union


@given(glts_systems(), st.integers(0, 5))
def test_coincidence(g, n):
    assert coincidence(g, n)
    assert final_coalgebra_coincidence(g, n)


@given(glts_systems(), st.integers(0, 4))
def test_coalgebraic_route_agrees(g, n):
    chain = bisim_chain(g, n)
    assert set(bisim_level_coalgebraic(g, n).pairs) == set(chain[n])
    if n:
        prev = Relation.of(g.states, g.states, chain[n - 1])
        cur = Relation.of(g.states, g.states, chain[n])
        assert coalgebraic_bisim_check(g, cur, prev)


@given(glts_systems(), st.integers(0, 4))
def test_mismatch_is_genuine(g, n):
    chain = bisim_chain(g, n)
    for x in g.states:
        for y in g.states:
            m = mismatch(g, x, y, n)
            assert (m is None) == ((x, y) in chain[n])
            if m is not None:
                src = x if m.side == "left" else y
                assert m.source == src and (m.action, m.target) in g.out(src)


def test_back_and_forth_with_relation(fig1):
    R, _ = bisim_stable(fig1)
    assert back_and_forth(fig1, "x0", "y0", R)
    assert not back_and_forth(fig1, "x0", "y1", R)


def test_negative_level(fig1):
    with pytest.raises(ValueError):
        bisim_level(fig1, -1)
