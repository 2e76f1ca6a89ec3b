"""Brute-force enumeration oracles and their frozen reference values.

The walk counts are the ground truth the automaton bounds are judged
against, so the counters themselves are pinned to known series values and
cross-checked against each other before anything else trusts them.
"""

import pytest

from sawbound.oracle import (
    count_canonical,
    count_line_continuations,
    count_line_extensions,
    count_loop_free,
    count_saw,
    count_saw_frontier,
)

# Number of n-step self-avoiding walks from the origin, n = 1..14.
C2 = [4, 12, 36, 100, 284, 780, 2172, 5916, 16268, 44100,
      120292, 324932, 881500, 2374444]

# Walks counted once per symmetry class: first step right, first vertical
# step (if any) downward.
D2 = [1, 2, 5, 13, 36, 98, 272, 740, 2034, 5513, 15037, 40617, 110188, 296806]


def test_count_saw_matches_series():
    for n, want in enumerate(C2[:10], start=1):
        assert count_saw(n) == want


def test_count_canonical_matches_series():
    for n, want in enumerate(D2[:10], start=1):
        assert count_canonical(n) == want


def test_symmetry_quotient_identity():
    # every length-n walk is one of 8 images of a canonical one, except the
    # 4 straight lines which have a 4-element orbit: c2 = 8*d - 4 for n >= 2
    for n in range(2, 11):
        assert count_saw(n) == 8 * count_canonical(n) - 4
    assert count_saw(1) == 4 * count_canonical(1)


def test_frontier_counter_agrees_with_dfs():
    for n in range(1, 9):
        assert count_saw_frontier(n) == count_saw(n)


def test_submultiplicativity():
    # c2(m+n) <= c2(m) * c2(n): a long walk splits into two legal halves
    c = {n: count_saw(n) for n in range(1, 11)}
    for m in range(1, 6):
        for n in range(1, 11 - m):
            assert c[m + n] <= c[m] * c[n]


def test_loop_free_equals_canonical_when_window_covers():
    # forbidding loops up to length k is no restriction while n < k
    for n in range(1, 9):
        assert count_loop_free(n, 8) == count_canonical(n)
        assert count_loop_free(n, 10) == count_canonical(n)


def test_loop_free_admits_closures_beyond_window():
    # a revisit closes a cycle of at most n edges, so a window only ever adds
    # returning walks on top of the self-avoiding ones; the first extras are
    # the (k+2)-cycles
    for k in (4, 6):
        for n in range(1, k + 2):
            assert count_loop_free(n, k) == count_canonical(n)
        assert count_loop_free(k + 2, k) > count_canonical(k + 2)


@pytest.mark.parametrize("k", [4, 6, 8])
def test_loop_free_shrinks_as_window_grows(k):
    # a wider window forbids more of the returning walks
    for n in range(1, 10):
        assert count_loop_free(n, k) >= count_loop_free(n, k + 2)


def test_line_extension_small_values():
    # raw continuations of the half-line, both vertical senses kept
    assert count_line_extensions(0, 4) == 1
    assert count_line_extensions(1, 4) == 3
    assert count_line_extensions(2, 4) == 9
    for k in (4, 6, 8):
        for n in range(0, 7):
            ext = count_line_extensions(n, k)
            assert ext >= 1
            assert ext <= 3 ** n


def test_line_extensions_match_continuations_when_window_covers():
    # with a window wider than the whole walk, loop-freedom is plain
    # self-avoidance; continuations aggregate every length from 1 up to n
    for n in range(0, 7):
        total = sum(count_line_extensions(i, 12) for i in range(1, n + 1))
        assert total == count_line_continuations(12, n)
