"""Linearity testing: Walsh correlation, graph test, soundness bounds."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from rsgraphs.errors import ParameterError
from rsgraphs.graphs import Graph
from rsgraphs.lintest import (
    BooleanFunction,
    and_function,
    blr_trial,
    estimate_soundness,
    graph_test,
    hw_bound,
    linear_function,
    load_table,
    min_bound,
    random_function,
    walsh_correlation,
)


def brute_correlation(f):
    """Oracle: max agreement bias against every linear function, exactly."""
    size = 1 << f.m
    best = 0
    for a in range(size):
        agree = 0
        for x in range(size):
            lin = (a & x).bit_count() & 1
            agree += 1 if lin == f(x) else -1
        best = max(best, abs(agree))
    return Fraction(best, size)


def test_boolean_function_validation():
    f = BooleanFunction(2, [0, 1, 1, 0])
    assert [f(x) for x in range(4)] == [0, 1, 1, 0]
    with pytest.raises(ParameterError):
        BooleanFunction(2, [0, 1, 1])
    with pytest.raises(ParameterError):
        BooleanFunction(2, [0, 1, 2, 0])


def test_linear_and_constant_tables():
    f = linear_function(3, 0b101)
    for x in range(8):
        assert f(x) == ((x & 0b101).bit_count() & 1)
    zero = linear_function(3, 0)
    assert sum(zero.table) == 0


def test_and_function_table():
    f = and_function(2)
    assert list(f.table) == [0, 0, 0, 1]
    padded = and_function(4)
    for x in range(16):
        assert padded(x) == (1 if (x & 0b11) == 0b11 else 0)


def test_walsh_correlation_matches_brute_force():
    rng = random.Random(31)
    for m in (1, 2, 3, 4):
        for _ in range(10):
            f = random_function(m, rng.randrange(10_000))
            assert walsh_correlation(f) == brute_correlation(f)


def test_walsh_correlation_frozen():
    assert walsh_correlation(and_function(2)) == Fraction(1, 2)
    assert walsh_correlation(and_function(8)) == Fraction(1, 2)
    assert walsh_correlation(linear_function(5, 0b10011)) == 1
    assert walsh_correlation(BooleanFunction(2, [1, 1, 1, 1])) == 1  # constant


def test_blr_trial_exhaustive_and():
    f = and_function(2)
    hits = sum(blr_trial(f, x, y) for x in range(4) for y in range(4))
    assert hits == 10  # acceptance 10/16 for the 2-variable AND
    with pytest.raises(ParameterError):
        blr_trial(f, 4, 0)


def test_graph_test_single_edge_is_one_blr_trial():
    g = Graph.from_edges(2, [(0, 1)])
    f = and_function(2)
    for seed in range(200):
        rng = random.Random(seed)
        x, y = rng.getrandbits(2), rng.getrandbits(2)
        assert graph_test(g, f, seed) == blr_trial(f, x, y)


def test_graph_test_linear_always_accepts():
    g = Graph.from_edges(4, [(0, 1), (2, 3), (0, 2)])
    f = linear_function(6, 0b110010)
    assert all(graph_test(g, f, seed) for seed in range(100))


def test_graph_test_edgeless_vacuous():
    g = Graph.from_edges(3, [])
    assert graph_test(g, random_function(3, 1), seed=0)


def test_estimate_soundness_matches_scalar_rate():
    g = Graph.from_edges(2, [(0, 1)])
    f = and_function(2)
    p_hat, stderr = estimate_soundness(g, f, 20_000, seed=5)
    assert stderr > 0
    assert abs(p_hat - 10 / 16) <= 5 * stderr


def test_estimate_soundness_linear_exact_one():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    f = linear_function(4, 0b1011)
    p_hat, stderr = estimate_soundness(g, f, 5000, seed=1)
    assert p_hat == 1.0 and stderr == 0.0


def test_estimate_soundness_deterministic():
    g = Graph.from_edges(2, [(0, 1)])
    f = random_function(4, 2)
    assert estimate_soundness(g, f, 1000, seed=9) == estimate_soundness(
        g, f, 1000, seed=9
    )
    with pytest.raises(ParameterError):
        estimate_soundness(g, f, 0, seed=9)


def test_hw_bound_formula():
    assert hw_bound(2, 972, Fraction(1, 2)) == pytest.approx(
        math.exp(-2 * 972 / 8) + 0.5**0.5
    )
    assert hw_bound(4, 1, 0) == pytest.approx(math.exp(-0.5))
    with pytest.raises(ParameterError):
        hw_bound(0, 5, 0.5)
    with pytest.raises(ParameterError):
        hw_bound(2, 2, 1.5)


def test_min_bound_picks_smaller_term():
    # tiny N: the complete-graph term dominates from below
    small = min_bound(2, Fraction(1, 2), 1, 1)
    assert small == pytest.approx(2.0**-1 + 0.5)
    # r = 2 keeps d_f below d_f^(1/2), so the complete-graph term still wins
    big = min_bound(81, Fraction(1, 2), 2, 972)
    assert big == pytest.approx(0.5)
    # r >= 4 pushes d_f^(r/4) below d_f and the matching-graph term takes over
    hw = min_bound(4, Fraction(9, 10), 8, 4)
    assert hw == pytest.approx(hw_bound(8, 4, Fraction(9, 10)))
    assert hw < 2.0 ** -float(math.comb(4, 2)) + 0.9


def test_load_table(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("0110\n")
    f = load_table(path, 2)
    assert list(f.table) == [0, 1, 1, 0]
    path.write_text("01\n")
    with pytest.raises(ParameterError):
        load_table(path, 2)


def test_random_function_deterministic():
    assert list(random_function(5, 77).table) == list(random_function(5, 77).table)
