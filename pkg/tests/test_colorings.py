import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from georamsey.colorings import (
    BLUE,
    RED,
    ColorCounter,
    EdgeColor,
    ExplicitColoring,
    SeededColoring,
    SwappedColoring,
    audit_oracle,
    constant_coloring,
    coloring_to_dict,
    dump_coloring,
    gen_cycle_lower_bound,
    load_coloring,
    majority_color,
    neighbours,
    oriented,
    red_neighbours,
    restrict,
)


def test_edge_color():
    assert RED.other is BLUE and BLUE.other is RED
    assert EdgeColor.parse("red") is RED and EdgeColor.parse(BLUE) is BLUE


def test_explicit_coloring_basics():
    col = ExplicitColoring(4, [(0, 1), (3, 2)])
    assert col.is_red(1, 0) and col.is_red(2, 3) and not col.is_red(0, 2)
    assert col.color(0, 3) is BLUE
    assert col.red_edges() == [[0, 1], [2, 3]]
    with pytest.raises(ValueError):
        ExplicitColoring(3, [(0, 0)])


@settings(max_examples=30)
@given(st.integers(0, 2**40))
def test_seeded_is_symmetric_and_consistent(seed):
    col = SeededColoring(500, seed)
    rows = np.arange(0, 500, 7)
    cols = np.arange(3, 500, 11)
    m = col.red_matrix(rows, cols)
    assert np.array_equal(m, col.red_matrix(cols, rows).T)
    for a, b in [(0, 3), (7, 14), (490, 3)]:
        assert col.is_red(a, b) == bool(col.red_matrix([a], [b])[0, 0])
    assert audit_oracle(col, 200, seed % 97)


def test_seeded_batches_large_blocks():
    col = SeededColoring(10**6, 9)
    rows = np.arange(3000)
    cols = np.arange(5000, 6000)
    m = col.red_matrix(rows, cols)
    assert m.shape == (3000, 1000)
    assert np.array_equal(m[2999], col.red_matrix([2999], cols)[0])
    assert 0.45 < m.mean() < 0.55


def test_seeds_differ():
    a = SeededColoring(200, 1).red_matrix(range(200), range(200))
    b = SeededColoring(200, 2).red_matrix(range(200), range(200))
    assert not np.array_equal(a, b)


def test_majority_examples():
    assert majority_color(0, [1, 2, 3], constant_coloring(4, RED)) == (RED, 3)
    col = ExplicitColoring(5, [(0, 1), (0, 2)])
    assert majority_color(0, [1, 2, 3, 4], col) == (RED, 2)
    col = SeededColoring(2000, 5)
    c, k = majority_color(0, list(range(1, 1001)), col)
    red = len(red_neighbours(0, range(1, 1001), col))
    assert red + len(neighbours(0, range(1, 1001), col, BLUE)) == 1000
    assert k == max(red, 1000 - red)


def test_red_neighbours_constant():
    S = list(range(1, 10))
    assert red_neighbours(0, S, constant_coloring(10, BLUE)) == []
    assert red_neighbours(0, S, constant_coloring(10, RED)) == S


def test_restrict_laws():
    base = SeededColoring(1000, 3)
    full = restrict(base, range(1000))
    assert np.array_equal(full.red_matrix(range(50), range(50, 100)), base.red_matrix(range(50), range(50, 100)))
    S = np.arange(0, 1000, 3)
    T = np.array([1, 4, 9, 20, 50])
    twice = restrict(restrict(base, S), T)
    once = restrict(base, S[T])
    assert np.array_equal(twice.red_matrix(range(5), range(5)), once.red_matrix(range(5), range(5)))
    sub = list(range(100, 1000, 90))
    r = restrict(base, sub)
    for i, j in itertools.combinations(range(10), 2):
        assert r.is_red(i, j) == base.is_red(sub[i], sub[j])


def test_swapped_and_oriented():
    base = SeededColoring(100, 4)
    sw = SwappedColoring(base)
    m = base.red_matrix(range(10), range(10, 20))
    assert np.array_equal(sw.red_matrix(range(10), range(10, 20)), ~m)
    assert oriented(base, RED) is base
    assert np.array_equal(oriented(oriented(base, BLUE), BLUE).red_matrix(range(10), range(10, 20)), m)


def test_counter():
    base = constant_coloring(50, RED)
    cnt = ColorCounter(base, track_distinct=True)
    cnt.red_matrix(range(5), range(5, 10))
    cnt.is_red(0, 1)
    assert cnt.red == 26 and cnt.blue == 0 and cnt.total == 26
    assert len(cnt.distinct) == 26


@pytest.mark.parametrize("n", [4, 5])
def test_cycle_lower_bound(n):
    col = gen_cycle_lower_bound(n)
    assert col.n == (n - 1) ** 2
    for k in range(col.n):
        for j in range(col.n):
            if j != k:
                assert col.is_red(k, j) == (k // (n - 1) != j // (n - 1))


def test_file_round_trips(tmp_path):
    for col in [ExplicitColoring(5, [(0, 1), (2, 4)]), SeededColoring(77, 8), gen_cycle_lower_bound(4, certify=False), constant_coloring(9, BLUE)]:
        path = tmp_path / "c.json"
        dump_coloring(col, path)
        back = load_coloring(path)
        idx = range(col.n)
        assert np.array_equal(back.red_matrix(idx, idx), col.red_matrix(idx, idx))
    assert load_coloring({"n": 3, "red_edges": [[0, 2]]}).is_red(2, 0)
    assert coloring_to_dict(SeededColoring(5, 1)) == {"n": 5, "kind": "seeded_random", "seed": 1}
    with pytest.raises(ValueError):
        load_coloring({"n": 3, "kind": "mystery"})
