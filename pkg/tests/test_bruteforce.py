import itertools
import json

import numpy as np
import pytest

from georamsey.bruteforce import (
    _contains_batch,
    canonical_block,
    coloring_from_bits,
    contains_mono_noncrossing,
    edge_index,
    exact_convex_ramsey,
    noncrossing_masks,
    orbit_accounting,
    ramsey_value,
    search_N,
    verify_extractor_against_oracle,
)
from georamsey.colorings import BLUE, RED, ExplicitColoring, constant_coloring, gen_cycle_lower_bound
from georamsey.errors import BudgetExceeded, SizeTooSmall
from georamsey.extractors.ladder import convex_ladder_extract
from georamsey.geometry import PointSet, gen_convex
from georamsey.graphs import cycle_graph, ladder_graph, path_graph
from georamsey.witness import Embedding


def _explicit(col):
    return ExplicitColoring.from_coloring(col)


def test_examples():
    found, w = contains_mono_noncrossing(_explicit(constant_coloring(3, RED)), path_graph(3))
    assert found and w.color is RED
    found, _ = contains_mono_noncrossing(_explicit(gen_cycle_lower_bound(4, certify=False)), cycle_graph(4))
    assert not found
    found, w = contains_mono_noncrossing(_explicit(constant_coloring(4, BLUE)), ladder_graph(2))
    assert found and w.color is BLUE
    # the only non-crossing 4-cycle on a convex quadrilateral is its boundary
    img = {tuple(sorted(e)) for e in w.edge_images()}
    assert img == {(0, 1), (1, 2), (2, 3), (0, 3)}


def _slow(col, pattern, N):
    for c in (RED, BLUE):
        for perm in itertools.permutations(range(N), pattern.n):
            edges = [tuple(sorted((perm[a], perm[b]))) for a, b in pattern.edges]
            if not all(col.color(a, b) is c for a, b in edges):
                continue
            ok = True
            for (a, b), (p, q) in itertools.combinations(edges, 2):
                if len({a, b, p, q}) == 4 and (a < p < b < q or p < a < q < b):
                    ok = False
                    break
            if ok:
                return True
    return False


def test_fast_paths_agree_with_slow_enumeration():
    rng = np.random.default_rng(3)
    for pattern in (path_graph(4), cycle_graph(4), ladder_graph(2)):
        for N in (5, 6):
            masks = noncrossing_masks(pattern, N)
            for _ in range(25):
                bits = int(rng.integers(0, 1 << (N * (N - 1) // 2)))
                col = coloring_from_bits(N, bits)
                expect = _slow(col, pattern, N)
                assert contains_mono_noncrossing(col, pattern)[0] == expect
                assert contains_mono_noncrossing(col, pattern, prune=False)[0] == expect
                assert bool(_contains_batch(np.array([bits], dtype=np.uint64), masks)[0]) == expect


def test_general_position_points():
    P = PointSet([(0, 0), (10, 0), (5, 10), (5, 3)])
    found, w = contains_mono_noncrossing(_explicit(constant_coloring(4, RED)), cycle_graph(4), P)
    assert found


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_orbit_accounting(N):
    covered, total = orbit_accounting(N)
    assert covered == total


def test_canonical_block_small():
    reps, orbit = canonical_block(0, 8, 3)
    # triangles up to rotation, reflection and swap: 0 or 1 red edges
    assert sorted(reps.tolist()) == [0, 1] and sorted(orbit.tolist()) == [2, 6]


@pytest.mark.parametrize("k,value", [(3, 3), (4, 5)])
def test_path_values(k, value):
    reps = exact_convex_ramsey(path_graph(k), 2 * k - 4, 2 * k - 3)
    assert ramsey_value(reps) == value == 2 * k - 3
    lo, hi = reps
    assert lo.verdict == "CounterexampleColoring"
    assert not contains_mono_noncrossing(lo.counterexample, path_graph(k), prune=False)[0]
    assert hi.verdict == "AllColoringsContain" and hi.orbit_total == 1 << (hi.N * (hi.N - 1) // 2)


def test_checkpoint_resume(tmp_path):
    pattern = path_graph(4)
    full = search_N(pattern, 5)
    with pytest.raises(BudgetExceeded) as e:
        search_N(pattern, 5, budget=100, block=64)
    cp = e.value.checkpoint
    assert cp["version"] == 1 and 0 < cp["next"] < 1 << 10
    assert e.value.report.verdict == "Partial"
    path = tmp_path / "cp.json"
    path.write_text(json.dumps(cp))
    resumed = search_N(pattern, 5, checkpoint=json.loads(path.read_text()), block=64)
    assert resumed.verdict == full.verdict
    assert resumed.orbit_total == full.orbit_total and resumed.colorings_examined == full.colorings_examined
    with pytest.raises(ValueError):
        search_N(path_graph(3), 5, checkpoint=cp)
    with pytest.raises(ValueError):
        search_N(pattern, 6, checkpoint=cp)


def test_report_dict():
    rep = search_N(path_graph(3), 2)
    d = rep.to_dict()
    assert d["verdict"] == "CounterexampleColoring" and "counterexample" in d


def _ladder_extractor(C):
    def run(col):
        return convex_ladder_extract(C, 2, col)

    return run


def test_agreement_monochromatic():
    C = gen_convex(12)
    rep = verify_extractor_against_oracle(_ladder_extractor(C), ladder_graph(2), C, [constant_coloring(12, RED), constant_coloring(12, BLUE)])
    assert rep.ok and rep.successes == 2


def test_agreement_detects_bad_extractor(tmp_path):
    C = gen_convex(6)
    pattern = path_graph(3)
    col = constant_coloring(6, BLUE)

    def liar(_):
        return Embedding(pattern, {0: 0, 1: 1, 2: 2}, RED)

    def refuses(_):
        raise SizeTooSmall("demo")

    rep = verify_extractor_against_oracle(liar, pattern, C, [col], dump_dir=str(tmp_path))
    assert not rep.ok and "color" in rep.discrepancies[0][1]
    assert (tmp_path / "discrepancy_0.json").exists()
    rep = verify_extractor_against_oracle(refuses, pattern, C, [col])
    assert rep.ok and rep.size_failures == 1


def test_edge_index():
    idx = edge_index(4)
    assert len(idx) == 6 and idx[(0, 1)] == 0 and idx[(2, 3)] == 5
