import pytest

from georamsey.colorings import BLUE, RED, ExplicitColoring, constant_coloring
from georamsey.geometry import PointSet, gen_convex, gen_separated
from georamsey.graphs import Graph, cycle_graph, path_graph
from georamsey.svg import render, write_svg
from georamsey.witness import Biclique, Embedding, OrderedWitness, dump_witness, load_witness, verify


def test_embedding_checks():
    C = gen_convex(6)
    red = constant_coloring(6, RED)
    good = Embedding(cycle_graph(4), {0: 0, 1: 1, 2: 2, 3: 3}, RED)
    assert verify(good, C, red) == (True, None)
    assert verify(good, C, constant_coloring(6, BLUE)) == (False, "color mismatch")
    crossed = Embedding(cycle_graph(4), {0: 0, 1: 2, 2: 1, 3: 3}, RED)
    assert verify(crossed, C, red) == (False, "crossing")
    assert verify(crossed, None, red) == (True, None)
    assert verify(Embedding(path_graph(3), {0: 0, 1: 0, 2: 1}, RED), C, red) == (False, "injectivity")
    assert verify(Embedding(path_graph(3), {0: 0, 1: 9, 2: 1}, RED), C, red) == (False, "range")


def test_biclique_checks():
    P = gen_separated(4, 4, 1)
    col = ExplicitColoring(8, [(a, b) for a in range(4) for b in range(4, 8)])
    w = Biclique((0, 1, 2, 3), (4, 5, 6, 7), RED)
    assert verify(w, P, col, min_size=4) == (True, None)
    assert verify(w, P, col, min_size=5) == (False, "size")
    assert verify(Biclique((0, 4), (1, 5), RED), P, col) == (False, "color mismatch")
    # the diagonals of a square cannot be split by a line
    sq = PointSet([(0, 0), (10, 1), (11, 10), (1, 9)])
    assert verify(Biclique((0, 2), (1, 3), RED), sq, constant_coloring(4, RED)) == (False, "separation")


def test_ordered_checks():
    col = constant_coloring(5, RED)
    g = Graph(3, [(0, 2), (2, 1)])
    assert verify(OrderedWitness(g, {0: 0, 1: 2, 2: 4}, RED), None, col) == (True, None)
    assert verify(OrderedWitness(g, {0: 4, 1: 2, 2: 0}, RED), None, col) == (False, "order")


@pytest.mark.parametrize(
    "w",
    [
        Embedding(cycle_graph(4), {0: 0, 1: 1, 2: 2, 3: 3}, RED),
        Biclique((0, 1), (4, 5), BLUE, "well_split"),
        OrderedWitness(path_graph(3), {0: 1, 1: 2, 2: 5}, RED),
    ],
)
def test_round_trip(w, tmp_path):
    dump_witness(w, tmp_path / "w.json", {"manifest": "abc"})
    back = load_witness(tmp_path / "w.json")
    assert back.to_dict() == w.to_dict()


def test_svg_deterministic(tmp_path):
    C = gen_convex(12, 3)
    w = Embedding(cycle_graph(4), {0: 0, 1: 3, 2: 6, 3: 9}, BLUE)
    a = render(w, C, known_red=[(1, 2)])
    assert a == render(w, C, known_red=[(1, 2)])
    assert a.count("<line") == 5 and a.count("<circle") == 12 and "stroke-dasharray" in a
    write_svg(tmp_path / "a.svg", w, C)
    write_svg(tmp_path / "b.svg", w, C)
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    big = gen_convex(3000)
    assert render(w, big).count("<circle") == 4
    with pytest.raises(TypeError):
        render(OrderedWitness(path_graph(2), {0: 0, 1: 1}, RED), C)
