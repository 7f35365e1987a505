import itertools
import json
import shutil
import subprocess
import sys

import pytest

from georamsey.cli import main
from georamsey.colorings import ExplicitColoring, dump_coloring, load_coloring
from georamsey.geometry import load_points, segments_cross


def run(*argv):
    return main([str(a) for a in argv])


def _events(capsys):
    err = capsys.readouterr().err
    return [json.loads(line) for line in err.splitlines() if line.strip()]


@pytest.fixture
def files(tmp_path):
    d = tmp_path
    assert run("gen", "points", "--mode", "convex", "--count", 256, "--seed", 7, "--out", d / "convex256.json") == 0
    assert run("gen", "coloring", "--n", 256, "--seed", 7, "--out", d / "random_seed7.json") == 0
    return d


def test_gen_points_and_graphs(files, capsys):
    d = files
    assert run("gen", "points", "--mode", "convex", "--count", 256, "--seed", 7, "--out", d / "again.json") == 0
    assert load_points(d / "again.json").to_list() == load_points(d / "convex256.json").to_list()
    P = load_points(d / "convex256.json")
    assert len(P) == 256 and P.is_convex
    assert any(e.get("position") == "CONVEX" for e in _events(capsys))
    assert run("gen", "graph", "--ladder", 4, "--out", d / "L8.json") == 0
    data = json.loads((d / "L8.json").read_text())
    assert data["n"] == 8 and "host" in data
    assert (d / "L8.json.manifest.json").exists()
    assert run("gen", "coloring", "--kind", "cycle-lower-bound", "--cycle", 4, "--out", d / "lb.json") == 0
    assert load_coloring(d / "lb.json").n == 9


def test_bad_flags_exit_2(tmp_path, capsys):
    assert run("gen", "graph", "--out", tmp_path / "g.json") == 2
    assert run("gen", "coloring", "--kind", "mystery", "--n", 3, "--out", tmp_path / "c.json") == 2
    assert run("search", "--pattern", "star:3", "--range", "3..4") == 2
    with pytest.raises(SystemExit) as e:
        main(["gen", "points", "--mode", "spiral", "--out", "x"])
    assert e.value.code == 2


def test_extract_ladder_then_verify(files, capsys):
    d = files
    rc = run("extract", "ladder", "--n", 2, "--points", d / "convex256.json", "--coloring", d / "random_seed7.json", "--out", d / "w.json", "--svg", d / "w.svg")
    assert rc == 0
    ev = [e for e in _events(capsys) if e["event"] == "extracted"][0]
    assert ev["queries"] > 0
    assert run("verify", "--witness", d / "w.json", "--coloring", d / "random_seed7.json", "--points", d / "convex256.json") == 0
    assert (d / "w.svg").read_text().startswith("<svg")


def test_reruns_are_byte_identical(files):
    d = files
    args = ["extract", "ladder", "--n", 2, "--points", d / "convex256.json", "--coloring", d / "random_seed7.json", "--out", d / "w.json", "--svg", d / "w.svg"]
    assert run(*args) == 0
    first = (d / "w.json").read_bytes(), (d / "w.svg").read_bytes()
    m1 = json.loads((d / "w.json.manifest.json").read_text())["hash"]
    assert run(*args) == 0
    assert ((d / "w.json").read_bytes(), (d / "w.svg").read_bytes()) == first
    assert json.loads((d / "w.json.manifest.json").read_text())["hash"] == m1
    assert json.loads((d / "w.json").read_text())["manifest"] == m1


def test_injected_colour_fault(files, capsys):
    d = files
    run("gen", "coloring", "--kind", "seeded-random", "--n", 256, "--seed", 7, "--out", d / "c.json")
    explicit = ExplicitColoring.from_coloring(load_coloring(d / "c.json"))
    dump_coloring(explicit, d / "explicit.json")
    assert run("extract", "ladder", "--n", 2, "--points", d / "convex256.json", "--coloring", d / "explicit.json", "--out", d / "w.json") == 0
    w = json.loads((d / "w.json").read_text())
    a, b = w["pattern"]["edges"][0]
    img = dict(w["map"])
    p, q = img[a], img[b]
    explicit.table[p, q] = explicit.table[q, p] = not explicit.table[p, q]
    dump_coloring(explicit, d / "faulty.json")
    capsys.readouterr()
    assert run("verify", "--witness", d / "w.json", "--coloring", d / "faulty.json", "--points", d / "convex256.json") == 1
    assert capsys.readouterr().out.strip() == "color mismatch"


def _crossing_swap(w, P):
    img = dict(w["map"])
    edges = w["pattern"]["edges"]
    for u, v in itertools.combinations(sorted(img), 2):
        m = dict(img)
        m[u], m[v] = m[v], m[u]
        for (a, b), (c, e) in itertools.combinations(edges, 2):
            if len({a, b, c, e}) == 4 and segments_cross(P[m[a]], P[m[b]], P[m[c]], P[m[e]]):
                return m
    raise AssertionError("no swap creates a crossing")


def test_injected_crossing_fault(files, capsys):
    d = files
    run("gen", "coloring", "--kind", "all-red", "--n", 256, "--out", d / "red.json")
    assert run("extract", "ladder", "--n", 2, "--points", d / "convex256.json", "--coloring", d / "red.json", "--out", d / "w.json") == 0
    w = json.loads((d / "w.json").read_text())
    w["map"] = sorted([k, v] for k, v in _crossing_swap(w, load_points(d / "convex256.json")).items())
    (d / "bad.json").write_text(json.dumps(w))
    capsys.readouterr()
    assert run("verify", "--witness", d / "bad.json", "--coloring", d / "red.json", "--points", d / "convex256.json") == 1
    assert capsys.readouterr().out.strip() == "crossing"


def test_extract_below_bound_exit_3(tmp_path, capsys):
    run("gen", "points", "--count", 6, "--out", tmp_path / "p.json")
    run("gen", "coloring", "--n", 6, "--seed", 1, "--out", tmp_path / "c.json")
    assert run("extract", "ladder", "--n", 2, "--points", tmp_path / "p.json", "--coloring", tmp_path / "c.json", "--out", tmp_path / "w.json") == 3
    err = [e for e in _events(capsys) if e["event"] == "error"][0]
    assert err["type"] == "size_too_small" and err["stage"]


def test_extract_ordered_and_pw2(tmp_path):
    d = tmp_path
    run("gen", "coloring", "--n", 64, "--seed", 3, "--out", d / "seeded64.json")
    assert run("extract", "ordered", "--n", 4, "--m", 4, "--perm", "2,0,3,1", "--coloring", d / "seeded64.json", "--out", d / "o.json") == 0
    assert run("verify", "--witness", d / "o.json", "--coloring", d / "seeded64.json") == 0
    assert run("extract", "ordered", "--n", 4, "--m", 3, "--perm", "2,0,3,1", "--coloring", d / "seeded64.json", "--out", d / "o.json") == 2
    run("gen", "graph", "--pw2", 4, "--drop", 1, "--seed", 2, "--out", d / "g.json")
    run("gen", "points", "--count", 30000, "--out", d / "big.json")
    run("gen", "coloring", "--n", 30000, "--seed", 5, "--out", d / "big_c.json")
    assert run("extract", "pw2", "--n", 4, "--graph", d / "g.json", "--points", d / "big.json", "--coloring", d / "big_c.json", "--out", d / "p.json") == 0
    assert run("verify", "--witness", d / "p.json", "--coloring", d / "big_c.json", "--points", d / "big.json") == 0


def test_search_and_checkpoint(tmp_path, capsys):
    d = tmp_path
    assert run("search", "--pattern", "path:4", "--range", "4..5", "--out", d) == 0
    ev = [e for e in _events(capsys) if e["event"] == "ramsey_value"]
    assert ev and ev[0]["value"] == 5
    rep = json.loads((d / "search_path4_N4.json").read_text())
    assert rep["verdict"] == "CounterexampleColoring"
    assert run("search", "--pattern", "path:3", "--range", "3..3", "--out", d) == 0
    assert json.loads((d / "search_path3_N3.json").read_text())["verdict"] == "AllColoringsContain"
    cp = d / "cp.json"
    assert run("search", "--pattern", "path:4", "--range", "5..5", "--budget", 100, "--checkpoint", cp, "--out", d / "r") == 2
    assert json.loads(cp.read_text())["version"] == 1
    assert run("search", "--pattern", "path:4", "--range", "5..5", "--checkpoint", cp, "--out", d / "r") == 0
    assert json.loads((d / "r" / "search_path4_N5.json").read_text())["verdict"] == "AllColoringsContain"


def test_search_verify_lb(tmp_path):
    assert run("search", "--pattern", "cycle:4", "--verify-lb", "--out", tmp_path) == 0
    data = json.loads((tmp_path / "cycle4_lower_bound.json").read_text())
    assert data["certified"] is True


@pytest.mark.skipif(shutil.which("georamsey") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = subprocess.run(["georamsey", "gen", "graph", "--path", "4", "--out", str(tmp_path / "p.json")], capture_output=True, text=True)
    assert out.returncode == 0
    out = subprocess.run([sys.executable, "-m", "georamsey.cli", "verify", "--witness", str(tmp_path / "nope.json"), "--coloring", "x"], capture_output=True, text=True)
    assert out.returncode == 2 and json.loads(out.stderr.splitlines()[-1])["event"] == "error"


def test_report_writes_table_and_figure(tmp_path, capsys):
    assert run("report", "search", "--pattern", "path:3", "--range", "2..3", "--out", tmp_path) == 0
    assert (tmp_path / "search.csv").exists() and (tmp_path / "search.png").exists()
    assert capsys.readouterr().out.startswith("N,verdict")
    assert run("report", "ladder", "--n", "2", "--seeds", 2, "--out", tmp_path) == 0
    rows = (tmp_path / "ladder.csv").read_text().splitlines()
    assert len(rows) == 3 and rows[1].split(",")[4] == "1"
