"""Certified extraction results and their independent checkers.

The checkers use only the exact geometric predicates and the raw colouring,
so a witness produced by any pipeline can be re-audited from files alone.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .colorings import Coloring, EdgeColor
from .geometry import PointSet, segments_cross, separating_line
from .graphs import Graph, graph_from_dict


@dataclass
class Embedding:
    """Pattern vertex -> point index, every pattern edge in ``color``."""

    pattern: Graph
    mapping: dict
    color: EdgeColor
    kind: str = field(default="embedding", init=False)

    def image(self, v: int) -> int:
        return self.mapping[v]

    def edge_images(self) -> list[tuple[int, int]]:
        return [(self.mapping[a], self.mapping[b]) for a, b in self.pattern.sorted_edges()]

    def restrict(self, pattern: Graph) -> "Embedding":
        if not pattern.edges <= self.pattern.edges or pattern.n != self.pattern.n:
            raise ValueError("restriction must be to a spanning subgraph")
        return Embedding(pattern, dict(self.mapping), self.color)

    def to_dict(self) -> dict:
        return {
            "kind": "embedding",
            "color": self.color.value,
            "map": [[int(v), int(p)] for v, p in sorted(self.mapping.items())],
            "pattern": self.pattern.to_dict(),
        }


@dataclass
class Biclique:
    """All L x R edges in ``color``; ``certificate`` is 'separable' or 'well_split'."""

    L: tuple
    R: tuple
    color: EdgeColor
    certificate: str = "separable"
    kind: str = field(default="biclique", init=False)

    @property
    def size(self) -> int:
        return min(len(self.L), len(self.R))

    def truncate(self, k: int) -> "Biclique":
        return Biclique(tuple(self.L[:k]), tuple(self.R[:k]), self.color, self.certificate)

    def to_dict(self) -> dict:
        return {
            "kind": "biclique",
            "color": self.color.value,
            "map": {"L": [int(v) for v in self.L], "R": [int(v) for v in self.R]},
            "certificate": self.certificate,
        }


@dataclass
class OrderedWitness:
    """An ordered pattern mapped order-preservingly into the ordered complete graph."""

    pattern: Graph
    mapping: dict
    color: EdgeColor
    kind: str = field(default="ordered", init=False)

    def to_dict(self) -> dict:
        return {
            "kind": "ordered",
            "color": self.color.value,
            "map": [[int(v), int(p)] for v, p in sorted(self.mapping.items())],
            "pattern": self.pattern.to_dict(),
        }


Witness = Embedding | Biclique | OrderedWitness


class CheckFailure(Exception):
    """Raised by the checkers; ``check`` names the failed test."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check
        self.detail = detail


def check_embedding(w: Embedding, points: PointSet | None, oracle: Coloring) -> None:
    images = [w.mapping.get(v) for v in range(w.pattern.n)]
    if any(p is None for p in images):
        raise CheckFailure("injectivity", "some pattern vertex is unmapped")
    if len(set(images)) != len(images):
        raise CheckFailure("injectivity", "two pattern vertices share a point")
    if any(not (0 <= p < oracle.n) for p in images):
        raise CheckFailure("range", "point index outside the colouring")
    for a, b in w.pattern.sorted_edges():
        if not oracle.has_color(images[a], images[b], w.color):
            raise CheckFailure("color mismatch", f"edge {a}-{b} at points {images[a]}-{images[b]}")
    if points is None:
        return
    if any(p >= len(points) for p in images):
        raise CheckFailure("range", "point index outside the point set")
    segs = [(points[images[a]], points[images[b]], a, b) for a, b in w.pattern.sorted_edges()]
    for (p, q, a, b), (r, s, c, d) in itertools.combinations(segs, 2):
        if len({a, b, c, d}) < 4:
            continue
        if segments_cross(p, q, r, s):
            raise CheckFailure("crossing", f"edges {a}-{b} and {c}-{d}")


def check_biclique(w: Biclique, points: PointSet | None, oracle: Coloring, min_size: int = 1) -> None:
    L, R = list(w.L), list(w.R)
    if len(set(L) | set(R)) != len(L) + len(R):
        raise CheckFailure("injectivity", "parts overlap or repeat")
    if min(len(L), len(R)) < min_size:
        raise CheckFailure("size", f"parts {len(L)}x{len(R)} below {min_size}")
    if any(not (0 <= p < oracle.n) for p in L + R):
        raise CheckFailure("range", "vertex outside the colouring")
    m = oracle.color_matrix(L, R, w.color)
    if not m.all():
        i, j = [int(t[0]) for t in (m == 0).nonzero()]
        raise CheckFailure("color mismatch", f"pair {L[i]}-{R[j]}")
    if points is not None and w.certificate in ("separable", "well_split"):
        if separating_line(points, L, R) is None:
            raise CheckFailure("separation", "no line separates the parts")


def check_ordered(w: OrderedWitness, oracle: Coloring) -> None:
    images = [w.mapping.get(v) for v in range(w.pattern.n)]
    if any(p is None for p in images) or len(set(images)) != len(images):
        raise CheckFailure("injectivity", "ordered map is not injective")
    if any(a >= b for a, b in zip(images, images[1:])):
        raise CheckFailure("order", "map does not preserve the vertex order")
    for a, b in w.pattern.sorted_edges():
        if not oracle.has_color(images[a], images[b], w.color):
            raise CheckFailure("color mismatch", f"edge {a}-{b}")


def check_witness(w, points: PointSet | None, oracle: Coloring, min_size: int = 1) -> None:
    if isinstance(w, Embedding):
        check_embedding(w, points, oracle)
    elif isinstance(w, Biclique):
        check_biclique(w, points, oracle, min_size)
    elif isinstance(w, OrderedWitness):
        check_ordered(w, oracle)
    else:
        raise TypeError(f"not a witness: {type(w).__name__}")


def verify(w, points: PointSet | None, oracle: Coloring, min_size: int = 1) -> tuple[bool, str | None]:
    """(True, None) or (False, name of the first failed check)."""
    try:
        check_witness(w, points, oracle, min_size)
    except CheckFailure as exc:
        return False, exc.check
    return True, None


# --- file format -------------------------------------------------------------


def witness_from_dict(data: dict):
    color = EdgeColor.parse(data["color"])
    kind = data["kind"]
    if kind == "biclique":
        return Biclique(tuple(data["map"]["L"]), tuple(data["map"]["R"]), color, data.get("certificate", "separable"))
    pattern = graph_from_dict(data["pattern"])
    pattern = getattr(pattern, "graph", getattr(pattern, "pattern", pattern))
    mapping = {int(v): int(p) for v, p in data["map"]}
    if kind == "embedding":
        return Embedding(pattern, mapping, color)
    if kind == "ordered":
        return OrderedWitness(pattern, mapping, color)
    raise ValueError(f"unknown witness kind {kind!r}")


def load_witness(path):
    with open(path) as fh:
        return witness_from_dict(json.load(fh))


def dump_witness(w, path, extra: dict | None = None) -> None:
    data = w.to_dict()
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh, separators=(",", ":"))
