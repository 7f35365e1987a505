"""Ordered graphs and the clique-or-path recursion for ordered Ramsey numbers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .colorings import BLUE, RED, Coloring
from .errors import SizeTooSmall
from .extractors.lemmas import BicliqueResult, longpath_or_biclique
from .graphs import Graph, complete_graph
from .witness import OrderedWitness


def _clog2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def ordered_bound(n: int, m: int) -> int:
    """2^(ceil(log2 n) * (ceil(log2 m) + 1)); equals 1 for n = 1."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return 2 ** (_clog2(n) * (_clog2(m) + 1))


@dataclass(frozen=True)
class OrderedPathSpec:
    """Ordered path on p_0 < ... < p_{m-1} with edges p_perm[i] p_perm[i+1]."""

    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{list(self.perm)} is not a permutation of 0..{len(self.perm) - 1}")

    @property
    def m(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, m: int) -> "OrderedPathSpec":
        return cls(tuple(range(m)))

    def graph(self) -> Graph:
        return Graph(self.m, [(self.perm[i], self.perm[i + 1]) for i in range(self.m - 1)])


def _recurse(V: list[int], k: int, spec: OrderedPathSpec, oracle: Coloring, M: int):
    """Blue clique on 2^k vertices of V, or a red copy of the ordered path."""
    if k == 0:
        if not V:
            raise SizeTooSmall("ordered", "empty interval")
        return "clique", [V[0]]
    m = spec.m
    if m == 1:
        return "path", {0: V[0]}
    size = len(V) // M
    if size < 1:
        raise SizeTooSmall("ordered", f"{len(V)} vertices cannot form {M} intervals")
    intervals = [V[j * size : (j + 1) * size] for j in range(m)]
    intervals[-1] = V[(m - 1) * size :]
    blocks = [intervals[spec.perm[i]] for i in range(m)]
    res = longpath_or_biclique(blocks, oracle, RED)
    if not isinstance(res, BicliqueResult):
        return "path", {spec.perm[i]: res.vertices[i] for i in range(m)}
    parts = []
    for side in (sorted(res.left), sorted(res.right)):
        kind, val = _recurse(side, k - 1, spec, oracle, M)
        if kind == "path":
            return kind, val
        parts.append(val)
    return "clique", sorted(parts[0] + parts[1])


def find_clique_or_path(R: int, n: int, spec: OrderedPathSpec, oracle: Coloring, vertices: Sequence[int] | None = None) -> OrderedWitness:
    """Blue ordered K_n or red ordered P_m among the first R vertices.

    Guaranteed when R >= ordered_bound(n, m); below it the recursion may run
    out of vertices and raises SizeTooSmall.
    """
    V = list(vertices) if vertices is not None else list(range(R))
    k = _clog2(n)
    M = 2 ** _clog2(spec.m)
    kind, val = _recurse(V, k, spec, oracle, M)
    if kind == "path":
        return OrderedWitness(spec.graph(), dict(val), RED)
    clique = val[:n]
    return OrderedWitness(complete_graph(n), {i: v for i, v in enumerate(clique)}, BLUE)


def path_vs_path(n: int, spec: OrderedPathSpec, oracle: Coloring, R: int | None = None) -> OrderedWitness:
    """A monochromatic copy of the ordered path; a blue clique hosts it directly."""
    if spec.m != n:
        raise ValueError("path_vs_path needs an ordered path on n vertices")
    R = oracle.n if R is None else R
    w = find_clique_or_path(R, n, spec, oracle)
    if w.color is RED:
        return w
    return OrderedWitness(spec.graph(), {j: w.mapping[j] for j in range(n)}, BLUE)


def contains_ordered(H: Graph, G: Graph) -> bool:
    """Whether G maps into H by an order- and edge-preserving injection."""
    if G.n > H.n:
        return False
    back = [sorted(w for w in G.adj[v] if w < v) for v in range(G.n)]
    img: list[int] = []

    def extend(v: int, start: int) -> bool:
        if v == G.n:
            return True
        # leave room for the remaining vertices
        for h in range(start, H.n - (G.n - v) + 1):
            if all(H.has_edge(img[u], h) for u in back[v]):
                img.append(h)
                if extend(v + 1, h + 1):
                    return True
                img.pop()
        return False

    return extend(0, 0)


def ordered_ladder(n: int) -> Graph:
    """L_{2n} ordered v_1 < ... < v_n < u_n < ... < u_1 (v_i = i, u_i = 2n-1-i)."""
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(2 * n - 1 - i, 2 * n - 2 - i) for i in range(n - 1)]
    edges += [(i, 2 * n - 1 - i) for i in range(n)]
    return Graph(2 * n, edges)


def image_graph(pattern: Graph, mapping: dict) -> Graph:
    """The image of an embedding as an ordered graph on its sorted point indices."""
    pts = sorted(mapping.values())
    rank = {p: i for i, p in enumerate(pts)}
    return Graph(len(pts), [(rank[mapping[a]], rank[mapping[b]]) for a, b in pattern.edges])
