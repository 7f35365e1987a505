"""Pattern graphs: ladders, cycles, paths and pathwidth-2 outerplanar triangulations.

A PW2 graph is stored with its split into two induced paths. With the path
orders fixed (x_1..x_{n1} and y_1..y_{n2}) the cross edges, sorted, form a
zipper from (x_1, y_1) to (x_{n1}, y_{n2}) where each step advances exactly
one of the two paths. That zipper condition is equivalent to the graph being
an outerplanar triangulation whose outer cycle is x_1..x_{n1}, y_{n2}..y_1.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NotOuterplanar, NotPW2, PW2Violation


def _norm(e) -> tuple[int, int]:
    a, b = int(e[0]), int(e[1])
    if a == b:
        raise ValueError(f"self-loop at {a}")
    return (a, b) if a < b else (b, a)


class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    def __init__(self, n: int, edges: Iterable = ()):
        self.n = int(n)
        self.adj: list[set[int]] = [set() for _ in range(self.n)]
        es = set()
        for e in edges:
            a, b = _norm(e)
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge {e} out of range for n={n}")
            es.add((a, b))
            self.adj[a].add(b)
            self.adj[b].add(a)
        self.edges: frozenset = frozenset(es)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adj[a]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vs: Sequence[int]) -> set:
        s = set(vs)
        return {e for e in self.edges if e[0] in s and e[1] in s}

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex v becomes perm[v]."""
        return Graph(self.n, [(perm[a], perm[b]) for a, b in self.edges])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen, stack = {0}, [0]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def ladder_graph(rungs: int) -> Graph:
    """L_{2n}: x_i = i, y_i = n + i, paths on each side plus rungs x_i y_i."""
    n = rungs
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(n + i, n + i + 1) for i in range(n - 1)]
    edges += [(i, n + i) for i in range(n)]
    return Graph(2 * n, edges)


def induced_path_order(g: Graph, vs: Sequence[int]) -> list[int] | None:
    """The vertices of ``vs`` in path order if they induce a path, else None."""
    vs = list(vs)
    if not vs:
        return None
    if len(vs) == 1:
        return vs
    s = set(vs)
    nb = {v: [w for w in g.adj[v] if w in s] for v in vs}
    if len(g.induced(vs)) != len(vs) - 1:
        return None
    ends = sorted(v for v in vs if len(nb[v]) == 1)
    if len(ends) != 2 or any(len(nb[v]) > 2 for v in vs):
        return None
    order, prev = [ends[0]], None
    while len(order) < len(vs):
        nxt = [w for w in nb[order[-1]] if w != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


@dataclass
class StemDecomposition:
    stem_u: list  # u_1..u_{l-1}
    stem_v: list  # v_1..v_l
    U: list  # U_1..U_{l-1}, consecutive subpaths of path_u
    Q: list  # Q_1..Q_{l-1}, leaves of path_v between v_i and v_{i+1}

    @property
    def ell(self) -> int:
        return len(self.stem_v)

    @property
    def f(self) -> list[int]:
        return [len(q) for q in self.Q]

    def stem_path(self) -> list[int]:
        out = []
        for i, v in enumerate(self.stem_v):
            out.append(v)
            if i < len(self.stem_u):
                out.append(self.stem_u[i])
        return out


@dataclass
class PW2Graph:
    """A member of PW2(n) with its two ordered induced paths."""

    graph: Graph
    path_u: list
    path_v: list
    stem: StemDecomposition | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edges(self):
        return self.graph.edges

    def cross_edges(self) -> list[tuple[int, int]]:
        """Cross edges as (i, j) index pairs into path_u and path_v, sorted."""
        pu = {v: i for i, v in enumerate(self.path_u)}
        pv = {v: j for j, v in enumerate(self.path_v)}
        out = []
        for a, b in self.graph.edges:
            if a in pu and b in pv:
                out.append((pu[a], pv[b]))
            elif b in pu and a in pv:
                out.append((pu[b], pv[a]))
        return sorted(out)

    def to_dict(self) -> dict:
        d = self.graph.to_dict()
        d["split"] = {"u": list(self.path_u), "v": list(self.path_v)}
        return d


@dataclass
class HostedPattern:
    """A pattern graph G together with a host G' in PW2(n) on the same vertex labels."""

    pattern: Graph
    host: PW2Graph

    def __post_init__(self):
        if self.pattern.n != self.host.n or not self.pattern.edges <= self.host.edges:
            raise ValueError("pattern must be a spanning subgraph of its host")

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def edges(self):
        return self.pattern.edges

    def to_dict(self) -> dict:
        d = self.pattern.to_dict()
        if self.pattern.edges != self.host.edges:
            d["host"] = self.host.to_dict()
        else:
            d["split"] = self.host.to_dict()["split"]
        return d


def _zipper_ok(cross: list, n1: int, n2: int) -> bool:
    if not cross or cross[0] != (0, 0) or cross[-1] != (n1 - 1, n2 - 1):
        return False
    for (i, j), (i2, j2) in zip(cross, cross[1:]):
        if (i2 - i, j2 - j) not in ((1, 0), (0, 1)):
            return False
    return len(cross) == n1 + n2 - 1


def stem_decomposition(g: Graph, path_u: list, path_v: list) -> StemDecomposition:
    """Greedy stem: from y_1, always jump to the largest neighbour in the other path."""
    pu = {v: i for i, v in enumerate(path_u)}
    pv = {v: j for j, v in enumerate(path_v)}
    n2 = len(path_v)
    stem_u, stem_v = [], [path_v[0]]
    cur = path_v[0]
    while pv[cur] != n2 - 1:
        xs = [pu[w] for w in g.adj[cur] if w in pu]
        if not xs:
            raise PW2Violation("stem", f"stem vertex {cur} has no neighbour in path_u")
        u = path_u[max(xs)]
        ys = [pv[w] for w in g.adj[u] if w in pv]
        nxt = path_v[max(ys)]
        if pv[nxt] <= pv[cur]:
            raise PW2Violation("stem", "greedy stem does not advance")
        stem_u.append(u)
        stem_v.append(nxt)
        cur = nxt
    ell = len(stem_v)
    U, start = [], 0
    for i in range(ell - 1):
        end = len(path_u) if i == ell - 2 else pu[stem_u[i]] + 1
        U.append(list(path_u[start:end]))
        start = end
    Q = [list(path_v[pv[stem_v[i]] + 1 : pv[stem_v[i + 1]]]) for i in range(ell - 1)]
    return StemDecomposition(stem_u, stem_v, U, Q)


def validate_pw2(g: Graph, V_u: Sequence[int], V_v: Sequence[int]) -> PW2Graph:
    """Check the split and return the oriented PW2 graph with its stem.

    Raises PW2Violation naming the first failed invariant.
    """
    V_u, V_v = list(V_u), list(V_v)
    if set(V_u) & set(V_v) or set(V_u) | set(V_v) != set(range(g.n)) or len(V_u) + len(V_v) != g.n:
        raise PW2Violation("partition", "V_u and V_v must partition the vertex set")
    if g.n < 3:
        raise PW2Violation("edge_count", "a triangulation needs at least 3 vertices")
    ou = induced_path_order(g, V_u)
    if ou is None:
        raise PW2Violation("induced_path_u", "G[V_u] is not a path")
    ov = induced_path_order(g, V_v)
    if ov is None:
        raise PW2Violation("induced_path_v", "G[V_v] is not a path")
    if len(g.edges) != 2 * g.n - 3:
        raise PW2Violation("edge_count", f"{len(g.edges)} edges, a triangulation on {g.n} vertices has {2 * g.n - 3}")
    if len(ov) == 1:
        # the stem needs at least two vertices on path_v
        ou, ov = ov, ou
    for pu, pv in itertools.product((ou, ou[::-1]), (ov, ov[::-1])):
        cand = PW2Graph(g, list(pu), list(pv))
        cross = cand.cross_edges()
        if _zipper_ok(cross, len(pu), len(pv)):
            break
    else:
        raise PW2Violation("triangulation", "cross edges do not form a monotone zipper between the paths")
    stem = stem_decomposition(g, cand.path_u, cand.path_v)
    stem_set = set(stem.stem_u) | set(stem.stem_v)
    for v in range(g.n):
        if v in stem_set:
            continue
        other = set(cand.path_v) if v in set(cand.path_u) else set(cand.path_u)
        k = len(g.adj[v] & other)
        if k != 1:
            raise PW2Violation("leaf_degree", f"leaf {v} has {k} neighbours across")
    cand.stem = stem
    return cand


def outer_cycle(g: Graph) -> list[int]:
    """The Hamiltonian outer cycle of an outerplanar triangulation.

    Raises NotOuterplanar when the graph is not one.
    """
    n = g.n
    if n < 3 or len(g.edges) != 2 * n - 3:
        raise NotOuterplanar(f"{len(g.edges)} edges on {n} vertices is not a maximal outerplanar count")
    tri = {e: len(g.adj[e[0]] & g.adj[e[1]]) for e in g.edges}
    boundary = [e for e, t in tri.items() if t == 1]
    if n == 3:
        boundary = list(g.edges)
    if len(boundary) != n or any(t not in (1, 2) for t in tri.values()):
        raise NotOuterplanar("edge/triangle incidences are not those of an outerplanar triangulation")
    badj = {v: [] for v in range(n)}
    for a, b in boundary:
        badj[a].append(b)
        badj[b].append(a)
    if any(len(x) != 2 for x in badj.values()):
        raise NotOuterplanar("boundary edges do not form a cycle")
    cyc, prev = [0], None
    while len(cyc) < n:
        nxt = [w for w in badj[cyc[-1]] if w != prev]
        prev = cyc[-1]
        cyc.append(nxt[0] if nxt[0] != prev else nxt[1])
        if cyc[-1] == 0:
            raise NotOuterplanar("boundary edges form several cycles")
    pos = {v: i for i, v in enumerate(cyc)}
    chords = [tuple(sorted((pos[a], pos[b]))) for a, b in g.edges if (a, b) not in set(boundary)]
    for (a, b), (c, d) in itertools.combinations(chords, 2):
        if a < c < b < d or c < a < d < b:
            raise NotOuterplanar("two chords cross in the outer cycle order")
    return cyc


def find_pw2_split(g: Graph) -> tuple[list[int], list[int]]:
    """A split (V_u, V_v) into two induced paths, or NotPW2.

    Both paths are arcs of the unique outer cycle, so every arc is tried.
    """
    cyc = outer_cycle(g)
    n = g.n
    for length in range(1, n):
        for start in range(n):
            arc = [cyc[(start + t) % n] for t in range(length)]
            rest = [cyc[(start + length + t) % n] for t in range(n - length)]
            try:
                validate_pw2(g, arc, rest)
            except PW2Violation:
                continue
            return arc, rest
    raise NotPW2("no split of the outer cycle into two induced paths")


def pw2_from_zipper(n1: int, n2: int, steps: Sequence[str]) -> PW2Graph:
    """Build the PW2 graph whose cross edges follow ``steps`` ('x' or 'y' advances)."""
    xs = list(range(n1))
    ys = list(range(n1, n1 + n2))
    edges = [(xs[i], xs[i + 1]) for i in range(n1 - 1)] + [(ys[j], ys[j + 1]) for j in range(n2 - 1)]
    i = j = 0
    edges.append((xs[0], ys[0]))
    for s in steps:
        if s == "x":
            i += 1
        else:
            j += 1
        edges.append((xs[i], ys[j]))
    if (i, j) != (n1 - 1, n2 - 1):
        raise ValueError("zipper steps do not reach the last pair")
    return validate_pw2(Graph(n1 + n2, edges), xs, ys)


def make_ladder(rungs: int) -> HostedPattern:
    """L_{2n} as a pattern inside the PW2(2n) host with diagonals x_i y_{i+1}."""
    if rungs < 1:
        raise ValueError("a ladder needs at least one rung")
    pattern = ladder_graph(rungs)
    if rungs == 1:
        # a single edge is below triangulation size; it hosts itself
        return HostedPattern(pattern, PW2Graph(pattern, [0], [1]))
    host = pw2_from_zipper(rungs, rungs, ["y", "x"] * (rungs - 1))
    return HostedPattern(pattern, host)


def random_pw2(n: int, seed: int | None = None, scramble: bool = False) -> PW2Graph:
    """A random member of PW2(n) from a random zipper between two paths."""
    if n < 3:
        raise ValueError("PW2 graphs need n >= 3")
    rng = random.Random(seed)
    n1 = rng.randint(1, n - 2)
    n2 = n - n1
    steps = ["x"] * (n1 - 1) + ["y"] * (n2 - 1)
    rng.shuffle(steps)
    g = pw2_from_zipper(n1, n2, steps)
    if not scramble:
        return g
    perm = list(range(n))
    rng.shuffle(perm)
    h = g.graph.relabel(perm)
    return validate_pw2(h, [perm[v] for v in g.path_u], [perm[v] for v in g.path_v])


def random_subpattern(host: PW2Graph, seed: int | None = None, drop: int = 1) -> HostedPattern:
    """The host minus ``drop`` random edges, kept as a hosted pattern."""
    rng = random.Random(seed)
    es = host.graph.sorted_edges()
    rng.shuffle(es)
    keep = es[drop:]
    return HostedPattern(Graph(host.n, keep), host)


def as_hosted(obj) -> HostedPattern:
    if isinstance(obj, HostedPattern):
        return obj
    if isinstance(obj, PW2Graph):
        return HostedPattern(obj.graph, obj)
    if isinstance(obj, Graph):
        u, v = find_pw2_split(obj)
        return HostedPattern(obj, validate_pw2(obj, u, v))
    raise TypeError(f"cannot host {type(obj).__name__}")


# --- file format -------------------------------------------------------------


def graph_from_dict(data: dict):
    """Graph, PW2Graph or HostedPattern depending on the keys present."""
    g = Graph(int(data["n"]), data["edges"])
    if "host" in data:
        host = graph_from_dict(data["host"])
        if not isinstance(host, PW2Graph):
            host = as_hosted(host).host
        return HostedPattern(g, host)
    if "split" in data:
        return validate_pw2(g, data["split"]["u"], data["split"]["v"])
    return g


def load_graph(path):
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def dump_graph(obj, path, extra: dict | None = None) -> None:
    data = obj.to_dict()
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh, separators=(",", ":"))
