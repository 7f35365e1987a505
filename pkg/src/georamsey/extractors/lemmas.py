"""Building blocks shared by the extraction pipelines."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

import networkx as nx
import numpy as np

from ..colorings import Coloring, EdgeColor, RED
from ..dilworth import Antichain, chain_or_antichain
from ..errors import InternalContradiction, NotOuterplanar
from ..geometry import AvoidingPair, PointSet, convex_hull, orient
from ..graphs import Graph, HostedPattern, PW2Graph, as_hosted, ladder_graph
from ..witness import Embedding


def survivors(S: Sequence[int], Ts: Sequence[Sequence[int]], t: int) -> list[int]:
    """S minus the union of the T_i, given |S & T_i| <= t for each i.

    The result has at least |S| - t*k elements.
    """
    s = set(S)
    removed = set()
    for i, T in enumerate(Ts):
        hit = s.intersection(T)
        if len(hit) > t:
            raise ValueError(f"|S & T_{i}| = {len(hit)} exceeds t = {t}")
        removed |= hit
    return [v for v in S if v not in removed]


# --- path or biclique ---------------------------------------------------------


@dataclass(frozen=True)
class PathResult:
    vertices: tuple  # one per block, in block order
    color: EdgeColor


@dataclass(frozen=True)
class BicliqueResult:
    index: int  # the biclique joins blocks index and index+1 (0-based)
    left: tuple
    right: tuple
    color: EdgeColor


def longpath_or_biclique(blocks: Sequence[Sequence[int]], oracle: Coloring, color: EdgeColor = RED):
    """A ``color`` path with one vertex per block, or a biclique of the other colour.

    A vertex is good when a ``color`` path through the earlier blocks ends in
    it. If the last block has no good vertex, take the last block i where at
    least half the vertices are good; its good vertices and the bad vertices of
    block i+1 span a complete bipartite graph in the other colour.
    """
    blocks = [list(b) for b in blocks]
    if not blocks or any(not b for b in blocks):
        raise ValueError("longpath_or_biclique needs nonempty blocks")
    good = [np.ones(len(blocks[0]), dtype=bool)]
    for j in range(1, len(blocks)):
        prev = [v for v, g in zip(blocks[j - 1], good[-1]) if g]
        if prev:
            good.append(oracle.color_matrix(prev, blocks[j], color).any(axis=0))
        else:
            good.append(np.zeros(len(blocks[j]), dtype=bool))
    if good[-1].any():
        path = [blocks[-1][int(np.argmax(good[-1]))]]
        for j in range(len(blocks) - 2, -1, -1):
            cand = [v for v, g in zip(blocks[j], good[j]) if g]
            reach = oracle.color_matrix(cand, [path[-1]], color)[:, 0]
            path.append(cand[int(np.argmax(reach))])
        return PathResult(tuple(path[::-1]), color)
    i = max(j for j in range(len(blocks)) if 2 * int(good[j].sum()) >= len(blocks[j]))
    if i == len(blocks) - 1:
        raise InternalContradiction("last block has good vertices but no path was traced")
    left = tuple(v for v, g in zip(blocks[i], good[i]) if g)
    right = tuple(v for v, g in zip(blocks[i + 1], good[i + 1]) if not g)
    return BicliqueResult(i, left, right, color.other)


# --- outerplanar embedding on arbitrary points -----------------------------------


def _convex_order(g: Graph) -> list[int]:
    """A cyclic vertex order in which g is drawn without crossings on a circle."""
    if g.n <= 3:
        return list(range(g.n))
    h = nx.Graph()
    h.add_nodes_from(range(g.n + 1))
    h.add_edges_from(g.edges)
    h.add_edges_from((g.n, v) for v in range(g.n))
    ok, emb = nx.check_planarity(h)
    if not ok:
        raise NotOuterplanar("graph plus an apex is not planar")
    order = list(emb.neighbors_cw_order(g.n))
    if not _chords_ok(order, g.edges):
        raise InternalContradiction("apex rotation does not give an outerplanar drawing")
    return order


def _chords_ok(order: list[int], edges) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    chords = [tuple(sorted((pos[a], pos[b]))) for a, b in edges]
    for x in range(len(chords)):
        a, b = chords[x]
        for c, d in chords[x + 1 :]:
            if a < c < b < d or c < a < d < b:
                return False
    return True


def maximal_outerplanar(g: Graph) -> tuple[Graph, list[int]]:
    """A maximal outerplanar supergraph of g and its outer cycle."""
    order = _convex_order(g)
    n = g.n
    edges = set(g.edges)
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    pos = {v: i for i, v in enumerate(order)}

    def crosses(e, f):
        a, b = sorted((pos[e[0]], pos[e[1]]))
        c, d = sorted((pos[f[0]], pos[f[1]]))
        return a < c < b < d or c < a < d < b

    for i in range(n):
        for j in range(i + 2, n):
            if len(edges) >= 2 * n - 3:
                break
            e = (min(order[i], order[j]), max(order[i], order[j]))
            if e in edges:
                continue
            if not any(crosses(e, f) for f in edges):
                edges.add(e)
    h = Graph(n, edges)
    if n >= 3 and len(h.edges) != 2 * n - 3:
        raise InternalContradiction("triangulation of the outer polygon is incomplete")
    return h, order


def _side(pa, pb, p) -> int:
    return orient(pa, pb, p)


def _embed_polygon(h: Graph, poly: list[int], a_pt: int, b_pt: int, S: list[int], points: PointSet, out: dict):
    """Map poly[1:-1] onto S; poly[0] -> a_pt and poly[-1] -> b_pt are fixed.

    Invariant: S lies strictly on one side of the line a_pt b_pt, which
    supports an edge of the hull of S plus both endpoints.
    """
    k = len(poly) - 1
    if k <= 1:
        return
    a, b = poly[0], poly[-1]
    t = next((i for i in range(1, k) if h.has_edge(a, poly[i]) and h.has_edge(poly[i], b)), None)
    if t is None:
        raise InternalContradiction("root chord has no apex triangle")
    k1, k2 = t - 1, k - t - 1
    A, B = points[a_pt], points[b_pt]
    for c in _candidates(points, A, B, S):
        C = points[c]
        rest = [s for s in S if s != c]
        # far side of line ac from b is H1, far side of line bc from a is H2
        sb = _side(A, C, B)
        sa = _side(B, C, A)
        in1 = [_side(A, C, points[s]) == -sb for s in rest]
        in2 = [_side(B, C, points[s]) == -sa for s in rest]
        if any(not x and not y for x, y in zip(in1, in2)):
            continue  # triangle abc is not empty
        only1 = [s for s, x, y in zip(rest, in1, in2) if x and not y]
        only2 = [s for s, x, y in zip(rest, in1, in2) if y and not x]
        wedge = [s for s, x, y in zip(rest, in1, in2) if x and y]
        if not (len(only1) <= k1 <= len(only1) + len(wedge)):
            continue
        # order the wedge from the extension of bc towards the extension of ac
        d1 = (2 * C[0] - B[0], 2 * C[1] - B[1])
        d2 = (2 * C[0] - A[0], 2 * C[1] - A[1])
        ref = orient(C, d1, d2)
        wedge.sort(key=cmp_to_key(lambda p, q: -ref * orient(C, points[p], points[q])))
        cut = k1 - len(only1)
        S1 = only1 + wedge[:cut]
        S2 = wedge[cut:] + only2
        out[poly[t]] = c
        _embed_polygon(h, poly[: t + 1], a_pt, c, S1, points, out)
        _embed_polygon(h, poly[t:], c, b_pt, S2, points, out)
        return
    raise InternalContradiction(f"no apex point for a chord with {k1}+{k2} points to split")


def _candidates(points: PointSet, A, B, S: list[int]) -> list[int]:
    # closest to the chord first: those tend to leave the triangle empty
    return sorted(S, key=lambda s: (_area2(A, B, points[s]), s))


def _area2(A, B, P) -> int:
    return abs((B[0] - A[0]) * (P[1] - A[1]) - (B[1] - A[1]) * (P[0] - A[0]))


def gritzmann_embed(g: Graph, points: PointSet, idx: Sequence[int]) -> dict:
    """Non-crossing straight-line embedding of an outerplanar g on the points ``idx``.

    The graph is completed to a maximal outerplanar graph; an outer edge is
    pinned to a hull edge of the points and every triangle's apex is chosen so
    that the remaining points split between the two sub-polygons.
    """
    idx = list(idx)
    if len(idx) != g.n:
        raise ValueError(f"{g.n} vertices but {len(idx)} points")
    if g.n <= 2:
        return {v: idx[v] for v in range(g.n)}
    h, cyc = maximal_outerplanar(g)
    hull = convex_hull(points.coords(idx))
    p, q = idx[hull[0]], idx[hull[1]]
    S = [s for s in idx if s not in (p, q)]
    out = {cyc[1]: p, cyc[0]: q}
    poly = cyc[1:] + cyc[:1]
    _embed_polygon(h, poly, p, q, S, points, out)
    return out


# --- bicliques to patterns ---------------------------------------------------------


def _clique_embedding(pattern: Graph, verts: Sequence[int], color: EdgeColor, points: PointSet) -> Embedding:
    mapping = gritzmann_embed(pattern, points, list(verts)[: pattern.n])
    return Embedding(pattern, mapping, color)


def ladder_from_wellsplit(pair: AvoidingPair, color: EdgeColor, n: int, oracle: Coloring) -> Embedding:
    """Monochromatic non-crossing L_{2n} from a ``color`` biclique on an avoiding pair.

    Each part (in its visibility order) gives an increasing ``color`` path on n
    vertices or 2n vertices pairwise joined in the other colour. Two paths plus
    the rungs x_i y_i form the ladder; a clique hosts it by the outerplanar
    embedding.
    """
    pattern = ladder_graph(n)
    res = []
    for part in (pair.A, pair.B):
        r = chain_or_antichain(part, color, n, 2 * n, oracle)
        if isinstance(r, Antichain):
            return _clique_embedding(pattern, r.vertices, r.color, pair.points)
        res.append(r.vertices)
    mapping = {i: res[0][i] for i in range(n)}
    mapping.update({n + i: res[1][i] for i in range(n)})
    return Embedding(pattern, mapping, color)


def pw2_from_wellsplit(pair: AvoidingPair, color: EdgeColor, target, oracle: Coloring) -> Embedding:
    """Monochromatic non-crossing copy of a PW2 pattern from a ``color`` biclique.

    Path x is mapped along an increasing chain of the first part and path y
    along one of the second; cross edges are biclique edges. An antichain of
    n vertices in either part is a clique of the other colour.
    """
    hp: HostedPattern = as_hosted(target)
    host: PW2Graph = hp.host
    n = host.n
    res = []
    for part, path in ((pair.A, host.path_u), (pair.B, host.path_v)):
        r = chain_or_antichain(part, color, len(path), n, oracle)
        if isinstance(r, Antichain):
            emb = _clique_embedding(host.graph, r.vertices, r.color, pair.points)
            return emb.restrict(hp.pattern)
        res.append(r.vertices)
    mapping = {v: res[0][i] for i, v in enumerate(host.path_u)}
    mapping.update({v: res[1][j] for j, v in enumerate(host.path_v)})
    return Embedding(hp.pattern, mapping, color)


def restrict_pair(pair: AvoidingPair, L: Sequence[int], R: Sequence[int]) -> AvoidingPair:
    """Sub-pair with L on the first side and R on the second, orders inherited."""
    sl, sr = set(L), set(R)
    if sl <= set(pair.A) and sr <= set(pair.B):
        return AvoidingPair(pair.points, tuple(v for v in pair.A if v in sl), tuple(v for v in pair.B if v in sr))
    if sr <= set(pair.A) and sl <= set(pair.B):
        return restrict_pair(pair, R, L)
    raise ValueError("parts do not sit on opposite sides of the pair")
