"""Exact planar predicates, point sets and mutually avoiding pairs.

All predicates work on integer coordinates with Python integer arithmetic,
so orientation and crossing decisions are exact. Point sets keep their
coordinates in numpy ``int64`` arrays for compact storage of large convex
instances; vectorised predicates fall back to object arrays when the
coordinates are too large for ``int64`` products.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, DegenerateInput, InconsistentOrder, NotSeparated, SizeTooSmall

# |x|, |y| < 2**62 keeps every orientation determinant below 2**127.
COORD_LIMIT = 2**62
_INT64_SAFE = 2**30


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class Position(enum.Enum):
    GENERAL = "general"
    CONVEX = "convex"
    DEGENERATE = "degenerate"


def orient(p, q, r) -> int:
    """Sign of the determinant of (q - p, r - p): +1 ccw, -1 cw, 0 collinear."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def orientation(p, q, r) -> Orientation:
    return Orientation(orient(p, q, r))


def _between(a, b, c) -> bool:
    # c strictly inside segment ab, all three collinear
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(
        a[1], b[1]
    ) and c != a and c != b


def segments_cross(a, b, c, d) -> bool:
    """True iff the open segments ab and cd intersect."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == o2 == o3 == o4 == 0:
        # collinear: open segments overlap iff some endpoint is strictly inside
        # the other segment, or both segments coincide
        if {a, b} == {c, d}:
            return a != b
        return _between(a, b, c) or _between(a, b, d) or _between(c, d, a) or _between(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def orient_many(p, q, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised ``orient(p, q, r)`` over the points ``r = (xs[i], ys[i])``."""
    px, py = int(p[0]), int(p[1])
    qx, qy = int(q[0]), int(q[1])
    big = max(abs(px), abs(py), abs(qx), abs(qy))
    if xs.dtype != object and big < _INT64_SAFE and (
        xs.size == 0 or max(int(np.abs(xs).max()), int(np.abs(ys).max())) < _INT64_SAFE
    ):
        d = (qx - px) * (ys - py) - (qy - py) * (xs - px)
    else:
        ox = xs.astype(object)
        oy = ys.astype(object)
        d = (qx - px) * (oy - py) - (qy - py) * (ox - px)
        d = np.array([(v > 0) - (v < 0) for v in d], dtype=np.int64)
        return d
    return np.sign(d).astype(np.int64)


def _check_point(p) -> tuple[int, int]:
    if len(p) != 2:
        raise DegenerateInput(f"point {p!r} is not a pair")
    x, y = p
    if isinstance(x, bool) or isinstance(y, bool) or int(x) != x or int(y) != y:
        raise DegenerateInput(f"point {p!r} has non-integer coordinates")
    x, y = int(x), int(y)
    if abs(x) >= COORD_LIMIT or abs(y) >= COORD_LIMIT:
        raise DegenerateInput(f"point {p!r} is outside the safe coordinate range")
    return x, y


def find_collinear_triple(points: Sequence) -> tuple[int, int, int] | None:
    """Return indices of some collinear triple (or duplicate pair), or None.

    Runs in O(N^2) by bucketing the primitive directions from each point.
    """
    n = len(points)
    seen = {}
    for i, p in enumerate(points):
        if p in seen:
            return (seen[p], i, i)
        seen[p] = i
    for i in range(n):
        px, py = points[i]
        dirs = {}
        for j in range(i + 1, n):
            dx = points[j][0] - px
            dy = points[j][1] - py
            g = gcd(dx, dy)
            dx //= g
            dy //= g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            key = (dx, dy)
            if key in dirs:
                return (i, dirs[key], j)
            dirs[key] = j
    return None


def convex_hull(points: Sequence) -> list[int]:
    """Indices of the hull vertices in counterclockwise order (no collinear points)."""
    idx = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
    if len(idx) <= 2:
        return idx
    lower: list[int] = []
    for i in idx:
        while len(lower) >= 2 and orient(points[lower[-2]], points[lower[-1]], points[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(idx):
        while len(upper) >= 2 and orient(points[upper[-2]], points[upper[-1]], points[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


class PointSet:
    """Distinct integer points in general position, labelled 0..N-1."""

    def __init__(self, points: Iterable, check: bool = True):
        pts = [_check_point(p) for p in points] if check else [(int(x), int(y)) for x, y in points]
        self.xs = np.array([p[0] for p in pts], dtype=np.int64)
        self.ys = np.array([p[1] for p in pts], dtype=np.int64)
        if check:
            self._validate(pts)

    @classmethod
    def from_arrays(cls, xs: np.ndarray, ys: np.ndarray) -> "PointSet":
        """Wrap trusted coordinate arrays without re-validating them."""
        obj = cls.__new__(cls)
        obj.xs = np.asarray(xs, dtype=np.int64)
        obj.ys = np.asarray(ys, dtype=np.int64)
        return obj

    def _validate(self, pts):
        bad = find_collinear_triple(pts)
        if bad is not None:
            raise DegenerateInput(f"points {bad} are collinear or repeated", triple=bad)

    def __len__(self) -> int:
        return len(self.xs)

    def __getitem__(self, i) -> tuple[int, int]:
        return (int(self.xs[i]), int(self.ys[i]))

    def coords(self, idx: Sequence[int]) -> list[tuple[int, int]]:
        return [self[i] for i in idx]

    def to_list(self) -> list[tuple[int, int]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def is_convex(self) -> bool:
        return False


class ConvexSeq(PointSet):
    """Points listed in their cyclic order around a convex polygon.

    Either direction of traversal is accepted; ``direction`` records it.
    """

    def _validate(self, pts):
        n = len(pts)
        if n < 3:
            raise DegenerateInput("a convex sequence needs at least 3 points")
        first = orient(pts[0], pts[1], pts[2])
        if first == 0:
            raise DegenerateInput("points (0, 1, 2) are collinear", triple=(0, 1, 2))
        for i in range(n):
            j, k = (i + 1) % n, (i + 2) % n
            o = orient(pts[i], pts[j], pts[k])
            if o != first:
                raise DegenerateInput(f"turn at ({i}, {j}, {k}) breaks convexity", triple=(i, j, k))
        # fan from point 0 rules out polygons winding more than once
        for i in range(1, n - 1):
            if orient(pts[0], pts[i], pts[i + 1]) != first:
                raise DegenerateInput(
                    f"points (0, {i}, {i + 1}) are not in convex order", triple=(0, i, i + 1)
                )

    @property
    def direction(self) -> Orientation:
        return Orientation(orient(self[0], self[1], self[2]))

    @property
    def is_convex(self) -> bool:
        return True


@dataclass(frozen=True)
class PositionReport:
    kind: Position
    triple: tuple[int, int, int] | None = None


def classify_position(points: Sequence) -> PositionReport:
    pts = [_check_point(p) for p in points]
    if len(pts) < 3:
        raise ValueError("classification needs at least 3 points")
    bad = find_collinear_triple(pts)
    if bad is not None:
        return PositionReport(Position.DEGENERATE, bad)
    if len(convex_hull(pts)) == len(pts):
        return PositionReport(Position.CONVEX)
    return PositionReport(Position.GENERAL)


def gen_convex(n: int, seed: int | None = None) -> ConvexSeq:
    """``n`` points on the parabola y = x^2, in increasing x.

    Without a seed, point i is (i, i^2). With a seed the x-gaps are drawn
    from {1, 2, 3}, which keeps every point on the parabola and so in convex
    general position.
    """
    if n < 3:
        raise ValueError("gen_convex needs n >= 3")
    if seed is None:
        xs = np.arange(n, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        gaps = rng.integers(1, 4, size=n - 1)
        xs = np.concatenate([[0], np.cumsum(gaps)]).astype(np.int64)
    if int(xs[-1]) ** 2 >= COORD_LIMIT:
        raise ValueError(f"n={n} exceeds the coordinate range of the moment-curve generator")
    return ConvexSeq.from_arrays(xs, xs * xs)


def _resample_general(pts: list, draw) -> list:
    # replace one point of each collinear triple until none is left
    while True:
        bad = find_collinear_triple(pts)
        if bad is None:
            return pts
        pts[bad[2]] = draw(bad[2])


def gen_general(n: int, seed: int, box: int = 10**6) -> PointSet:
    """``n`` random integer points in general position inside ``[0, box)^2``."""
    rng = np.random.default_rng(seed)

    def draw(_):
        return (int(rng.integers(0, box)), int(rng.integers(0, box)))

    return PointSet(_resample_general([draw(i) for i in range(n)], draw), check=False)


def gen_separated(n_a: int, n_b: int, seed: int, box: int = 10**4, gap: int = 100) -> PointSet:
    """Random general-position points: ``n_a`` above the x-axis, then ``n_b`` below.

    The first ``n_a`` indices lie in y >= gap and the rest in y <= -gap, so the
    two groups are separated by the x-axis.
    """
    rng = np.random.default_rng(seed)

    def draw(i):
        y = int(rng.integers(gap, box))
        return (int(rng.integers(0, box)), y if i < n_a else -y)

    return PointSet(_resample_general([draw(i) for i in range(n_a + n_b)], draw), check=False)



def gen_avoiding_pair(n: int, seed: int | None = None) -> tuple[PointSet, "AvoidingPair"]:
    """2n points in general position forming an avoiding pair of n + n.

    The first side is a flat convex chain near the x-axis, the second a steep
    convex chain far up and to the right. Lines through two points of the
    first side pass below the second, and lines through two points of the
    second pass to the right of the first, so the pair is avoiding by
    construction and its orders are the index orders.
    """
    if n < 2:
        raise ValueError("gen_avoiding_pair needs n >= 2")
    rng = np.random.default_rng(seed)
    ga = rng.integers(1, 4, size=n - 1) if seed is not None else np.ones(n - 1, dtype=np.int64)
    gb = rng.integers(1, 4, size=n - 1) if seed is not None else np.ones(n - 1, dtype=np.int64)
    ia = np.concatenate([[0], np.cumsum(ga)]).astype(np.int64)
    ib = np.concatenate([[0], np.cumsum(gb)]).astype(np.int64)
    top = int(max(ia[-1], ib[-1])) + 1
    K = 1000 * top
    X = 2000 * top * top + 10**6
    if X + K * top >= COORD_LIMIT:
        raise ValueError(f"n={n} exceeds the coordinate range of the avoiding-pair generator")
    xs = np.concatenate([ia * K, X + ib * ib])
    ys = np.concatenate([ia * ia, X + ib * K])
    pts = PointSet.from_arrays(xs, ys)
    # seen from the steep chain the flat one runs right to left, which makes
    # edges between increasing positions on both sides cross-free
    A = tuple(range(n - 1, -1, -1))
    B = tuple(range(n, 2 * n))
    return pts, AvoidingPair(pts, A, B)

# --- separation ------------------------------------------------------------


def separating_line(points: PointSet, A: Sequence[int], B: Sequence[int]):
    """A pair of points (p, q) whose line weakly separates A from B, or None.

    The line supports an edge of one hull; the other set lies strictly on the
    opposite side. Two finite sets with disjoint hulls always admit such a line.
    """
    pa = points.coords(A)
    pb = points.coords(B)
    for own, other in ((pa, pb), (pb, pa)):
        hull = convex_hull(own)
        if len(hull) == 1:
            continue
        ox = np.array([p[0] for p in other], dtype=object)
        oy = np.array([p[1] for p in other], dtype=object)
        ring = hull + hull[:1] if len(hull) > 2 else hull
        for s in range(len(ring) - 1):
            p, q = own[ring[s]], own[ring[s + 1]]
            if len(hull) > 2:
                signs = orient_many(p, q, ox, oy)
                if np.all(signs < 0):
                    return (p, q)
            else:
                # two points: either side of the segment's line
                signs = orient_many(p, q, ox, oy)
                if np.all(signs < 0) or np.all(signs > 0):
                    return (p, q)
    if len(pa) == 1 and len(pb) == 1 and pa[0] != pb[0]:
        return (pa[0], pa[0])
    return None


def separable(points: PointSet, A: Sequence[int], B: Sequence[int]) -> bool:
    """Whether some line strictly separates A and B (their hulls are disjoint)."""
    pa = points.coords(A)
    pb = points.coords(B)
    if set(pa) & set(pb):
        return False
    # disjoint hulls always admit a separating line through a hull edge
    return separating_line(points, A, B) is not None


# --- mutually avoiding sets ------------------------------------------------


def is_mutually_avoiding(points: PointSet, A: Sequence[int], B: Sequence[int]) -> bool:
    """No line through two points of one set meets the hull of the other."""
    if len(A) < 2 or len(B) < 2:
        raise ValueError("mutually avoiding sets have at least two points each")
    if set(A) & set(B):
        return False
    for own, other in ((A, B), (B, A)):
        ox = points.xs[list(other)]
        oy = points.ys[list(other)]
        for s in range(len(own)):
            p = points[own[s]]
            for t in range(s + 1, len(own)):
                signs = orient_many(p, points[own[t]], ox, oy)
                if not (np.all(signs > 0) or np.all(signs < 0)):
                    return False
    return True


def _angular_sort(points: PointSet, centre: int, items: Sequence[int], clockwise: bool):
    c = points[centre]

    def cmp(i, j):
        o = orient(c, points[i], points[j])
        return o if clockwise else -o

    return sorted(items, key=cmp_to_key(cmp))


def mutual_orders(
    points: PointSet, A: Sequence[int], B: Sequence[int], audit: bool = False
) -> tuple[list[int], list[int]]:
    """The visibility orders of a mutually avoiding pair.

    The orders are normalised so that for u before u' in A and v, v' in B the
    edges uv and u'v' cross exactly when v' comes before v. With ``audit``,
    every witness point is checked to see its partner set in the same order.
    """
    if len(A) < 2 or len(B) < 2:
        raise ValueError("mutual orders need at least two points per side")
    order_a = _angular_sort(points, B[0], A, clockwise=True)
    order_b = _angular_sort(points, A[0], B, clockwise=False)
    u, u2 = points[order_a[0]], points[order_a[1]]
    v, v2 = points[order_b[0]], points[order_b[1]]
    if segments_cross(u, v, u2, v2):
        order_b.reverse()
    if audit:
        for b in B:
            if _angular_sort(points, b, A, clockwise=True) != order_a:
                raise InconsistentOrder(f"point {b} sees the first set in a different order")
        ref = _angular_sort(points, A[0], B, clockwise=False)
        for a in A:
            if _angular_sort(points, a, B, clockwise=False) != ref:
                raise InconsistentOrder(f"point {a} sees the second set in a different order")
    return order_a, order_b


@dataclass(frozen=True)
class AvoidingPair:
    """Two mutually avoiding index sets, each listed in its visibility order."""

    points: PointSet
    A: tuple[int, ...]
    B: tuple[int, ...]

    @classmethod
    def from_sets(cls, points: PointSet, A, B, check: bool = True) -> "AvoidingPair":
        if check and not is_mutually_avoiding(points, A, B):
            raise InconsistentOrder("sets are not mutually avoiding")
        oa, ob = mutual_orders(points, list(A), list(B))
        return cls(points, tuple(oa), tuple(ob))


def convex_pair(points: ConvexSeq, A: Sequence[int], B: Sequence[int]) -> AvoidingPair:
    """Avoiding pair from two index sets of a convex sequence with A before B.

    Convex halves split by a line need no geometric search: the orders are
    the sequence order on A and the reversed sequence order on B.
    """
    a = sorted(A)
    b = sorted(B, reverse=True)
    if a[-1] > b[-1]:
        a, b = sorted(B), sorted(A, reverse=True)
    if a[-1] > b[-1]:
        raise ValueError("convex_pair needs one set entirely before the other")
    return AvoidingPair(points, tuple(a), tuple(b))


def _distance_order(points: PointSet, items: Sequence[int], line) -> list[int]:
    p, q = line
    xs = points.xs[list(items)]
    ys = points.ys[list(items)]
    # signed area magnitudes are proportional to distance from the line
    px, py, qx, qy = (int(v) for v in (*p, *q))
    mags = [abs((qx - px) * (int(y) - py) - (qy - py) * (int(x) - px)) for x, y in zip(xs, ys)]
    return [items[i] for i in sorted(range(len(items)), key=lambda i: (-mags[i], items[i]))]


class _AvoidSearch:
    """Depth-first search for k + k mutually avoiding points with forward checking."""

    def __init__(self, points: PointSet, A, B, k: int, budget: int):
        self.points = points
        self.k = k
        self.budget = budget
        self.nodes = 0
        self.cand = (list(A), list(B))
        self.xy = tuple(
            (points.xs[list(c)].astype(object), points.ys[list(c)].astype(object)) for c in self.cand
        )

    def compatible(self, side: int, dom: list[int], sel) -> list[int]:
        """Positions in ``dom`` (indices into self.cand[side]) compatible with ``sel``."""
        if not dom:
            return dom
        own, other = sel[side], sel[1 - side]
        co = self.cand[side]
        xs = self.xy[side][0][dom]
        ys = self.xy[side][1][dom]
        ok = np.ones(len(dom), dtype=bool)
        pts = self.points
        if len(other) >= 2:
            for x in own:
                px = pts[co[x]]
                base = None
                for y in other:
                    py = pts[self.cand[1 - side][y]]
                    # orient(x, d, y) = -orient(x, y, d)
                    s = -orient_many(px, py, xs, ys)
                    base = s if base is None else base
                    ok &= (s == base) & (s != 0)
            if own:
                ref = pts[co[own[0]]]
                ob = [pts[self.cand[1 - side][y]] for y in other]
                for i in range(len(ob)):
                    for j in range(i + 1, len(ob)):
                        want = orient(ob[i], ob[j], ref)
                        ok &= orient_many(ob[i], ob[j], xs, ys) == want
        elif len(other) == 1:
            # one point of the other side: it must not lie on a new line
            py = pts[self.cand[1 - side][other[0]]]
            for x in own:
                s = orient_many(pts[co[x]], py, xs, ys)
                ok &= s != 0
        return [d for d, flag in zip(dom, ok) if flag]

    def run(self):
        start = (list(range(len(self.cand[0]))), list(range(len(self.cand[1]))))
        found = self._dfs(start, ([], []))
        if found is None:
            return None
        return [self.cand[0][i] for i in found[0]], [self.cand[1][i] for i in found[1]]

    def _dfs(self, doms, sel):
        k = self.k
        if len(sel[0]) == k and len(sel[1]) == k:
            return sel
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"avoiding-set search exceeded {self.budget} nodes")
        side = 0 if len(sel[0]) <= len(sel[1]) and len(sel[0]) < k else 1
        if len(sel[side]) == k:
            side = 1 - side
        dom = doms[side]
        need = k - len(sel[side])
        for pos, c in enumerate(dom):
            if len(dom) - pos < need:
                break
            new_sel = list(sel)
            new_sel[side] = sel[side] + [c]
            new_sel = tuple(new_sel)
            rest = dom[pos + 1 :]
            d_own = self.compatible(side, rest, new_sel)
            if len(d_own) < need - 1:
                continue
            d_other = self.compatible(1 - side, doms[1 - side], new_sel)
            if len(d_other) < k - len(sel[1 - side]):
                continue
            new_doms = [None, None]
            new_doms[side] = d_own
            new_doms[1 - side] = d_other
            got = self._dfs(tuple(new_doms), new_sel)
            if got is not None:
                return got
        return None


def mutually_avoiding_subsets(
    points: PointSet,
    A: Sequence[int],
    B: Sequence[int],
    k: int,
    strict: bool = True,
    budget: int = 200_000,
) -> AvoidingPair:
    """Select k points from each of two line-separated sets, mutually avoiding.

    Candidates are tried farthest-from-the-separating-line first, alternating
    sides, with forward checking of the avoidance constraints. The search is
    exhaustive up to ``budget`` nodes. The result is always re-certified.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if strict and (len(A) < 6 * k * k or len(B) < 6 * k * k):
        raise SizeTooSmall("mutually_avoiding_subsets", f"need {6 * k * k} points per side")
    if len(A) < k or len(B) < k:
        raise SizeTooSmall("mutually_avoiding_subsets", f"fewer than {k} points on a side")
    line = separating_line(points, A, B)
    if line is None:
        raise NotSeparated("the two sets cannot be separated by a line")
    search = _AvoidSearch(points, _distance_order(points, list(A), line), _distance_order(points, list(B), line), k, budget)
    found = search.run()
    if found is None:
        raise SizeTooSmall("mutually_avoiding_subsets", "no mutually avoiding selection exists")
    sa, sb = found
    if not is_mutually_avoiding(points, sa, sb):
        raise AssertionError("avoiding-set search produced an uncertified pair")
    return AvoidingPair.from_sets(points, sa, sb, check=False)


def separable_to_avoiding(points: PointSet, L: Sequence[int], R: Sequence[int], k: int) -> AvoidingPair:
    """Shrink the parts of a separable biclique to a k + k avoiding pair.

    Parts in convex position are already avoiding and are cut directly.
    """
    if len(L) < k or len(R) < k:
        raise SizeTooSmall("separable_to_avoiding", f"parts smaller than {k}")
    pts = points.coords(list(L) + list(R))
    if len(pts) >= 3 and classify_position(pts).kind is Position.CONVEX:
        pair = AvoidingPair.from_sets(points, list(L), list(R), check=True)
        step_a = len(pair.A) / k
        step_b = len(pair.B) / k
        A = [pair.A[int(i * step_a)] for i in range(k)]
        B = [pair.B[int(i * step_b)] for i in range(k)]
        return AvoidingPair(points, tuple(A), tuple(B))
    return mutually_avoiding_subsets(points, L, R, k, strict=False)


# --- file format -------------------------------------------------------------


def load_points(path, convex: bool | None = None) -> PointSet:
    """Read ``{"points": [[x, y], ...]}``; a ``"convex": true`` flag selects ConvexSeq."""
    with open(path) as fh:
        data = json.load(fh)
    pts = data["points"]
    if convex is None:
        convex = bool(data.get("convex", False))
    return ConvexSeq(pts) if convex else PointSet(pts)


def dump_points(points: PointSet, path, extra: dict | None = None) -> None:
    data = {"points": [list(p) for p in points.to_list()]}
    if points.is_convex:
        data["convex"] = True
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh, separators=(",", ":"))
