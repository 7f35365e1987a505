"""Edge 2-colourings of complete graphs as lazy, pure oracles.

Every colouring answers ``is_red(i, j)`` for a single pair and
``red_matrix(rows, cols)`` for a block of pairs at once. Large instances are
never tabulated: seeded colourings hash the index pair on demand.
"""

from __future__ import annotations

import enum
import json
from typing import Callable, Sequence

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class EdgeColor(enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "EdgeColor":
        return EdgeColor.BLUE if self is EdgeColor.RED else EdgeColor.RED

    @classmethod
    def parse(cls, value) -> "EdgeColor":
        return value if isinstance(value, cls) else cls(str(value).lower())


RED = EdgeColor.RED
BLUE = EdgeColor.BLUE


def _as_index_array(idx) -> np.ndarray:
    return np.asarray(idx, dtype=np.int64).reshape(-1)


class Coloring:
    """Base class: a symmetric red/blue colouring of the pairs of 0..n-1."""

    kind = "abstract"

    def __init__(self, n: int):
        self.n = n

    def red_matrix(self, rows, cols) -> np.ndarray:
        """Boolean array ``M[a, b] = is_red(rows[a], cols[b])``."""
        raise NotImplementedError

    def is_red(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("a vertex is not joined to itself")
        return bool(self.red_matrix([i], [j])[0, 0])

    def color(self, i: int, j: int) -> EdgeColor:
        return RED if self.is_red(i, j) else BLUE

    def has_color(self, i: int, j: int, c: EdgeColor) -> bool:
        return self.is_red(i, j) == (c is RED)

    def color_matrix(self, rows, cols, c: EdgeColor) -> np.ndarray:
        m = self.red_matrix(rows, cols)
        return m if c is RED else ~m

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n}


class ExplicitColoring(Coloring):
    """A full n x n table; unlisted pairs are blue."""

    kind = "explicit"

    def __init__(self, n: int, red_edges: Sequence[Sequence[int]] = ()):
        super().__init__(n)
        self.table = np.zeros((n, n), dtype=bool)
        for i, j in red_edges:
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bad edge ({i}, {j}) for n={n}")
            self.table[i, j] = self.table[j, i] = True

    @classmethod
    def from_table(cls, table: np.ndarray) -> "ExplicitColoring":
        table = np.asarray(table, dtype=bool)
        obj = cls(table.shape[0])
        obj.table = table | table.T
        np.fill_diagonal(obj.table, False)
        return obj

    @classmethod
    def from_coloring(cls, base: Coloring) -> "ExplicitColoring":
        idx = np.arange(base.n)
        t = np.array(base.red_matrix(idx, idx), dtype=bool)
        np.fill_diagonal(t, False)
        return cls.from_table(t)

    def red_matrix(self, rows, cols) -> np.ndarray:
        return self.table[np.ix_(_as_index_array(rows), _as_index_array(cols))]

    def is_red(self, i, j) -> bool:
        if i == j:
            raise ValueError("a vertex is not joined to itself")
        return bool(self.table[i, j])

    def red_edges(self) -> list[list[int]]:
        r, c = np.nonzero(np.triu(self.table, 1))
        return [[int(a), int(b)] for a, b in zip(r, c)]

    def describe(self) -> dict:
        return {"n": self.n, "red_edges": self.red_edges()}


_CHUNK = 1 << 21  # cells hashed per batch


def _batched(cells, r: np.ndarray, c: np.ndarray) -> np.ndarray:
    step = max(1, _CHUNK // max(1, c.shape[1]))
    if r.shape[0] > step:
        return np.concatenate([cells(r[i : i + step], c) for i in range(0, r.shape[0], step)])
    return cells(r, c)


def _splitmix(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x + np.uint64(_GOLDEN)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def _splitmix_int(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class SeededColoring(Coloring):
    """Pseudo-random colouring: the colour of {i, j} is one bit of a hash.

    Pure by construction, so it scales to any vertex count without storage.
    """

    kind = "seeded_random"

    def __init__(self, n: int, seed: int):
        super().__init__(n)
        self.seed = int(seed)
        self._salt = _splitmix_int(self.seed & _MASK)

    def red_matrix(self, rows, cols) -> np.ndarray:
        r = _as_index_array(rows).astype(np.uint64)[:, None]
        c = _as_index_array(cols).astype(np.uint64)[None, :]
        return _batched(self._cells, r, c)

    def _cells(self, r: np.ndarray, c: np.ndarray) -> np.ndarray:
        lo = np.minimum(r, c)
        hi = np.maximum(r, c)
        with np.errstate(over="ignore"):
            key = (lo << np.uint64(32)) + hi + np.uint64(self._salt)
        return (_splitmix(key) >> np.uint64(63)).astype(bool)

    def is_red(self, i, j) -> bool:
        if i == j:
            raise ValueError("a vertex is not joined to itself")
        lo, hi = (i, j) if i < j else (j, i)
        return bool(_splitmix_int(((lo << 32) + hi + self._salt) & _MASK) >> 63)

    def describe(self) -> dict:
        return {"n": self.n, "kind": self.kind, "seed": self.seed}


class FunctionColoring(Coloring):
    """Colouring given by a vectorised rule ``fn(i_array, j_array) -> bool array``."""

    kind = "construction"

    def __init__(self, n: int, fn: Callable[[np.ndarray, np.ndarray], np.ndarray], name: str = "construction", params=None):
        super().__init__(n)
        self.fn = fn
        self.name = name
        self.params = dict(params or {})

    def red_matrix(self, rows, cols) -> np.ndarray:
        r = _as_index_array(rows)[:, None]
        c = _as_index_array(cols)[None, :]
        return _batched(self._cells, r, c)

    def _cells(self, r: np.ndarray, c: np.ndarray) -> np.ndarray:
        lo = np.minimum(r, c)
        hi = np.maximum(r, c)
        return np.broadcast_to(np.asarray(self.fn(lo, hi), dtype=bool), (r.shape[0], c.shape[1]))

    def describe(self) -> dict:
        return {"n": self.n, "kind": self.name, **self.params}


def constant_coloring(n: int, c: EdgeColor) -> FunctionColoring:
    red = c is RED
    return FunctionColoring(
        n, lambda i, j: np.full(np.broadcast(i, j).shape, red), name=f"all_{c.value}"
    )


class SwappedColoring(Coloring):
    """The colour-transposed view of another colouring."""

    kind = "swapped"

    def __init__(self, base: Coloring):
        super().__init__(base.n)
        self.base = base

    def red_matrix(self, rows, cols) -> np.ndarray:
        return ~self.base.red_matrix(rows, cols)

    def is_red(self, i, j) -> bool:
        return not self.base.is_red(i, j)


def oriented(base: Coloring, c: EdgeColor) -> Coloring:
    """A view in which colour ``c`` of ``base`` reads as red."""
    if c is RED:
        return base
    if isinstance(base, SwappedColoring):
        return base.base
    return SwappedColoring(base)


class RestrictedColoring(Coloring):
    """The colouring induced on ``subset``, relabelled 0..len(subset)-1."""

    kind = "restricted"

    def __init__(self, base: Coloring, subset: Sequence[int]):
        super().__init__(len(subset))
        self.base = base
        self.subset = _as_index_array(subset)
        if len(set(self.subset.tolist())) != len(self.subset):
            raise ValueError("restriction subset has repeated vertices")

    def red_matrix(self, rows, cols) -> np.ndarray:
        return self.base.red_matrix(self.subset[_as_index_array(rows)], self.subset[_as_index_array(cols)])

    def is_red(self, i, j) -> bool:
        return self.base.is_red(int(self.subset[i]), int(self.subset[j]))


def restrict(base: Coloring, subset: Sequence[int]) -> RestrictedColoring:
    if isinstance(base, RestrictedColoring):
        # compose instead of stacking wrappers
        return RestrictedColoring(base.base, base.subset[_as_index_array(subset)])
    return RestrictedColoring(base, subset)


class ColorCounter(Coloring):
    """Counts evaluated pairs per colour.

    Block queries count every evaluated cell; repeated queries count again.
    With ``track_distinct`` the distinct pairs are also recorded, which is
    only sensible for small instances.
    """

    kind = "counter"

    def __init__(self, base: Coloring, track_distinct: bool = False):
        super().__init__(base.n)
        self.base = base
        self.red = 0
        self.blue = 0
        self.distinct: set | None = set() if track_distinct else None

    @property
    def total(self) -> int:
        return self.red + self.blue

    def _tally(self, rows, cols, m):
        r = int(m.sum())
        self.red += r
        self.blue += m.size - r
        if self.distinct is not None:
            for a in _as_index_array(rows).tolist():
                for b in _as_index_array(cols).tolist():
                    if a != b:
                        self.distinct.add((min(a, b), max(a, b)))

    def red_matrix(self, rows, cols) -> np.ndarray:
        m = self.base.red_matrix(rows, cols)
        self._tally(rows, cols, m)
        return m

    def is_red(self, i, j) -> bool:
        v = self.base.is_red(i, j)
        self._tally([i], [j], np.array([[v]]))
        return v


def majority_color(v: int, S: Sequence[int], oracle: Coloring) -> tuple[EdgeColor, int]:
    """Majority colour of the edges from v to S, red on a tie, with its count."""
    if not len(S):
        raise ValueError("majority over an empty set")
    red = int(oracle.red_matrix([v], S).sum())
    blue = len(S) - red
    return (RED, red) if red >= blue else (BLUE, blue)


def neighbours(v: int, S: Sequence[int], oracle: Coloring, c: EdgeColor = RED) -> list[int]:
    """The c-neighbours of v inside S, in the order of S."""
    S = list(S)
    if not S:
        return []
    mask = oracle.color_matrix([v], S, c)[0]
    return [s for s, keep in zip(S, mask) if keep]


def red_neighbours(v: int, S: Sequence[int], oracle: Coloring) -> list[int]:
    return neighbours(v, S, oracle, RED)


def gen_cycle_lower_bound(cycle: int, certify: bool = True) -> FunctionColoring:
    """Colouring of the convex K_{(n-1)^2} with no monochromatic non-crossing C_n.

    Vertices are cut into n-1 consecutive blocks of n-1; edges inside a block
    are blue and edges between blocks are red. The result is checked by the
    exhaustive search before it is returned.
    """
    if cycle < 4:
        raise ValueError("the cycle lower bound needs n >= 4")
    size = cycle - 1
    col = FunctionColoring(
        size * size,
        lambda i, j: (i // size) != (j // size),
        name="cycle_lower_bound",
        params={"cycle": cycle},
    )
    if certify:
        from .bruteforce import contains_mono_noncrossing
        from .graphs import cycle_graph

        found, _ = contains_mono_noncrossing(ExplicitColoring.from_coloring(col), cycle_graph(cycle))
        if found:
            raise AssertionError(f"block colouring for C_{cycle} failed certification")
    return col


def audit_oracle(oracle: Coloring, samples: int = 1000, seed: int = 0) -> bool:
    """Spot-check symmetry and purity on random pairs."""
    if oracle.n < 2:
        return True
    rng = np.random.default_rng(seed)
    i = rng.integers(0, oracle.n, size=samples)
    j = rng.integers(0, oracle.n, size=samples)
    keep = i != j
    i, j = i[keep], j[keep]
    for a, b in zip(i.tolist(), j.tolist()):
        first = oracle.is_red(a, b)
        if oracle.is_red(b, a) != first or oracle.is_red(a, b) != first:
            return False
    block = oracle.red_matrix(i[:50], j[:50])
    return bool(np.array_equal(block, oracle.red_matrix(j[:50], i[:50]).T))


# --- file format -------------------------------------------------------------


def load_coloring(path_or_dict) -> Coloring:
    """Read one of the three coloring file shapes."""
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            data = json.load(fh)
    kind = data.get("kind", "explicit")
    if kind == "explicit" or "red_edges" in data:
        return ExplicitColoring(int(data["n"]), data.get("red_edges", []))
    if kind == "seeded_random":
        return SeededColoring(int(data["n"]), int(data["seed"]))
    if kind == "cycle_lower_bound":
        return gen_cycle_lower_bound(int(data["cycle"]), certify=False)
    if kind in ("all_red", "all_blue"):
        return constant_coloring(int(data["n"]), EdgeColor(kind[4:]))
    raise ValueError(f"unknown coloring kind {kind!r}")


def coloring_to_dict(col: Coloring) -> dict:
    if isinstance(col, ExplicitColoring):
        return {"n": col.n, "red_edges": col.red_edges()}
    if isinstance(col, SeededColoring):
        return {"n": col.n, "kind": "seeded_random", "seed": col.seed}
    if isinstance(col, FunctionColoring) and col.name == "cycle_lower_bound":
        return {"kind": "cycle_lower_bound", "cycle": col.params["cycle"]}
    if isinstance(col, FunctionColoring) and col.name.startswith("all_"):
        return {"n": col.n, "kind": col.name}
    return {"n": col.n, "red_edges": ExplicitColoring.from_coloring(col).red_edges()}


def dump_coloring(col: Coloring, path, extra: dict | None = None) -> None:
    data = coloring_to_dict(col)
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh, separators=(",", ":"))
