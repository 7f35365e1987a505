"""Exhaustive ground truth: embedding search, colouring enumeration, exact small values.

Convex instances use positions 0..N-1 around the polygon; two chords cross
exactly when their endpoints interleave, so no coordinates are needed.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .colorings import BLUE, RED, Coloring, EdgeColor, ExplicitColoring, coloring_to_dict
from .errors import BudgetExceeded, InternalContradiction, SizeTooSmall
from .geometry import PointSet, segments_cross
from .graphs import Graph
from .witness import Embedding, check_witness, CheckFailure

CHECKPOINT_VERSION = 1


def _interleave(a: int, b: int, c: int, d: int) -> bool:
    if len({a, b, c, d}) < 4:
        return False
    if a > b:
        a, b = b, a
    return (a < c < b) != (a < d < b)


def _crossing_test(points: PointSet | None):
    if points is None or points.is_convex:
        return _interleave

    def geo(a, b, c, d):
        if len({a, b, c, d}) < 4:
            return False
        return segments_cross(points[a], points[b], points[c], points[d])

    return geo


def _search_order(pattern: Graph) -> list[int]:
    """Vertices so that each one after the first of its component has an earlier neighbour."""
    order, seen = [], set()
    for start in sorted(range(pattern.n), key=lambda v: -pattern.degree(v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(pattern.adj[v], key=lambda w: -pattern.degree(w)):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _table(coloring: Coloring) -> np.ndarray:
    if isinstance(coloring, ExplicitColoring):
        return coloring.table
    idx = np.arange(coloring.n)
    t = np.array(coloring.red_matrix(idx, idx), dtype=bool)
    np.fill_diagonal(t, False)
    return t


def contains_mono_noncrossing(
    coloring: Coloring,
    pattern: Graph,
    C: PointSet | None = None,
    prune: bool = True,
    colors: Iterable[EdgeColor] = (RED, BLUE),
) -> tuple[bool, Embedding | None]:
    """Exact search for a monochromatic non-crossing copy of ``pattern``.

    With ``prune`` the map is extended one vertex at a time and rejected as
    soon as an edge has the wrong colour or crosses an earlier edge. Without
    it every injective map is generated and checked in full (slow path used
    to revalidate counterexamples).
    """
    N = coloring.n
    if C is not None and len(C) < N:
        raise ValueError("point set smaller than the colouring")
    k = pattern.n
    if k > N:
        return False, None
    red = _table(coloring)
    cross = _crossing_test(C)
    edges = pattern.sorted_edges()
    for c in colors:
        want = c is RED
        ok = red if want else ~red
        if prune:
            found = _backtrack(pattern, ok, cross, N)
        else:
            found = _exhaustive(pattern, edges, ok, cross, N)
        if found is not None:
            return True, Embedding(pattern, found, c)
    return False, None


def _exhaustive(pattern, edges, ok, cross, N):
    k = pattern.n
    for img in itertools.permutations(range(N), k):
        if not all(ok[img[a], img[b]] for a, b in edges):
            continue
        segs = [(img[a], img[b]) for a, b in edges]
        if any(cross(p, q, r, s) for (p, q), (r, s) in itertools.combinations(segs, 2)):
            continue
        return {v: img[v] for v in range(k)}
    return None


def _backtrack(pattern: Graph, ok: np.ndarray, cross, N: int):
    order = _search_order(pattern)
    back = {}
    placed = set()
    for v in order:
        back[v] = [w for w in pattern.adj[v] if w in placed]
        placed.add(v)
    img: dict = {}
    used = [False] * N
    drawn: list[tuple[int, int]] = []

    def extend(t: int):
        if t == len(order):
            return True
        v = order[t]
        for p in range(N):
            if used[p]:
                continue
            new = []
            good = True
            for w in back[v]:
                q = img[w]
                if not ok[p, q]:
                    good = False
                    break
                new.append((p, q))
            if not good:
                continue
            if any(cross(a, b, c, d) for a, b in new for c, d in drawn):
                continue
            img[v] = p
            used[p] = True
            drawn.extend(new)
            if extend(t + 1):
                return True
            del drawn[len(drawn) - len(new) :]
            used[p] = False
            del img[v]
        return False

    return dict(img) if extend(0) else None


# --- exhaustive colouring enumeration ------------------------------------------------


def edge_index(N: int) -> dict:
    return {e: i for i, e in enumerate(itertools.combinations(range(N), 2))}


def _symmetry_perms(N: int) -> list[np.ndarray]:
    """Edge-bit permutations of the dihedral group acting on convex positions."""
    idx = edge_index(N)
    perms = []
    for r in range(N):
        for flip in (False, True):
            perm = np.empty(len(idx), dtype=np.int64)
            for (a, b), e in idx.items():
                fa, fb = ((-a + r) % N, (-b + r) % N) if flip else ((a + r) % N, (b + r) % N)
                perm[e] = idx[(min(fa, fb), max(fa, fb))]
            perms.append(perm)
    return perms


def _images(x: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    one = np.uint64(1)
    for e, t in enumerate(perm):
        out |= ((x >> np.uint64(e)) & one) << np.uint64(int(t))
    return out


def canonical_block(start: int, stop: int, N: int, perms=None) -> tuple[np.ndarray, np.ndarray]:
    """Canonical colourings in [start, stop) and the size of each one's orbit.

    The group is the dihedral group of the polygon times the global colour swap.
    """
    E = N * (N - 1) // 2
    perms = _symmetry_perms(N) if perms is None else perms
    full = np.uint64((1 << E) - 1)
    x = np.arange(start, stop, dtype=np.uint64)
    canon = np.ones(len(x), dtype=bool)
    stab = np.zeros(len(x), dtype=np.int64)
    for perm in perms:
        im = _images(x, perm)
        for y in (im, im ^ full):
            canon &= x <= y
            stab += x == y
    group = 2 * len(perms)
    return x[canon], group // stab[canon]


def noncrossing_masks(pattern: Graph, N: int) -> np.ndarray:
    """Edge-bit masks of every non-crossing copy of ``pattern`` on the convex N-gon."""
    idx = edge_index(N)
    edges = pattern.sorted_edges()
    order = _search_order(pattern)
    masks = set()
    back = {}
    placed = set()
    for v in order:
        back[v] = [w for w in pattern.adj[v] if w in placed]
        placed.add(v)
    img: dict = {}

    def extend(t: int, drawn: list):
        if t == len(order):
            m = 0
            for a, b in edges:
                p, q = img[a], img[b]
                m |= 1 << idx[(min(p, q), max(p, q))]
            masks.add(m)
            return
        v = order[t]
        for p in range(N):
            if p in img.values():
                continue
            new = [(p, img[w]) for w in back[v]]
            if any(_interleave(a, b, c, d) for a, b in new for c, d in drawn):
                continue
            img[v] = p
            extend(t + 1, drawn + new)
            del img[v]

    extend(0, [])
    return np.array(sorted(masks), dtype=np.uint64)


def _contains_batch(x: np.ndarray, masks: np.ndarray) -> np.ndarray:
    hit = np.zeros(len(x), dtype=bool)
    for m in masks:
        y = x & m
        hit |= (y == m) | (y == 0)
    return hit


def coloring_from_bits(N: int, bits: int) -> ExplicitColoring:
    edges = [e for e, i in edge_index(N).items() if bits >> i & 1]
    return ExplicitColoring(N, edges)


@dataclass
class SearchReport:
    pattern: Graph
    N: int
    verdict: str  # AllColoringsContain | CounterexampleColoring | Partial
    colorings_examined: int  # canonical representatives checked
    symmetry_reduction: float
    counterexample: ExplicitColoring | None = None
    orbit_total: int = 0  # colourings covered by the examined orbits
    checkpoint: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "pattern": self.pattern.to_dict(),
            "N": self.N,
            "verdict": self.verdict,
            "colorings_examined": self.colorings_examined,
            "orbit_total": self.orbit_total,
            "symmetry_reduction": self.symmetry_reduction,
        }
        if self.counterexample is not None:
            d["counterexample"] = coloring_to_dict(self.counterexample)
        if self.checkpoint is not None:
            d["checkpoint"] = self.checkpoint
        d.update(self.extra)
        return d


def search_N(
    pattern: Graph,
    N: int,
    budget: int | None = None,
    checkpoint: dict | None = None,
    block: int = 1 << 16,
    stop_at_counterexample: bool = True,
) -> SearchReport:
    """Enumerate colourings of the convex K_N up to symmetry and test each for the pattern.

    ``budget`` caps the raw colourings scanned in this call; when it runs out
    a BudgetExceeded carries a checkpoint from which the scan resumes.
    """
    E = N * (N - 1) // 2
    total = 1 << E
    if budget is not None:
        block = max(1, min(block, budget))
    if pattern.n > N:
        # no copy fits; the all-red colouring is a counterexample
        return SearchReport(pattern, N, "CounterexampleColoring", 1, float(total), ExplicitColoring(N, list(edge_index(N))), total)
    perms = _symmetry_perms(N)
    masks = noncrossing_masks(pattern, N)
    start, examined, covered = 0, 0, 0
    if checkpoint is not None:
        if checkpoint.get("version") != CHECKPOINT_VERSION or checkpoint.get("N") != N:
            raise ValueError("checkpoint does not match this search")
        if checkpoint.get("pattern") != pattern.to_dict():
            raise ValueError("checkpoint belongs to another pattern")
        start, examined, covered = checkpoint["next"], checkpoint["examined"], checkpoint["orbit_total"]
    scanned = 0
    counter = None
    pos = start
    while pos < total:
        if budget is not None and scanned >= budget:
            cp = {"version": CHECKPOINT_VERSION, "N": N, "pattern": pattern.to_dict(), "next": pos, "examined": examined, "orbit_total": covered}
            rep = SearchReport(pattern, N, "Partial", examined, covered / max(examined, 1), None, covered, cp)
            exc = BudgetExceeded(f"search at N={N} stopped after {scanned} colourings", cp)
            exc.report = rep
            raise exc
        stop = min(total, pos + block)
        reps, orbit = canonical_block(pos, stop, N, perms)
        hit = _contains_batch(reps, masks) if len(masks) else np.zeros(len(reps), dtype=bool)
        miss = np.nonzero(~hit)[0]
        if miss.size and stop_at_counterexample:
            j = int(miss[0])
            examined += j + 1
            covered += int(orbit[: j + 1].sum())
            counter = coloring_from_bits(N, int(reps[j]))
            break
        examined += len(reps)
        covered += int(orbit.sum())
        scanned += stop - pos
        pos = stop
    if counter is not None:
        found, _ = contains_mono_noncrossing(counter, pattern, prune=False)
        if found:
            raise InternalContradiction("counterexample failed slow-path revalidation")
        return SearchReport(pattern, N, "CounterexampleColoring", examined, total / max(examined, 1), counter, covered)
    if covered != total:
        raise InternalContradiction(f"orbits cover {covered} of {total} colourings")
    return SearchReport(pattern, N, "AllColoringsContain", examined, total / max(examined, 1), None, covered)


def exact_convex_ramsey(pattern: Graph, N_lo: int, N_hi: int, budget: int | None = None) -> list[SearchReport]:
    """One report per N in [N_lo, N_hi], with the monotonicity of the verdicts checked."""
    reports = []
    for N in range(N_lo, N_hi + 1):
        reports.append(search_N(pattern, N, budget=budget))
    for a, b in zip(reports, reports[1:]):
        if a.verdict == "AllColoringsContain" and b.verdict == "CounterexampleColoring":
            raise InternalContradiction(f"verdicts not monotone between N={a.N} and N={b.N}")
    return reports


def ramsey_value(reports: list[SearchReport]) -> int | None:
    """Least N with AllColoringsContain, when the N just below has a counterexample."""
    for a, b in zip(reports, reports[1:]):
        if a.verdict == "CounterexampleColoring" and b.verdict == "AllColoringsContain":
            return b.N
    return None


def orbit_accounting(N: int) -> tuple[int, int]:
    """(sum of orbit sizes over canonical colourings, 2^C(N,2))."""
    E = N * (N - 1) // 2
    _, orbit = canonical_block(0, 1 << E, N)
    return int(orbit.sum()), 1 << E


# --- differential testing ----------------------------------------------------------


@dataclass
class AgreementReport:
    runs: int = 0
    successes: int = 0
    size_failures: int = 0
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def verify_extractor_against_oracle(
    extractor: Callable[[Coloring], object],
    pattern: Graph,
    points: PointSet,
    sample: Iterable[Coloring],
    dump_dir: str | None = None,
) -> AgreementReport:
    """Every extractor witness must certify and the oracle must agree that a copy exists."""
    rep = AgreementReport()
    for t, col in enumerate(sample):
        rep.runs += 1
        try:
            w = extractor(col)
        except SizeTooSmall:
            rep.size_failures += 1
            continue
        problem = None
        try:
            check_witness(w, points, col)
        except CheckFailure as exc:
            problem = f"witness rejected: {exc.check}"
        if problem is None:
            found, _ = contains_mono_noncrossing(ExplicitColoring.from_coloring(col), pattern, points)
            if not found:
                problem = "oracle found no copy"
        if problem is None:
            rep.successes += 1
            continue
        rep.discrepancies.append((t, problem))
        if dump_dir:
            os.makedirs(dump_dir, exist_ok=True)
            with open(os.path.join(dump_dir, f"discrepancy_{t}.json"), "w") as fh:
                json.dump({"problem": problem, "coloring": coloring_to_dict(ExplicitColoring.from_coloring(col)), "witness": w.to_dict()}, fh)
    return rep
