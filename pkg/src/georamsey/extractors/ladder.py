"""Monochromatic non-crossing ladders from 2-coloured complete geometric graphs."""

from __future__ import annotations

import math
from typing import Sequence

from ..colorings import BLUE, RED, Coloring, EdgeColor, oriented
from ..errors import BudgetExceeded, SizeTooSmall, StageSizeFailure
from ..graphs import ladder_graph
from ..geometry import AvoidingPair, ConvexSeq, PointSet, convex_pair, mutually_avoiding_subsets, separable_to_avoiding
from ..witness import Embedding
from .lemmas import BicliqueResult, ladder_from_wellsplit, longpath_or_biclique

C1 = 192  # per-side avoiding-set constant c_1 (blocks of c_1 n^4 / 2)


def convex_bound(n: int) -> int:
    return 32 * n**3


def general_bound(n: int, c1: int = C1) -> int:
    """Points needed so that both halves yield c_1 n^5 avoiding points."""
    return 2 * 6 * (c1 * n**5) ** 2


def chunks(seq: Sequence[int], size: int, count: int) -> list[list[int]]:
    seq = list(seq)
    return [seq[i * size : (i + 1) * size] for i in range(count)]


def _vertex_colours(A_blocks, B_blocks, view: Coloring):
    """Red vertices of every A block (>= half red neighbours in its B block)."""
    red_sets = []
    for A, B in zip(A_blocks, B_blocks):
        counts = view.red_matrix(A, B).sum(axis=1)
        red_sets.append([v for v, c in zip(A, counts) if 2 * int(c) >= len(B)])
    return red_sets


def _flip(emb: Embedding, swapped: bool) -> Embedding:
    return Embedding(emb.pattern, emb.mapping, emb.color.other) if swapped else emb


def ladder_on_pair(
    pair: AvoidingPair,
    n: int,
    oracle: Coloring,
    block: int | None = None,
    biclique_pair=None,
    trace: dict | None = None,
) -> Embedding:
    """The convex-halves pipeline run on any avoiding pair.

    ``biclique_pair(L, R, k)`` turns a monochromatic biclique inside one side
    into an avoiding pair of k + k points for the ladder step.
    """
    trace = trace if trace is not None else {}
    size = min(len(pair.A), len(pair.B))
    if block is None:
        block = min(8 * n * n, size // (2 * n))
    if block < 1:
        raise StageSizeFailure("partition", f"{size} points per side cannot form {2 * n} blocks")
    A_blocks = chunks(pair.A, block, 2 * n)
    B_blocks = chunks(pair.B, block, 2 * n)
    trace["block"] = block

    swapped = False
    view = oracle
    red = _vertex_colours(A_blocks, B_blocks, view)
    red_blocks = [j for j in range(2 * n) if 2 * len(red[j]) >= block]
    if len(red_blocks) < n:
        swapped = True
        view = oriented(oracle, BLUE)
        red = _vertex_colours(A_blocks, B_blocks, view)
        red_blocks = [j for j in range(2 * n) if 2 * len(red[j]) >= block]
    trace["swapped"] = swapped
    js = red_blocks[:n]
    D = [red[j] for j in js]
    k = 2 * n * n

    def from_biclique(res: BicliqueResult, stage: str) -> Embedding:
        trace["outcome"] = stage
        L, R = list(res.left), list(res.right)
        sub = biclique_pair(L, R, k)
        return _flip(ladder_from_wellsplit(sub, res.color, n, view), swapped)

    if any(not d for d in D):
        raise StageSizeFailure("vertex_colour", "a chosen block has no majority-coloured vertex")
    r1 = longpath_or_biclique(D, view, RED)
    if isinstance(r1, BicliqueResult):
        return from_biclique(r1, "first_biclique")
    v = list(r1.vertices)
    F = []
    for vi, j in zip(v, js):
        mask = view.red_matrix([vi], B_blocks[j])[0]
        F.append([b for b, keep in zip(B_blocks[j], mask) if keep])
    r2 = longpath_or_biclique(F, view, RED)
    if isinstance(r2, BicliqueResult):
        return from_biclique(r2, "second_biclique")
    trace["outcome"] = "two_paths"
    w = list(r2.vertices)
    mapping = {i: v[i] for i in range(n)}
    mapping.update({n + i: w[i] for i in range(n)})
    return _flip(Embedding(ladder_graph(n), mapping, RED), swapped)


def convex_ladder_extract(C: ConvexSeq, n: int, oracle: Coloring, trace: dict | None = None) -> Embedding:
    """Monochromatic non-crossing L_{2n} on a convex sequence of >= 32 n^3 points.

    Smaller inputs are attempted with proportionally smaller blocks; a failure
    there is reported as a stage-labelled SizeTooSmall.
    """
    if n < 1:
        raise ValueError("n must be positive")
    N = len(C)
    half = N // 2
    pair = convex_pair(C, list(range(half)), list(range(half, 2 * half)))

    def biclique_pair(L, R, k):
        if min(len(L), len(R)) < k:
            raise StageSizeFailure("wellsplit", f"biclique {len(L)}x{len(R)} below {k}")
        # any k points of each part keep the biclique well-split
        return convex_pair(C, sorted(L)[:k], sorted(R)[:k])

    if trace is not None:
        trace.update(bound=convex_bound(n), points=N)
    return ladder_on_pair(pair, n, oracle, biclique_pair=biclique_pair, trace=trace)


def _line_halves(P: PointSet) -> tuple[list[int], list[int]]:
    order = sorted(range(len(P)), key=lambda i: (int(P.xs[i]), int(P.ys[i])))
    h = len(order) // 2
    return order[:h], order[h : 2 * h]


def avoiding_halves(P: PointSet, k: int, budget: int = 200_000) -> AvoidingPair:
    L, R = _line_halves(P)
    return mutually_avoiding_subsets(P, L, R, k, strict=False, budget=budget)


def general_ladder_extract(
    P: PointSet,
    n: int,
    oracle: Coloring,
    pair: AvoidingPair | None = None,
    c1: int = C1,
    trace: dict | None = None,
    budget: int = 200_000,
) -> Embedding:
    """Monochromatic non-crossing L_{2n} on points in general position.

    Without an injected avoiding pair, the point set is halved by a line and
    the largest affordable avoiding pair is searched for. Bicliques found
    inside one side are shrunk to 2n^2 + 2n^2 avoiding points.
    """
    trace = trace if trace is not None else {}
    trace["bound"] = general_bound(n, c1)
    if pair is None:
        half = len(P) // 2
        k = min(c1 * n**5, math.isqrt(half // 6))
        if k < 2 * n:
            raise StageSizeFailure("mutually_avoiding_subsets", f"{len(P)} points give avoiding parts of {k} < {2 * n}")
        try:
            pair = avoiding_halves(P, k, budget)
        except (SizeTooSmall, BudgetExceeded) as exc:
            raise StageSizeFailure("mutually_avoiding_subsets", str(exc)) from exc
    block = min(c1 * n**4 // 2, min(len(pair.A), len(pair.B)) // (2 * n))

    def biclique_pair(L, R, k):
        if min(len(L), len(R)) < k:
            raise StageSizeFailure("separable_to_avoiding", f"biclique {len(L)}x{len(R)} below {k}")
        try:
            return separable_to_avoiding(P, L, R, k)
        except (SizeTooSmall, BudgetExceeded) as exc:
            raise StageSizeFailure("separable_to_avoiding", str(exc)) from exc

    return ladder_on_pair(pair, n, oracle, block=block, biclique_pair=biclique_pair, trace=trace)
