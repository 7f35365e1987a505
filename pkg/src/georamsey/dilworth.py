"""Chains and antichains in the increasing-monochromatic-path order.

For an ordered vertex sequence S and a colour c, u < v when an increasing
c-coloured path leads from u to v. A longest chain is a longest increasing
c-path; the level sets of the longest-path DP are antichains, and any two
vertices in one level are joined by an edge of the other colour.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .colorings import Coloring, EdgeColor
from .errors import SizeTooSmall


@dataclass(frozen=True)
class Chain:
    vertices: tuple
    color: EdgeColor


@dataclass(frozen=True)
class Antichain:
    vertices: tuple
    color: EdgeColor  # colour of every pair inside the antichain


def chain_levels(S: Sequence[int], c: EdgeColor, oracle: Coloring) -> tuple[np.ndarray, np.ndarray]:
    """Longest increasing c-path ending at each position, and predecessor positions.

    Ties between predecessors go to the earliest one in S.
    """
    k = len(S)
    level = np.ones(k, dtype=np.int64)
    pred = np.full(k, -1, dtype=np.int64)
    if k < 2:
        return level, pred
    adj = oracle.color_matrix(S, S, c)
    for j in range(1, k):
        cand = np.nonzero(adj[:j, j])[0]
        if cand.size:
            best = level[cand]
            top = best.max()
            level[j] = top + 1
            pred[j] = cand[np.argmax(best == top)]
    return level, pred


def longest_chain(S: Sequence[int], c: EdgeColor, oracle: Coloring) -> list[int]:
    S = list(S)
    if not S:
        return []
    level, pred = chain_levels(S, c, oracle)
    j = int(np.argmax(level == level.max()))
    out = []
    while j >= 0:
        out.append(S[j])
        j = int(pred[j])
    return out[::-1]


def chain_or_antichain(S: Sequence[int], c: EdgeColor, a: int, b: int, oracle: Coloring) -> Chain | Antichain:
    """An increasing c-path on ``a`` vertices, or ``b`` vertices pairwise joined in the other colour.

    Guaranteed to succeed when |S| >= (a-1)(b-1)+1.
    """
    S = list(S)
    if a <= 0:
        return Chain((), c)
    level, pred = chain_levels(S, c, oracle)
    hit = np.nonzero(level == a)[0] if len(S) else np.array([], dtype=np.int64)
    if hit.size:
        j = int(hit[0])
        out = []
        while j >= 0:
            out.append(S[j])
            j = int(pred[j])
        return Chain(tuple(out[::-1]), c)
    # every level is below a, so the level sets are fewer than a antichains
    counts = np.bincount(level, minlength=a)[1:]
    best = int(np.argmax(counts)) + 1 if counts.size else 0
    if not counts.size or counts[best - 1] < b:
        raise SizeTooSmall(
            "chain_or_antichain",
            f"|S|={len(S)}: longest chain {int(level.max()) if len(S) else 0} < {a} and largest level "
            f"{int(counts.max()) if counts.size else 0} < {b}",
        )
    members = [S[i] for i in np.nonzero(level == best)[0][:b]]
    return Antichain(tuple(members), c.other)


def check_chain(ch: Chain, S: Sequence[int], oracle: Coloring) -> bool:
    pos = {v: i for i, v in enumerate(S)}
    vs = list(ch.vertices)
    if any(v not in pos for v in vs):
        return False
    if any(pos[x] >= pos[y] for x, y in zip(vs, vs[1:])):
        return False
    return all(oracle.has_color(x, y, ch.color) for x, y in zip(vs, vs[1:]))


def check_antichain(ac: Antichain, oracle: Coloring) -> bool:
    vs = list(ac.vertices)
    if len(vs) < 2:
        return True
    m = oracle.color_matrix(vs, vs, ac.color)
    np.fill_diagonal(m, True)
    return bool(m.all())
