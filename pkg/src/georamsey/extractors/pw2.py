"""Monochromatic pathwidth-2 outerplanar triangulations on mutually avoiding sets.

The core routine takes an avoiding pair (S_u, S_v), a pattern G hosted in
G' in PW2(n) and a parameter m. It returns either a monochromatic
non-crossing copy of G or a monochromatic separable K_{m,m}. Sets are
consumed in the visibility order of each side, so the final map sends path x
along an increasing path of S_u and path y along an increasing path of S_v.

All reasoning is done in a view of the colouring where the scaffold colour
reads as red; witnesses are translated back before they are returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..colorings import BLUE, RED, Coloring, EdgeColor, oriented
from ..errors import BudgetExceeded, InternalContradiction, SizeTooSmall, StageSizeFailure
from ..geometry import AvoidingPair, ConvexSeq, PointSet, convex_pair, separable_to_avoiding
from ..graphs import HostedPattern, as_hosted
from ..witness import Biclique, Embedding
from .ladder import avoiding_halves
from .lemmas import BicliqueResult, longpath_or_biclique, pw2_from_wellsplit, restrict_pair


@dataclass(frozen=True)
class PW2Sizes:
    n: int
    m: int

    @property
    def guaranteed(self) -> bool:
        return self.n >= 4 and self.m >= self.n**2

    @property
    def side(self) -> int:
        return 10 * self.m**2 * self.n**3

    @property
    def z_block(self) -> int:
        return 8 * self.m * self.n**3

    @property
    def d_block(self) -> int:
        return 8 * self.m * self.n**2

    @property
    def c_block(self) -> int:
        return 9 * self.m**2 * self.n**2

    @property
    def a_prime(self) -> int:
        return 4 * self.m * self.n**2

    @property
    def a_block(self) -> int:
        return 2 * self.m

    @property
    def common(self) -> int:
        return 3 * self.n * self.m

    @property
    def split(self) -> int:
        return self.n**2

    @property
    def end_leaf(self) -> int:
        return 4 * self.m**2 * self.n**2

    @property
    def mid_leaf(self) -> int:
        return 3 * self.m * self.n**2

    @property
    def h_block(self) -> int:
        return 2 * self.n * self.m

    def used(self, ell: int) -> tuple[int, int]:
        """Points consumed on (S_u, S_v) by the initial slicing."""
        K = 2 * ell - 1
        return K * self.z_block, K * self.d_block + (K - 1) * self.c_block


@dataclass
class PartitionScaffold:
    color: EdgeColor  # scaffold colour in the original colouring
    view: Coloring  # colouring in which that colour reads red
    A_prime: list
    B: list
    M: list
    picks: list  # indices k_i of the chosen D blocks

    @property
    def swapped(self) -> bool:
        return self.color is BLUE


@dataclass
class RefinedScaffold:
    scaffold: PartitionScaffold
    A: list
    leaf_parts: dict = field(default_factory=dict)  # i -> increasing partition of M_i when f_i >= 2


def _red_counts(view: Coloring, rows, cols) -> np.ndarray:
    return view.red_matrix(rows, cols).sum(axis=1)


def _common(view: Coloring, rows, other, cols) -> np.ndarray:
    """Common red neighbour counts in ``cols`` for every (row, other) pair."""
    a = view.red_matrix(rows, cols).astype(np.float32)
    b = view.red_matrix(other, cols).astype(np.float32)
    return np.rint(a @ b.T).astype(np.int64)


def _nbrs(view: Coloring, v: int, cols) -> list[int]:
    cols = list(cols)
    mask = view.red_matrix([v], cols)[0]
    return [c for c, keep in zip(cols, mask) if keep]


def build_scaffold(pair: AvoidingPair, ell: int, sizes: PW2Sizes, oracle: Coloring) -> PartitionScaffold:
    """Blocks B_i of S_u and A'_i < M_i < A'_{i+1} of S_v with a common majority colour."""
    K = 2 * ell - 1
    need_u, need_v = sizes.used(ell)
    if len(pair.A) < need_u or len(pair.B) < need_v:
        raise StageSizeFailure("scaffold", f"slicing needs {need_u} + {need_v} points, have {len(pair.A)} + {len(pair.B)}")
    Su, Sv = list(pair.A), list(pair.B)
    z, d, c = sizes.z_block, sizes.d_block, sizes.c_block
    Z = [Su[k * z : (k + 1) * z] for k in range(K)]
    D = [Sv[k * (d + c) : k * (d + c) + d] for k in range(K)]
    C = [Sv[k * (d + c) + d : (k + 1) * (d + c)] for k in range(K - 1)]
    red_vertices = []
    for k in range(K):
        counts = _red_counts(oracle, D[k], Z[k])
        red_vertices.append(2 * counts >= len(Z[k]))
    block_red = [2 * int(r.sum()) >= len(r) for r in red_vertices]
    colour = RED if sum(block_red) >= ell else BLUE
    picks = [k for k in range(K) if block_red[k] == (colour is RED)][:ell]
    A_prime = []
    for k in picks:
        keep = red_vertices[k] if colour is RED else ~red_vertices[k]
        members = [v for v, t in zip(D[k], keep) if t]
        A_prime.append(members[: sizes.a_prime])
    B = [Z[k] for k in picks]
    M = [C[k] for k in picks[:-1]]
    return PartitionScaffold(colour, oriented(oracle, colour), A_prime, B, M, picks)


class _Escape(Exception):
    """Carries a finished witness out of a nested stage."""

    def __init__(self, witness):
        super().__init__("escape")
        self.witness = witness


def _wellsplit_escape(pair: AvoidingPair, L, R, target: HostedPattern, sc: PartitionScaffold, k: int, stage: str, trace: dict):
    k = min(k, len(L), len(R))
    if k < 2:
        raise StageSizeFailure(stage, f"blue biclique {len(L)}x{len(R)} is too small")
    sub = restrict_pair(pair, list(L)[:k], list(R)[:k])
    try:
        emb = pw2_from_wellsplit(sub, BLUE, target, sc.view)
    except SizeTooSmall as exc:
        raise StageSizeFailure(stage, f"{k}x{k} biclique: {exc}") from exc
    trace["outcome"] = f"{stage}:wellsplit"
    raise _Escape(_translate(emb, sc))


def refine_scaffold(
    pair: AvoidingPair, sc: PartitionScaffold, target: HostedPattern, sizes: PW2Sizes, trace: dict | None = None
) -> RefinedScaffold:
    """Shrink each A'_j to 2m vertices pairwise compatible with A_{j-1}.

    Compatible means at least 3nm common red neighbours in B_{j-1}. A vertex of
    A_{j-1} with n^2 incompatible partners yields a blue biclique between
    those partners and its private red neighbours in B_{j-1}, which hosts the
    pattern directly (raised as an escape).
    """
    trace = trace if trace is not None else {}
    view = sc.view
    a = sizes.a_block
    if len(sc.A_prime[0]) < a:
        raise StageSizeFailure("refine", f"first block has {len(sc.A_prime[0])} < {a} vertices")
    A = [sc.A_prime[0][:a]]
    for j in range(1, len(sc.A_prime)):
        prev, cand, B = A[-1], sc.A_prime[j], sc.B[j - 1]
        common = _common(view, prev, cand, B)
        ok = common >= sizes.common
        bad_counts = (~ok).sum(axis=1)
        hit = np.nonzero(bad_counts >= sizes.split)[0]
        if hit.size:
            v = prev[int(hit[0])]
            W = [w for w, good in zip(cand, ok[int(hit[0])]) if not good][: sizes.split]
            S = _nbrs(view, v, B)
            Ts = [_nbrs(view, w, B) for w in W]
            Cset = _survivors(S, Ts)
            trace["refine_escape"] = j
            _wellsplit_escape(pair, Cset, W, target, sc, sizes.split, "refine", trace)
        members = [w for w, good in zip(cand, ok.all(axis=0)) if good]
        if len(members) < a:
            raise StageSizeFailure("refine", f"only {len(members)} common-compatible vertices in block {j}")
        A.append(members[:a])
    return RefinedScaffold(sc, A)


def _survivors(S, Ts):
    removed = set()
    for T in Ts:
        removed.update(T)
    return [v for v in S if v not in removed]


def leaf_partition(Mi: list, f: int, sizes: PW2Sizes) -> list[list[int]]:
    """Increasing partition of M_i: big end blocks, 3mn^2 middle blocks."""
    end, mid = sizes.end_leaf, sizes.mid_leaf
    parts = [Mi[:end]]
    pos = end
    for _ in range(f - 2):
        parts.append(Mi[pos : pos + mid])
        pos += mid
    parts.append(Mi[pos:])
    if any(not p for p in parts):
        raise StageSizeFailure("leaf_partition", f"{len(Mi)} vertices cannot form {f} leaf blocks")
    return parts


class GammaPrime(Coloring):
    """The recoloured view: edges between consecutive refined blocks encode leaf room.

    f_i = 1: red iff at least n^2 common red neighbours in M_i.
    f_i >= 2: red iff the A_i end has 3mn^2 red neighbours in M_{i,1} and the
    A_{i+1} end has 3mn^2 red neighbours in M_{i,f_i}.
    Other edges keep their colour.
    """

    kind = "recoloured"

    def __init__(self, base: Coloring, A: list, M: list, f: list, leaf_parts: dict, sizes: PW2Sizes):
        super().__init__(base.n)
        self.base = base
        self.A = A
        self.block = {}
        self.pos = {}
        for i, blk in enumerate(A):
            for p, v in enumerate(blk):
                self.block[v] = i
                self.pos[v] = p
        self.tables = {}
        for i, fi in enumerate(f):
            if fi == 1:
                self.tables[i] = _common(base, A[i], A[i + 1], M[i]) >= sizes.split
            elif fi >= 2:
                first, last = leaf_parts[i][0], leaf_parts[i][-1]
                left = _red_counts(base, A[i], first) >= sizes.mid_leaf
                right = _red_counts(base, A[i + 1], last) >= sizes.mid_leaf
                self.tables[i] = left[:, None] & right[None, :]

    def red_matrix(self, rows, cols) -> np.ndarray:
        rows = [int(r) for r in np.asarray(rows).reshape(-1)]
        cols = [int(c) for c in np.asarray(cols).reshape(-1)]
        out = self.base.red_matrix(rows, cols).copy()
        for a, r in enumerate(rows):
            br = self.block.get(r)
            if br is None:
                continue
            for b, c in enumerate(cols):
                bc = self.block.get(c)
                if bc is None:
                    continue
                if bc == br + 1 and br in self.tables:
                    out[a, b] = self.tables[br][self.pos[r], self.pos[c]]
                elif br == bc + 1 and bc in self.tables:
                    out[a, b] = self.tables[bc][self.pos[c], self.pos[r]]
        return out


def _translate(w, sc: PartitionScaffold):
    """Witness in the view -> witness in the original colouring."""
    if not sc.swapped:
        return w
    if isinstance(w, Embedding):
        return Embedding(w.pattern, w.mapping, w.color.other)
    return Biclique(w.L, w.R, w.color.other, w.certificate)


def _blue_biclique(L, R, m: int, stage: str, sc: PartitionScaffold, trace: dict):
    if min(len(L), len(R)) < m:
        raise StageSizeFailure(stage, f"blue biclique {len(L)}x{len(R)} below {m}")
    trace["outcome"] = f"{stage}:biclique"
    return _translate(Biclique(tuple(L[:m]), tuple(R[:m]), BLUE, "separable"), sc)


def _recoloured_escape(res: BicliqueResult, ref: RefinedScaffold, gp: GammaPrime, f, m, sizes, trace):
    """Turn a blue biclique of the recoloured view into a genuine blue one."""
    sc, view = ref.scaffold, ref.scaffold.view
    i = res.index
    L, R = list(res.left)[:m], list(res.right)[:m]
    if f[i] == 0:
        return _blue_biclique(L, R, m, "stem_path", sc, trace)
    if f[i] == 1:
        Mi = sc.M[i]
        counts = _red_counts(view, L, Mi)
        heavy = np.nonzero(counts >= 2 * sizes.split * m)[0]
        if not heavy.size:
            C = _survivors(Mi, [_nbrs(view, v, Mi) for v in L])
            return _blue_biclique(L, C, m, "stem_path_single", sc, trace)
        N = _nbrs(view, L[int(heavy[0])], Mi)
        C = _survivors(N, [_nbrs(view, w, N) for w in R])
        return _blue_biclique(R, C, m, "stem_path_single", sc, trace)
    first, last = ref.leaf_parts[i][0], ref.leaf_parts[i][-1]
    left_ok = _red_counts(view, L, first) >= sizes.mid_leaf
    if not left_ok.any():
        C = _survivors(first, [_nbrs(view, v, first) for v in L])
        return _blue_biclique(L, C, m, "stem_path_star", sc, trace)
    right_ok = _red_counts(view, R, last) >= sizes.mid_leaf
    if right_ok.any():
        raise InternalContradiction("recoloured biclique has a red pair on both ends")
    C = _survivors(last, [_nbrs(view, w, last) for w in R])
    return _blue_biclique(R, C, m, "stem_path_star", sc, trace)


def _first_common(view, a, b, cols, k):
    cols = list(cols)
    mask = view.red_matrix([a, b], cols).all(axis=0)
    got = [c for c, keep in zip(cols, mask) if keep]
    return got[:k]


def pw2_core(pair: AvoidingPair, target, m: int, oracle: Coloring, trace: dict | None = None):
    """Embedding of the pattern or a blue/red separable K_{m,m}, both certified by the caller.

    Raises StageSizeFailure when a size requirement fails (only possible
    below the guaranteed sizes) and InternalContradiction on a logic error.
    """
    trace = trace if trace is not None else {}
    hp = as_hosted(target)
    host = hp.host
    stem = host.stem
    if stem is None:
        raise ValueError("host must carry its stem decomposition")
    sizes = PW2Sizes(host.n, m)
    ell = stem.ell
    f = stem.f
    trace.update(n=host.n, m=m, ell=ell, f=f)
    try:
        sc = build_scaffold(pair, ell, sizes, oracle)
        trace["colour"] = sc.color.value
        ref = refine_scaffold(pair, sc, hp, sizes, trace)
        return _assemble(pair, hp, ref, sizes, trace)
    except _Escape as esc:
        return esc.witness


def _assemble(pair: AvoidingPair, hp: HostedPattern, ref: RefinedScaffold, sizes: PW2Sizes, trace: dict):
    sc = ref.scaffold
    view = sc.view
    host, stem = hp.host, hp.host.stem
    f = stem.f
    m = sizes.m
    ell = stem.ell
    for i, fi in enumerate(f):
        if fi >= 2:
            ref.leaf_parts[i] = leaf_partition(sc.M[i], fi, sizes)
    gp = GammaPrime(view, ref.A, sc.M, f, ref.leaf_parts, sizes)
    res = longpath_or_biclique(ref.A, gp, RED)
    if isinstance(res, BicliqueResult):
        return _recoloured_escape(res, ref, gp, f, m, sizes, trace)
    phi_v = list(res.vertices)
    phi: dict = {stem.stem_v[i]: phi_v[i] for i in range(ell)}

    H, tilde, hat = [], {}, {}
    for i in range(ell - 1):
        Hp = _first_common(view, phi_v[i], phi_v[i + 1], sc.B[i], sizes.common)
        if len(Hp) < sizes.common:
            raise _contradiction_or_size(sizes, "common", f"{len(Hp)} common neighbours in B_{i}")
        if f[i] == 0:
            H.append(Hp)
        elif f[i] == 1:
            Mt = _first_common(view, phi_v[i], phi_v[i + 1], sc.M[i], sizes.split)
            if len(Mt) < sizes.split:
                raise _contradiction_or_size(sizes, "leaf_single", f"{len(Mt)} common neighbours in M_{i}")
            tilde[i] = Mt
            reach = view.red_matrix(Hp, Mt).any(axis=1)
            Hi = [h for h, r in zip(Hp, reach) if r]
            lonely = [h for h, r in zip(Hp, reach) if not r]
            if len(lonely) > sizes.split:
                _wellsplit_escape(pair, lonely, Mt, hp, sc, sizes.split, "leaf_single", trace)
            H.append(Hi)
        else:
            parts = ref.leaf_parts[i]
            mh = [list(p) for p in parts]
            mh[0] = _nbrs(view, phi_v[i], parts[0])
            mh[-1] = _nbrs(view, phi_v[i + 1], parts[-1])
            hat[i] = mh
            counts = np.stack([_red_counts(view, Hp, part) for part in mh], axis=1)
            good = (counts >= 2 * m).all(axis=1)
            if int(good.sum()) >= sizes.h_block:
                H.append([h for h, g in zip(Hp, good) if g][: sizes.h_block])
                continue
            label = np.argmax(counts < 2 * m, axis=1)
            bad = ~good
            tally = np.bincount(label[bad], minlength=len(mh))
            j = int(np.argmax(tally))
            W = [h for h, b, lb in zip(Hp, bad, label) if b and lb == j][: sizes.split]
            C = _survivors(mh[j], [_nbrs(view, w, mh[j]) for w in W])
            trace["star_label"] = j
            _wellsplit_escape(pair, W, C, hp, sc, sizes.split, "leaf_star", trace)

    # path x along increasing parts of the H_i
    blocks = []
    for i in range(ell - 1):
        k = len(stem.U[i])
        size = len(H[i]) // k
        if size < 2 * m:
            raise _contradiction_or_size(sizes, "path_u", f"H_{i} of {len(H[i])} cannot give {k} parts of {2 * m}")
        for t in range(k):
            blocks.append(H[i][t * size : (t + 1) * size] if t < k - 1 else H[i][t * size :])
    r = longpath_or_biclique(blocks, view, RED)
    if isinstance(r, BicliqueResult):
        return _blue_biclique(list(r.left), list(r.right), m, "path_u", sc, trace)
    for x, p in zip(host.path_u, r.vertices):
        phi[x] = p

    for i in range(ell - 1):
        if f[i] == 0:
            continue
        ui = phi[stem.stem_u[i]]
        if f[i] == 1:
            cand = _nbrs(view, ui, tilde[i])
            if not cand:
                raise InternalContradiction("stem vertex lost its leaf neighbour")
            phi[stem.Q[i][0]] = cand[0]
            continue
        Mp = [_nbrs(view, ui, part)[: 2 * m] for part in hat[i]]
        if any(len(p) < 2 * m for p in Mp):
            raise _contradiction_or_size(sizes, "leaf_path", "a leaf block has fewer than 2m red neighbours")
        lp = longpath_or_biclique(Mp, view, RED)
        if isinstance(lp, BicliqueResult):
            return _blue_biclique(list(lp.left), list(lp.right), m, "leaf_path", sc, trace)
        for j, (q, p) in enumerate(zip(stem.Q[i], lp.vertices)):
            phi[q] = p
            if trace.get("detail"):
                trace.setdefault("leaf_sets", {})[q] = (hat[i][j], Mp[j])
    if trace.get("detail"):
        trace.update(phi_v=phi_v, H=H, A=ref.A, B=sc.B)
    if len(phi) != host.n:
        raise InternalContradiction("embedding does not cover the host")
    trace["outcome"] = "embedding"
    emb = Embedding(host.graph, phi, RED).restrict(hp.pattern)
    return _translate(emb, sc)


def _contradiction_or_size(sizes: PW2Sizes, stage: str, detail: str):
    if sizes.guaranteed:
        return InternalContradiction(f"{stage}: {detail}")
    return StageSizeFailure(stage, detail)


# --- front ends ----------------------------------------------------------------------


def fit_m(n: int, ell: int, side_u: int, side_v: int) -> int:
    """n^2, or below the bound the largest m whose slicing fits the sides."""
    m = n * n
    while m > 1 and any(need > have for need, have in zip(PW2Sizes(n, m).used(ell), (side_u, side_v))):
        m -= 1
    return m


def convex_bound(n: int) -> int:
    return 20 * n**7


def general_bound(n: int) -> int:
    return 10**2 * 6**5 * n**22


def pw2_extract_convex(S: ConvexSeq, target, oracle: Coloring, m: int | None = None, trace: dict | None = None) -> Embedding:
    """Monochromatic non-crossing copy of the pattern on a convex sequence.

    The halves are an avoiding pair; a separable biclique from the core is
    well-split in convex position and hosts the pattern directly.
    """
    trace = trace if trace is not None else {}
    hp = as_hosted(target)
    n = hp.n
    half = len(S) // 2
    if m is None:
        m = fit_m(n, hp.host.stem.ell, half, half)
    pair = convex_pair(S, list(range(half)), list(range(half, 2 * half)))
    trace.update(bound=convex_bound(n), m=m)
    w = pw2_core(pair, hp, m, oracle, trace)
    if isinstance(w, Embedding):
        return w
    # below n^2 the chain step may still succeed; it fails with a stage label otherwise
    k = min(n * n, w.size)
    sub = convex_pair(S, sorted(w.L)[:k], sorted(w.R)[:k])
    try:
        emb = pw2_from_wellsplit(sub, w.color, hp, oracle)
    except SizeTooSmall as exc:
        raise StageSizeFailure("wellsplit", f"{k}x{k} biclique: {exc}") from exc
    trace["outcome"] = trace.get("outcome", "") + "+wellsplit"
    return emb


def pw2_extract_general(
    P: PointSet,
    target,
    oracle: Coloring,
    pair: AvoidingPair | None = None,
    m: int | None = None,
    trace: dict | None = None,
    budget: int = 200_000,
) -> Embedding:
    """Monochromatic non-crossing copy of the pattern on points in general position."""
    trace = trace if trace is not None else {}
    hp = as_hosted(target)
    n = hp.n
    m = 6 * n**4 if m is None else m
    trace["bound"] = general_bound(n)
    if pair is None:
        side = PW2Sizes(n, m).side
        k = min(side, math.isqrt(len(P) // 12))
        if k < n:
            raise StageSizeFailure("mutually_avoiding_subsets", f"{len(P)} points give avoiding parts of {k}")
        try:
            pair = avoiding_halves(P, k, budget)
        except (SizeTooSmall, BudgetExceeded) as exc:
            raise StageSizeFailure("mutually_avoiding_subsets", str(exc)) from exc
    w = pw2_core(pair, hp, m, oracle, trace)
    if isinstance(w, Embedding):
        return w
    k = min(n * n, w.size)
    try:
        sub = separable_to_avoiding(P, list(w.L), list(w.R), k)
        return pw2_from_wellsplit(sub, w.color, hp, oracle)
    except (SizeTooSmall, BudgetExceeded) as exc:
        raise StageSizeFailure(getattr(exc, "stage", "separable_to_avoiding"), str(exc)) from exc
