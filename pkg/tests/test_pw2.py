import numpy as np
import pytest

from georamsey.colorings import BLUE, RED, ColorCounter, FunctionColoring, SeededColoring, constant_coloring
from georamsey.errors import InternalContradiction, StageSizeFailure
from georamsey.extractors.pw2 import (
    GammaPrime,
    PW2Sizes,
    _contradiction_or_size,
    _Escape,
    build_scaffold,
    convex_bound,
    fit_m,
    general_bound,
    leaf_partition,
    pw2_core,
    pw2_extract_convex,
    pw2_extract_general,
    refine_scaffold,
)
from georamsey.geometry import convex_pair, gen_avoiding_pair, gen_convex, gen_general
from georamsey.graphs import as_hosted, make_ladder, random_pw2, random_subpattern
from georamsey.witness import Biclique, Embedding, verify


def test_sizes_at_n4_m16():
    s = PW2Sizes(4, 16)
    assert (s.z_block, s.a_prime, s.c_block) == (8192, 1024, 36864)
    assert s.side == 163_840 and s.guaranteed
    assert s.used(2) == (3 * 8192, 3 * 2048 + 2 * 36864)
    assert s.used(2)[1] == 79_872 <= s.side
    n, m = 4, 16
    assert 9 * m * m * n * n - 2 * n * n * m * m >= m
    assert convex_bound(4) == 327_680
    assert general_bound(4) == 777_600 * 4**22
    assert not PW2Sizes(3, 9).guaranteed and not PW2Sizes(4, 15).guaranteed


def test_fit_m():
    assert fit_m(4, 2, 163_840, 163_840) == 16
    assert fit_m(8, 4, 163_840, 163_840) == 5  # the L_8 host has 8 vertices and 4 stem vertices on one side
    assert fit_m(4, 2, 10, 10) == 1


def _convex(hp, m):
    need = max(PW2Sizes(hp.n, m).used(hp.host.stem.ell))
    C = gen_convex(2 * need)
    return C, convex_pair(C, list(range(need)), list(range(need, 2 * need)))


def _order(pair):
    return {v: i for i, v in enumerate(pair.A)}, {v: i for i, v in enumerate(pair.B)}


def _check_scaffold(sc, pair, sizes, oracle, ell):
    pa, pb = _order(pair)
    assert len(sc.A_prime) == ell and len(sc.B) == len(sc.M) + 1 == ell
    assert all(len(b) == sizes.z_block for b in sc.B)
    assert all(len(a) == sizes.a_prime for a in sc.A_prime)
    assert all(len(x) == sizes.c_block for x in sc.M)
    # B_1 < ... < B_l and A'_1 < M_1 < A'_2 < ... in the visibility orders
    for b1, b2 in zip(sc.B, sc.B[1:]):
        assert max(pa[v] for v in b1) < min(pa[v] for v in b2)
    seq = [sc.A_prime[0]]
    for M, A in zip(sc.M, sc.A_prime[1:]):
        seq += [M, A]
    for s1, s2 in zip(seq, seq[1:]):
        assert max(pb[v] for v in s1) < min(pb[v] for v in s2)
    for A, B in zip(sc.A_prime, sc.B):
        counts = oracle.color_matrix(A, B, sc.color).sum(axis=1)
        assert (2 * counts >= len(B)).all()


@pytest.mark.parametrize("seed", range(4))
def test_scaffold_conditions(seed):
    hp = make_ladder(2)
    m = 2
    C, pair = _convex(hp, m)
    sizes = PW2Sizes(4, m)
    col = SeededColoring(len(C), seed)
    sc = build_scaffold(pair, 2, sizes, col)
    _check_scaffold(sc, pair, sizes, col, 2)


def test_scaffold_all_red_takes_first_vertices():
    hp = make_ladder(2)
    m = 2
    C, pair = _convex(hp, m)
    sizes = PW2Sizes(4, m)
    sc = build_scaffold(pair, 2, sizes, constant_coloring(len(C), RED))
    assert sc.color is RED and sc.picks == [0, 1]
    d, c = sizes.d_block, sizes.c_block
    assert sc.A_prime[0] == list(pair.B[: sizes.a_prime])
    assert sc.A_prime[1] == list(pair.B[d + c : d + c + sizes.a_prime])
    ref = refine_scaffold(pair, sc, hp, sizes)
    assert ref.A == [a[: 2 * m] for a in sc.A_prime]
    sc = build_scaffold(pair, 2, sizes, constant_coloring(len(C), BLUE))
    assert sc.color is BLUE and sc.swapped


@pytest.mark.parametrize("seed", range(3))
def test_refinement_compatibility_full_count(seed):
    hp = as_hosted(random_pw2(6, 2))
    m = 2
    C, pair = _convex(hp, m)
    sizes = PW2Sizes(6, m)
    col = SeededColoring(len(C), seed)
    sc = build_scaffold(pair, hp.host.stem.ell, sizes, col)
    ref = refine_scaffold(pair, sc, hp, sizes)
    red = sc.view
    for i in range(len(ref.A) - 1):
        assert len(ref.A[i]) == 2 * m
        left = red.red_matrix(ref.A[i], sc.B[i]).astype(int)
        right = red.red_matrix(ref.A[i + 1], sc.B[i]).astype(int)
        assert ((left @ right.T) >= sizes.common).all()


def _adversary(pair, sizes):
    """Every edge red except A'_1 -> second half of B_1 and A'_2 -> first half of B_1."""
    N = len(pair.points)
    z, d, c = sizes.z_block, sizes.d_block, sizes.c_block
    group = np.zeros(N, dtype=np.int8)
    B1 = list(pair.A[:z])
    group[B1[: z // 2]] = 1
    group[B1[z // 2 :]] = 2
    group[list(pair.B[:d])] = 3
    group[list(pair.B[d + c : 2 * d + c])] = 4

    def fn(i, j):
        gi, gj = group[i], group[j]
        blue = ((gi == 3) & (gj == 2)) | ((gi == 2) & (gj == 3)) | ((gi == 4) & (gj == 1)) | ((gi == 1) & (gj == 4))
        return ~blue

    return FunctionColoring(N, fn, "split_compatibility")


def test_refine_escape_adversarial():
    hp = make_ladder(2)
    m = 2
    C, pair = _convex(hp, m)
    sizes = PW2Sizes(4, m)
    col = _adversary(pair, sizes)
    sc = build_scaffold(pair, 2, sizes, col)
    assert sc.color is RED
    with pytest.raises(_Escape):
        refine_scaffold(pair, sc, hp, sizes, {})
    tr = {}
    w = pw2_core(pair, hp, m, col, tr)
    assert tr["outcome"] == "refine:wellsplit" and tr["refine_escape"] == 1
    assert isinstance(w, Embedding) and verify(w, C, col) == (True, None)


def test_leaf_partition_sizes():
    s = PW2Sizes(5, 25)
    Mi = list(range(s.c_block))
    for f in (2, 3, 4, 5):
        parts = leaf_partition(Mi, f, s)
        assert len(parts) == f and sum(map(len, parts)) == len(Mi)
        assert len(parts[0]) >= s.end_leaf and len(parts[-1]) >= s.end_leaf
        assert all(len(p) >= s.mid_leaf for p in parts[1:-1])
    with pytest.raises(StageSizeFailure):
        leaf_partition(list(range(10)), 30, PW2Sizes(5, 1))


def test_gamma_prime_only_changes_consecutive_blocks():
    hp = as_hosted(random_pw2(5, 1))
    m = 2
    C, pair = _convex(hp, m)
    sizes = PW2Sizes(5, m)
    col = SeededColoring(len(C), 4)
    sc = build_scaffold(pair, 2, sizes, col)
    ref = refine_scaffold(pair, sc, hp, sizes)
    f = hp.host.stem.f
    parts = {0: leaf_partition(sc.M[0], f[0], sizes)}
    gp = GammaPrime(sc.view, ref.A, sc.M, f, parts, sizes)
    rng = np.random.default_rng(0)
    rows = np.concatenate([ref.A[0], rng.choice(len(C), 30, replace=False)])
    cols = np.concatenate([ref.A[1], rng.choice(len(C), 30, replace=False)])
    diff = gp.red_matrix(rows, cols) != sc.view.red_matrix(rows, cols)
    inside = np.isin(rows, ref.A[0])[:, None] & np.isin(cols, ref.A[1])[None, :]
    assert not (diff & ~inside).any()


@pytest.mark.parametrize("seed,n", [(1, 5), (2, 6), (8, 7), (1, 4)])
def test_leaf_attachment_invariant(seed, n):
    hp = as_hosted(random_pw2(n, seed))
    stem = hp.host.stem
    m = 2
    C, pair = _convex(hp, m)
    col = constant_coloring(len(C), RED)
    tr = {"detail": True}
    w = pw2_core(pair, hp, m, col, tr)
    assert tr["outcome"] == "embedding" and verify(w, C, col)[0]
    for i, v in enumerate(stem.stem_v):
        assert w.mapping[v] == tr["phi_v"][i] and w.mapping[v] in tr["A"][i]
    H = set().union(*map(set, tr["H"]))
    assert all(w.mapping[x] in H for x in hp.host.path_u)
    for i, Q in enumerate(stem.Q):
        if len(Q) < 2:
            continue
        for q in Q:
            hat, Mp = tr["leaf_sets"][q]
            assert w.mapping[q] in Mp and set(Mp) <= set(hat)
        # the M' sets follow each other in the order, one leaf in each
        _, pb = _order(pair)
        sets = [tr["leaf_sets"][q][1] for q in Q]
        for s1, s2 in zip(sets, sets[1:]):
            assert max(pb[v] for v in s1) < min(pb[v] for v in s2)


@pytest.mark.parametrize("seed", range(6))
def test_core_reduced_random(seed):
    hp = as_hosted(random_pw2(5, 1))
    m = 3
    need = max(PW2Sizes(5, m).used(2))
    P, pair = gen_avoiding_pair(need, seed)
    col = SeededColoring(len(P), seed)
    tr = {}
    try:
        w = pw2_core(pair, hp, m, col, tr)
    except StageSizeFailure as e:
        assert e.stage
        return
    assert isinstance(w, (Embedding, Biclique))
    assert verify(w, P, col, min_size=m) == (True, None)


@pytest.mark.parametrize("c", [RED, BLUE])
def test_convex_monochromatic(c):
    hp = make_ladder(2)
    C, _ = _convex(hp, 4)
    col = constant_coloring(len(C), c)
    w = pw2_extract_convex(C, hp, col, m=4)
    assert w.color is c and verify(w, C, col)[0]


@pytest.mark.parametrize("seed", range(4))
def test_convex_reduced_random(seed):
    host = random_pw2(4, seed)
    hp = random_subpattern(host, seed, 1)
    C = gen_convex(40_000, seed)
    col = ColorCounter(SeededColoring(len(C), seed))
    tr = {}
    w = pw2_extract_convex(C, hp, col, trace=tr)
    assert verify(w, C, col) == (True, None)
    assert w.pattern.edges == hp.pattern.edges
    assert col.total > 0


def test_convex_below_bound_is_stage_labelled():
    with pytest.raises(StageSizeFailure) as e:
        pw2_extract_convex(gen_convex(50), make_ladder(2), SeededColoring(50, 0))
    assert e.value.stage == "scaffold"


def test_general_front_end():
    hp = make_ladder(2)
    P = gen_general(200, 3)
    with pytest.raises(StageSizeFailure) as e:
        pw2_extract_general(P, hp, SeededColoring(200, 0))
    assert e.value.stage in ("mutually_avoiding_subsets", "scaffold")
    m = 2
    need = max(PW2Sizes(4, m).used(2))
    Q, pair = gen_avoiding_pair(need, 1)
    col = constant_coloring(len(Q), RED)
    w = pw2_extract_general(Q, hp, col, pair=pair, m=m)
    assert w.color is RED and verify(w, Q, col)[0]


def test_contradiction_only_when_guaranteed():
    assert isinstance(_contradiction_or_size(PW2Sizes(4, 16), "x", ""), InternalContradiction)
    err = _contradiction_or_size(PW2Sizes(4, 3), "path_u", "")
    assert isinstance(err, StageSizeFailure) and err.stage == "path_u"
