"""Batch reports: a delimited table plus a matplotlib figure per run."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bruteforce import search_N  # noqa: E402
from .colorings import ColorCounter, SeededColoring  # noqa: E402
from .errors import SizeTooSmall  # noqa: E402
from .extractors.ladder import convex_bound, convex_ladder_extract  # noqa: E402
from .geometry import gen_convex  # noqa: E402
from .graphs import Graph  # noqa: E402
from .witness import verify  # noqa: E402

_PNG_META = {"Software": None}


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def search_report(pattern: Graph, label: str, N_lo: int, N_hi: int, out_dir: str) -> list[str]:
    """Verdict and orbit counts per N; the figure shows canonical colourings examined."""
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for N in range(N_lo, N_hi + 1):
        r = search_N(pattern, N)
        rows.append([N, r.verdict, r.colorings_examined, r.orbit_total, f"{r.symmetry_reduction:.3f}"])
    csv_path = os.path.join(out_dir, "search.csv")
    _write_csv(csv_path, ["N", "verdict", "canonical_examined", "colorings_covered", "reduction"], rows)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    colours = ["#2c5d9c" if r[1] == "AllColoringsContain" else "#c0392b" for r in rows]
    ax.bar([r[0] for r in rows], [r[2] for r in rows], color=colours)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("canonical colourings examined")
    ax.set_title(f"{label}: blue = every colouring contains it")
    fig.tight_layout()
    png = os.path.join(out_dir, "search.png")
    fig.savefig(png, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return [csv_path, png]


def ladder_report(ns: list[int], seeds: int, out_dir: str) -> list[str]:
    """Convex ladder runs at the bound: outcome, certification and query counts."""
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for n in ns:
        N = convex_bound(n)
        C = gen_convex(N)
        for s in range(seeds):
            col = ColorCounter(SeededColoring(N, s))
            trace: dict = {}
            try:
                w = convex_ladder_extract(C, n, col, trace)
                ok, _ = verify(w, C, col)
                outcome = trace.get("outcome", "")
            except SizeTooSmall as exc:
                ok, outcome = False, f"size:{exc.stage}"
            rows.append([n, N, s, outcome, int(ok), col.total])
    csv_path = os.path.join(out_dir, "ladder.csv")
    _write_csv(csv_path, ["n", "points", "seed", "outcome", "certified", "queries"], rows)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for n in ns:
        q = [r[5] for r in rows if r[0] == n]
        ax.scatter([n] * len(q), q, s=10, color="#2c5d9c")
    ax.set_xlabel("n")
    ax.set_ylabel("colour queries per run")
    ax.set_xticks(ns)
    ax.set_title("convex ladder extraction at 32 n^3 points")
    fig.tight_layout()
    png = os.path.join(out_dir, "ladder.png")
    fig.savefig(png, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return [csv_path, png]
