"""Deterministic SVG drawings of witnesses on their point sets."""

from __future__ import annotations

from .geometry import PointSet
from .witness import Biclique, Embedding

SIZE = 600
PAD = 20
MAX_BACKGROUND = 2000  # draw every point only for small sets

_STROKE = {"red": "#c0392b", "blue": "#2c5d9c"}


def _frame(points: PointSet, idx):
    xs = [int(points.xs[i]) for i in idx]
    ys = [int(points.ys[i]) for i in idx]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1)
    scale = (SIZE - 2 * PAD) / span

    def at(i):
        x = PAD + (int(points.xs[i]) - x0) * scale
        y = SIZE - PAD - (int(points.ys[i]) - y0) * scale
        return f"{x:.2f}", f"{y:.2f}"

    return at


def render(w, points: PointSet, known_red: list | None = None) -> str:
    """SVG text: points as dots, witness edges solid, ``known_red`` edges dashed."""
    if isinstance(w, Embedding):
        used = sorted(set(w.mapping.values()))
        edges = w.edge_images()
    elif isinstance(w, Biclique):
        used = sorted(set(w.L) | set(w.R))
        edges = [(a, b) for a in w.L for b in w.R]
    else:
        raise TypeError("only geometric witnesses can be drawn")
    background = list(range(len(points))) if len(points) <= MAX_BACKGROUND else used
    at = _frame(points, background)
    colour = _STROKE[w.color.value]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for a, b in known_red or []:
        (x1, y1), (x2, y2) = at(a), at(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{_STROKE["red"]}" stroke-width="1" stroke-dasharray="4 3"/>')
    for a, b in edges:
        (x1, y1), (x2, y2) = at(a), at(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="2"/>')
    hot = set(used)
    for i in background:
        x, y = at(i)
        r = 4 if i in hot else 1.5
        fill = "black" if i in hot else "#999999"
        out.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, w, points: PointSet, **kw) -> None:
    with open(path, "w") as fh:
        fh.write(render(w, points, **kw))
