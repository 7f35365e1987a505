"""Command line front door.

Exit codes: 0 success, 1 verification failed (first failing check named),
2 bad flags/inputs or search budget exhausted, 3 a stage ran out of room
(SizeTooSmall), 4 internal contradiction (a bug).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .bruteforce import contains_mono_noncrossing, search_N, ramsey_value
from .colorings import (
    BLUE,
    RED,
    ColorCounter,
    ExplicitColoring,
    SeededColoring,
    constant_coloring,
    dump_coloring,
    gen_cycle_lower_bound,
    load_coloring,
)
from .errors import BudgetExceeded, GeoRamseyError, InternalContradiction, SizeTooSmall
from .geometry import ConvexSeq, classify_position, dump_points, gen_convex, gen_general, gen_separated, load_points
from .graphs import cycle_graph, dump_graph, load_graph, make_ladder, path_graph, random_pw2, random_subpattern, as_hosted
from .witness import Biclique, Embedding, dump_witness, load_witness, verify


class UsageError(Exception):
    pass


def emit(event: str, **fields) -> None:
    """One JSON object per line on stderr."""
    sys.stderr.write(json.dumps({"event": event, **fields}, sort_keys=True, default=str) + "\n")


def _file_digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


class RunManifest:
    """Command, parameters and input digests; the hash excludes timings and counts."""

    def __init__(self, command: str, params: dict, inputs: dict):
        self.command = command
        self.params = {k: v for k, v in sorted(params.items()) if k not in ("func",)}
        self.inputs = {k: {"path": p, "sha256": _file_digest(p)} for k, p in sorted(inputs.items()) if p}
        self.outputs: list[str] = []
        self.start = time.perf_counter()
        self.queries = None

    @property
    def core(self) -> dict:
        return {"command": self.command, "parameters": self.params, "inputs": self.inputs, "version": __version__}

    @property
    def digest(self) -> str:
        blob = json.dumps(self.core, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def write(self, path) -> None:
        data = dict(self.core)
        data.update(
            hash=self.digest,
            seeds=[v for k, v in self.params.items() if "seed" in k],
            outputs=self.outputs,
            wall_clock_s=round(time.perf_counter() - self.start, 3),
            queries=self.queries,
        )
        with open(path, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=1, default=str)


def _finish(man: RunManifest, out: str | None) -> None:
    if out:
        man.write(out + ".manifest.json")


# --- gen ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    man = RunManifest(f"gen {args.what}", vars(args), {})
    extra = {"manifest": man.digest}
    if args.what == "points":
        if args.count is None:
            raise UsageError("--count is required")
        if args.mode == "convex":
            P = gen_convex(args.count, args.seed)
        elif args.mode == "general":
            P = gen_general(args.count, 0 if args.seed is None else args.seed)
        else:
            half = args.count // 2
            P = gen_separated(half, args.count - half, 0 if args.seed is None else args.seed)
        dump_points(P, args.out, extra)
        if args.count <= 2000:
            emit("points", count=len(P), position=classify_position(P.to_list()).kind.name)
    elif args.what == "coloring":
        kind = args.kind.replace("-", "_")
        if kind == "cycle_lower_bound":
            if args.cycle is None:
                raise UsageError("--cycle is required")
            col = gen_cycle_lower_bound(args.cycle, certify=True)
            emit("certified", cycle=args.cycle, vertices=col.n)
        else:
            if args.n is None:
                raise UsageError("--n is required")
            if kind == "seeded_random":
                col = SeededColoring(args.n, 0 if args.seed is None else args.seed)
            elif kind in ("all_red", "all_blue"):
                col = constant_coloring(args.n, RED if kind == "all_red" else BLUE)
            else:
                raise UsageError(f"unknown coloring kind {args.kind}")
        dump_coloring(col, args.out, extra)
    else:
        picks = [x is not None for x in (args.ladder, args.pw2, args.path, args.cycle)]
        if sum(picks) != 1:
            raise UsageError("choose exactly one of --ladder, --pw2, --path, --cycle")
        if args.ladder is not None:
            g = make_ladder(args.ladder)
        elif args.pw2 is not None:
            g = random_pw2(args.pw2, 0 if args.seed is None else args.seed)
            if args.drop:
                g = random_subpattern(g, 0 if args.seed is None else args.seed, args.drop)
        elif args.path is not None:
            g = path_graph(args.path)
        else:
            g = cycle_graph(args.cycle)
        dump_graph(g, args.out, extra)
    man.outputs.append(args.out)
    _finish(man, args.out)
    return 0


# --- extract -----------------------------------------------------------------------


def _write_outputs(man: RunManifest, args, w, points) -> None:
    dump_witness(w, args.out, {"manifest": man.digest})
    man.outputs.append(args.out)
    if getattr(args, "svg", None) and points is not None:
        from .svg import write_svg

        write_svg(args.svg, w, points)
        man.outputs.append(args.svg)


def cmd_extract(args) -> int:
    inputs = {"points": getattr(args, "points", None), "coloring": args.coloring, "graph": getattr(args, "graph", None)}
    man = RunManifest(f"extract {args.what}", vars(args), inputs)
    col = ColorCounter(load_coloring(args.coloring))
    points = None
    try:
        if args.what == "ladder":
            from .extractors.ladder import convex_ladder_extract, general_ladder_extract

            points = load_points(args.points)
            _need_cover(points, col)
            trace: dict = {}
            if isinstance(points, ConvexSeq):
                w = convex_ladder_extract(points, args.n, col, trace)
            else:
                w = general_ladder_extract(points, args.n, col, trace=trace)
        elif args.what == "pw2":
            from .extractors.pw2 import pw2_extract_convex, pw2_extract_general

            points = load_points(args.points)
            _need_cover(points, col)
            target = as_hosted(load_graph(args.graph))
            # --n 4 with L_8 reads as the ladder index; anything else is only noted
            if args.n is not None and args.n not in (target.n, target.n // 2):
                emit("warning", message=f"--n {args.n} ignored: the graph has {target.n} vertices")
            trace = {}
            if isinstance(points, ConvexSeq):
                w = pw2_extract_convex(points, target, col, m=args.m, trace=trace)
            else:
                w = pw2_extract_general(points, target, col, m=args.m, trace=trace)
        else:
            from .ordered import OrderedPathSpec, find_clique_or_path

            perm = tuple(int(t) for t in args.perm.split(",")) if args.perm else tuple(range(args.m))
            spec = OrderedPathSpec(perm)
            if args.m is not None and args.m != spec.m:
                raise UsageError("--m disagrees with the length of --perm")
            trace = {"perm": list(perm)}
            w = find_clique_or_path(col.n, args.n, spec, col)
    finally:
        man.queries = col.total
    ok, check = verify(w, points, col)
    if not ok:
        raise InternalContradiction(f"fresh witness failed the '{check}' check")
    _write_outputs(man, args, w, points)
    emit("extracted", kind=w.kind, color=w.color.value, queries=col.total, manifest=man.digest, **_plain(trace))
    _finish(man, args.out)
    return 0


def _plain(trace: dict) -> dict:
    return {k: v for k, v in trace.items() if isinstance(v, (int, str, bool, list, float))}


def _need_cover(points, col) -> None:
    if len(points) > col.n:
        raise UsageError(f"{len(points)} points but the colouring has {col.n} vertices")


# --- verify ------------------------------------------------------------------------


def cmd_verify(args) -> int:
    w = load_witness(args.witness)
    col = load_coloring(args.coloring)
    points = load_points(args.points) if args.points else None
    if points is None and isinstance(w, (Embedding, Biclique)):
        emit("warning", message="no point set given; crossing and separation checks skipped")
    ok, check = verify(w, points, col, args.min_size)
    if ok:
        emit("verified", kind=w.kind)
        return 0
    emit("rejected", check=check)
    print(check)
    return 1


# --- search ------------------------------------------------------------------------


def parse_pattern(text: str):
    kind, _, arg = text.partition(":")
    if not arg.isdigit():
        raise UsageError(f"bad pattern {text!r}; use path:K, cycle:K or ladder:K")
    k = int(arg)
    if kind == "path":
        return path_graph(k)
    if kind == "cycle":
        return cycle_graph(k)
    if kind == "ladder":
        return make_ladder(k).pattern
    raise UsageError(f"unknown pattern kind {kind!r}")


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
        raise UsageError(f"bad range {text!r}; use LO..HI")
    return int(lo), int(hi)


def cmd_search(args) -> int:
    pattern = parse_pattern(args.pattern)
    man = RunManifest("search", vars(args), {"checkpoint": args.checkpoint if args.checkpoint and os.path.exists(args.checkpoint) else None})
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    if args.verify_lb:
        kind, _, k = args.pattern.partition(":")
        if kind != "cycle":
            raise UsageError("--verify-lb applies to cycle patterns")
        col = gen_cycle_lower_bound(int(k), certify=False)
        found, _ = contains_mono_noncrossing(ExplicitColoring.from_coloring(col), pattern)
        path = os.path.join(out_dir, f"cycle{k}_lower_bound.json")
        dump_coloring(col, path, {"certified": not found, "manifest": man.digest})
        man.outputs.append(path)
        emit("lower_bound", cycle=int(k), vertices=col.n, certified=not found)
        _finish(man, path)
        return 0 if not found else 1
    if not args.range:
        raise UsageError("--range is required without --verify-lb")
    lo, hi = parse_range(args.range)
    cp = None
    if args.checkpoint and os.path.exists(args.checkpoint):
        with open(args.checkpoint) as fh:
            cp = json.load(fh)
    reports = []
    for N in range(lo, hi + 1):
        use = cp if cp is not None and cp.get("N") == N else None
        if cp is not None and cp.get("N", 0) > N:
            continue  # finished before the checkpoint was written
        try:
            rep = search_N(pattern, N, budget=args.budget, checkpoint=use)
        except BudgetExceeded as exc:
            path = args.checkpoint or os.path.join(out_dir, "search.checkpoint.json")
            with open(path, "w") as fh:
                json.dump(exc.checkpoint, fh, sort_keys=True)
            emit("budget_exceeded", N=N, checkpoint=path)
            return 2
        reports.append(rep)
        path = os.path.join(out_dir, f"search_{args.pattern.replace(':', '')}_N{N}.json")
        with open(path, "w") as fh:
            json.dump({**rep.to_dict(), "manifest": man.digest}, fh, sort_keys=True)
        man.outputs.append(path)
        emit("searched", N=N, verdict=rep.verdict, examined=rep.colorings_examined)
    for a, b in zip(reports, reports[1:]):
        if a.verdict == "AllColoringsContain" and b.verdict == "CounterexampleColoring":
            raise InternalContradiction("verdicts are not monotone in N")
    value = ramsey_value(reports)
    if value is not None:
        emit("ramsey_value", pattern=args.pattern, value=value)
    _finish(man, os.path.join(out_dir, "search"))
    return 0


# --- report ------------------------------------------------------------------------


def cmd_report(args) -> int:
    from .report import ladder_report, search_report

    man = RunManifest(f"report {args.what}", vars(args), {})
    if args.what == "search":
        lo, hi = parse_range(args.range)
        files = search_report(parse_pattern(args.pattern), args.pattern, lo, hi, args.out)
    else:
        ns = [int(t) for t in args.n.split(",")]
        files = ladder_report(ns, args.seeds, args.out)
    man.outputs.extend(files)
    for f in files:
        if f.endswith(".csv"):
            with open(f) as fh:
                sys.stdout.write(fh.read())
    emit("report", files=files, manifest=man.digest)
    _finish(man, os.path.join(args.out, "report"))
    return 0


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="georamsey", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate points, colourings or graphs")
    g.add_argument("what", choices=["points", "coloring", "graph"])
    g.add_argument("--mode", choices=["convex", "general", "separated"], default="convex")
    g.add_argument("--count", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--kind", default="seeded-random", help="seeded-random, cycle-lower-bound, all-red, all-blue")
    g.add_argument("--n", type=int)
    g.add_argument("--cycle", type=int)
    g.add_argument("--ladder", type=int)
    g.add_argument("--pw2", type=int)
    g.add_argument("--drop", type=int, default=0, help="edges removed from a random PW2 host")
    g.add_argument("--path", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("extract", help="run an extractor and write a certified witness")
    e.add_argument("what", choices=["ladder", "pw2", "ordered"])
    e.add_argument("--n", type=int)
    e.add_argument("--m", type=int)
    e.add_argument("--points")
    e.add_argument("--coloring", required=True)
    e.add_argument("--graph")
    e.add_argument("--perm", help="comma-separated permutation of 0..m-1")
    e.add_argument("--svg")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="re-audit a witness from files")
    v.add_argument("--witness", required=True)
    v.add_argument("--coloring", required=True)
    v.add_argument("--points")
    v.add_argument("--min-size", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="exhaustive convex search")
    s.add_argument("--pattern", required=True, help="path:K, cycle:K or ladder:K")
    s.add_argument("--range", help="LO..HI")
    s.add_argument("--budget", type=int, help="colourings scanned before checkpointing")
    s.add_argument("--checkpoint")
    s.add_argument("--verify-lb", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("report", help="table plus figure for a batch of runs")
    r.add_argument("what", choices=["search", "ladder"])
    r.add_argument("--pattern", default="path:4")
    r.add_argument("--range", default="4..5")
    r.add_argument("--n", default="2,3")
    r.add_argument("--seeds", type=int, default=10)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_report)
    return p


def _validate(args) -> None:
    if args.cmd == "extract":
        if args.what in ("ladder", "pw2") and not args.points:
            raise UsageError("--points is required")
        if args.what == "pw2" and not args.graph:
            raise UsageError("--graph is required")
        if args.what in ("ladder", "ordered") and args.n is None:
            raise UsageError("--n is required")
        if args.what == "ordered" and args.m is None and not args.perm:
            raise UsageError("--m or --perm is required")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except UsageError as exc:
        emit("error", type="usage", message=str(exc))
        return 2
    except SizeTooSmall as exc:
        emit("error", type="size_too_small", stage=exc.stage, message=str(exc))
        return 3
    except InternalContradiction as exc:
        emit("error", type="internal_contradiction", message=str(exc))
        return 4
    except BudgetExceeded as exc:
        emit("error", type="budget_exceeded", message=str(exc))
        return 2
    except (GeoRamseyError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        emit("error", type=type(exc).__name__, message=str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
