"""Command-line front end.

Exit codes: 0 equivalent, 1 inequivalent, 2 inconclusive, 3 usage, parse
or type error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import checker, game_oracle, oracle_contexts
from .lts import final_traces, format_trace
from .pairs import PairFormatError, corpus, read_pair, resolve, split_pair
from .syntax import ParseError, parse
from .typecheck import TypeCheckError, elaborate, elaborate_pair
from .ulpatt import DEFAULT_DOMAIN

EXIT = {"EQUIVALENT": 0, "INEQUIVALENT": 1, "INCONCLUSIVE": 2}
USAGE = 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------- helpers


def _parse_side(text: str, side: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"{side} program: {exc}") from exc


def _load_pair(args) -> tuple:
    if args.left or args.right:
        if not (args.left and args.right) or args.pair:
            raise UsageError("give either a pair file or both --left and --right")
        left = Path(args.left).read_text(encoding="utf-8")
        right = Path(args.right).read_text(encoding="utf-8")
    elif args.pair:
        try:
            left, right = split_pair(resolve(args.pair).read_text(encoding="utf-8"))
        except PairFormatError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError("no programs given")
    return _parse_side(left, "left"), _parse_side(right, "right")


def _options(args) -> checker.Options:
    opts = checker.Options(bound=args.bound, solver=args.solver, timeout=args.timeout)
    for name in checker.ENHANCEMENTS:
        if getattr(args, f"no_{name}"):
            opts = opts.without(name)
    return opts


def _emit(args, payload: dict, lines: list) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False, default=str))
    else:
        for ln in lines:
            print(ln)


# ------------------------------------------------------------ commands


def cmd_check(args) -> int:
    e1, e2 = _load_pair(args)
    v = checker.check(e1, e2, opts=_options(args))
    lines = checker.render(v)
    if isinstance(v, checker.Inequivalent):
        lines.insert(1, f"reason: {v.reason} (distinguished on the {v.side} program's run)")
    elif isinstance(v, checker.Inconclusive):
        lines.append(f"reason: {v.reason}")
    _emit(args, checker.to_json(v), lines)
    return EXIT[v.name]


def cmd_trace(args) -> int:
    """Final (trace, memory) pairs of each program, or random game plays."""
    if args.left or args.right:
        raise UsageError("trace takes a single file")
    text = resolve(args.pair).read_text(encoding="utf-8")
    try:
        sides = split_pair(text)
    except PairFormatError:
        sides = (text,)
    out: dict = {}
    lines: list = []
    rng = random.Random(args.seed)
    for i, src in enumerate(sides):
        label = ("left", "right")[i] if len(sides) == 2 else "program"
        e, tp = elaborate(_parse_side(src, label))
        lines.append(f"== {label} : {_type(tp)}")
        if args.game:
            plays = []
            for _ in range(args.plays):
                t = game_oracle.random_play(game_oracle.program_config(e), rng,
                                            max_moves=args.depth)
                plays.append([str(m) for m in t])
                lines.append(game_oracle.dump_play(t))
                lines.append("")
            out[label] = plays
            continue
        entries = []
        for t, m in final_traces(e, args.depth, DEFAULT_DOMAIN):
            mem = sorted(format_trace(u) for u in m.traces)
            entries.append({"trace": format_trace(t), "memory": mem})
            lines.append(f"{format_trace(t)}    M = {{{'; '.join(mem)}}}")
        out[label] = entries
    _emit(args, out, lines)
    return 0


def _type(tp) -> str:
    from .syntax import show_type
    return show_type(tp)


def cmd_oracle(args) -> int:
    e1, e2 = _load_pair(args)
    a, b, tp = elaborate_pair(e1, e2)
    v = oracle_contexts.oracle_equiv(a, b, depth=args.depth, fuel=args.fuel, tp=tp,
                                     size=args.size, limit=args.limit)
    payload = {"verdict": v.name, "contexts": v.contexts}
    lines = [v.name, f"contexts tried: {v.contexts}"]
    if isinstance(v, oracle_contexts.Inequivalent):
        payload["context"] = str(v.context)
        payload["terminates"] = "left" if v.terminates_left else "right"
        lines.append(f"context: {v.context}")
        lines.append(f"terminates with the {payload['terminates']} program only")
    elif isinstance(v, oracle_contexts.Inconclusive):
        payload["unresolved"] = v.unresolved
        lines.append(f"undecided contexts: {v.unresolved}")
    elif v.truncated:
        payload["truncated"] = True
        lines.append("context limit reached")
    _emit(args, payload, lines)
    return EXIT[v.name]


def _bench_one(job):
    pair, opts = job
    if opts.bound is None:
        # per-pair bound from the file header, else the default
        opts = replace(opts, bound=pair.bound or checker.Options().bound)
    start = time.monotonic()
    v = checker.check(parse(pair.left), parse(pair.right), opts=opts)
    return pair.name, pair.expect, v.name, opts.bound, time.monotonic() - start


def cmd_bench(args) -> int:
    pairs = [read_pair(p) for p in sorted(Path(args.dir).glob("*.pcf"))] if args.dir else corpus()
    if not pairs:
        raise UsageError("no pair files found")
    opts = _options(args)
    jobs = [(p, opts) for p in pairs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    counts = {k: 0 for k in EXIT}
    wrong = []
    total = 0.0
    lines = []
    for name, expect, got, bound, secs in rows:
        counts[got] += 1
        total += secs
        flag = ""
        if expect and got != "INCONCLUSIVE" and got != expect:
            wrong.append(name)
            flag = "  MISMATCH"
        lines.append(f"{name:22s} {got:13s} k={bound:<3d} {secs * 1000:9.1f}ms{flag}")
    lines.append(f"{len(rows)} pairs: {counts['EQUIVALENT']} equivalent, "
                 f"{counts['INEQUIVALENT']} inequivalent, "
                 f"{counts['INCONCLUSIVE']} inconclusive; {total * 1000:.0f}ms total")
    payload = {"pairs": [dict(zip(("name", "expect", "verdict", "bound", "seconds"), r))
                         for r in rows],
               "counts": counts, "seconds": round(total, 4), "mismatches": wrong}
    _emit(args, payload, lines)
    return 1 if wrong else 0


# -------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcfbisim",
                                 description="Bounded equivalence checking for a call-by-value PCF.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def pair_args(p):
        p.add_argument("pair", nargs="?", help="pair file, or the name of a bundled pair")
        p.add_argument("--left", help="file holding the left program")
        p.add_argument("--right", help="file holding the right program")

    def checker_args(p, bound=6):
        p.add_argument("--bound", type=int, default=bound)
        p.add_argument("--solver", default="internal", help="internal | smtlib:<path>")
        p.add_argument("--timeout", type=float, default=None, help="seconds")
        for name in checker.ENHANCEMENTS:
            p.add_argument(f"--no-{name}", action="store_true")

    def common(p):
        p.add_argument("--json", action="store_true")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("check", help="check a pair of programs")
    pair_args(p)
    checker_args(p)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="list final traces and memories of a program")
    pair_args(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--game", action="store_true", help="print random game-LTS plays instead")
    p.add_argument("--plays", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("oracle", help="compare the pair in enumerated applicative contexts")
    pair_args(p)
    p.add_argument("--depth", type=int, default=oracle_contexts.DEFAULT_DEPTH)
    p.add_argument("--size", type=int, default=oracle_contexts.DEFAULT_SIZE)
    p.add_argument("--fuel", type=int, default=5000)
    p.add_argument("--limit", type=int, default=None, help="maximum contexts to try")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run every pair of a corpus")
    p.add_argument("dir", nargs="?", help="directory of pair files (default: bundled corpus)")
    checker_args(p, bound=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else USAGE
    try:
        return args.func(args)
    except (UsageError, ParseError, TypeCheckError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
