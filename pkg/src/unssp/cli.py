"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input error, 3 size-gate refusal.
Errors are written to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import time
from typing import IO, Iterator, Sequence

from .complete_set import NextUspQuery, minimal_complete_set, next_usp, next_usp_by_subsets, representatives
from .enumeration import ALGORITHMS, DEFAULT_MAX_PATHS, PathSink, path_record
from .errors import SizeGateError, UnsspError
from .graph import Graph, parse_graph, serialize
from .instances import RandomSpec, gen_binary_doubling, gen_random, gen_triplet_chain
from .lp_export import emit_nspip, emit_unspip
from .objective import KSUM, parse_lambda, parse_rational, value_of_costs
from .solvers import solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_GATE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _load(path: str) -> Graph:
    if path == "-":
        return parse_graph(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UnsspError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _path_json(result) -> dict | None:
    if result is None:
        return None
    value, path = result
    return {"value": value, "path": path.to_json()}


def cmd_solve(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    lam = parse_lambda(args.lam, g.n)
    res = solve(g, None, g.source, g.sink, lam)
    record = {"value": res.value, "path": res.path.to_json() if res.path else None}
    out.write(json.dumps(record) + "\n")


def cmd_enumerate(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    lam = parse_lambda(args.lam, g.n)
    eps = parse_rational(args.epsilon)
    sink = PathSink(lambda p, v: out.write(path_record(p, v) + "\n"), max_paths=args.max_paths)
    start = time.perf_counter()
    stats = ALGORITHMS[args.algorithm](g, lam, eps, sink)
    record = stats.to_json()
    record["algorithm"] = args.algorithm
    record["wall_time"] = round(time.perf_counter() - start, 6)
    out.write(json.dumps({"stats": record}) + "\n")


def cmd_mincomplete(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    lam = parse_lambda(args.lam, g.n)
    mcs = minimal_complete_set(g, lam, parse_rational(args.epsilon))
    out.write(json.dumps(mcs.to_json()) + "\n")


def cmd_representatives(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    lam = parse_lambda(args.lam, g.n)
    part, picks = representatives(g, lam, parse_rational(args.epsilon), parse_rational(args.delta))
    intervals = part.to_json() if part is not None else [{"lo": "0", "hi": "0", "closed": True}]
    records = [dict(interval, witness=_path_json(p)) for interval, p in zip(intervals, picks)]
    out.write(json.dumps(records) + "\n")


def cmd_next_usp(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    lam = parse_lambda(args.lam, g.n)
    if args.method == "subsets":
        if lam.family != KSUM or lam.k is None:
            raise UsageError("--method subsets needs --lambda ksum:<k>")
        if args.psi is None:
            raise UsageError("--method subsets needs --psi")
        mu = args.mu if args.mu is not None else args.xi - 1
        ok, path = next_usp_by_subsets(g, lam.k, mu, args.psi)
        result = None
        if ok:
            assert path is not None
            result = (value_of_costs(path.costs(g), lam), path)
    else:
        result = next_usp(g, NextUspQuery(lam, mu=args.mu, psi=args.psi, xi=args.xi))
    out.write(json.dumps(_path_json(result)) + "\n")


def cmd_emit_lp(args: argparse.Namespace, out: IO[str]) -> None:
    g = _load(args.graph)
    if args.model == "nspip":
        if args.lam is not None:
            raise UsageError("the nspip model takes no --lambda")
        out.write(emit_nspip(g, args.xi))
    else:
        lam = parse_lambda(args.lam or "sum", g.n)
        out.write(emit_unspip(g, lam, args.xi))


def cmd_gen(args: argparse.Namespace, out: IO[str]) -> None:
    if args.family == "triplet":
        g = gen_triplet_chain(args.b)
    elif args.family == "doubling":
        g = gen_binary_doubling(args.n)
    else:
        g = gen_random(RandomSpec(args.n, args.m, args.cost_max, args.seed))
    out.write(serialize(g))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unssp", description="Universal near shortest simple paths.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, lam_required: bool = True) -> None:
        p.add_argument("graph", help="graph file, or - for stdin")
        p.add_argument("--lambda", dest="lam", required=lam_required, help="sum | bottleneck | ksum:K | kmax:K | vec:W1,...")
        p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("solve", help="universal shortest path")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", help="stream all near shortest simple paths as JSON lines")
    common(p)
    p.add_argument("--epsilon", required=True, help="num/den or integer")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="alg2")
    p.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("mincomplete", help="one path per distinct value within the bound")
    common(p)
    p.add_argument("--epsilon", required=True)
    p.set_defaults(func=cmd_mincomplete)

    p = sub.add_parser("representatives", help="one path per geometric value interval")
    common(p)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--delta", required=True)
    p.set_defaults(func=cmd_representatives)

    p = sub.add_parser("next-usp", help="cheapest path with value at least xi")
    common(p)
    lower = p.add_mutually_exclusive_group(required=True)
    lower.add_argument("--xi", type=int)
    lower.add_argument("--mu", type=int, help="same as --xi MU+1")
    p.add_argument("--psi", type=int, help="upper cap on the value")
    p.add_argument("--method", choices=["enumerate", "subsets"], default="enumerate")
    p.set_defaults(func=cmd_next_usp)

    p = sub.add_parser("emit-lp", help="write an LP-format model (xi: lower bound for nspip, offset above f* for unspip)")
    p.add_argument("model", choices=["nspip", "unspip"])
    common(p, lam_required=False)
    p.add_argument("--xi", type=int, required=True)
    p.set_defaults(func=cmd_emit_lp)

    p = sub.add_parser("gen", help="write a generated graph file")
    p.add_argument("family", choices=["triplet", "doubling", "random"])
    p.add_argument("--b", type=int, default=3, help="blocks (triplet)")
    p.add_argument("--n", type=int, default=6, help="vertices (doubling, random)")
    p.add_argument("--m", type=int, default=12, help="arcs (random)")
    p.add_argument("--cost-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_paths", 0) < 0:
            raise UsageError("--max-paths must be nonnegative")
        with _output(args.output) as out:
            args.func(args, out)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except SizeGateError as exc:
        return _fail("size_gate", str(exc), EXIT_GATE)
    except UnsspError as exc:
        return _fail("input", str(exc), EXIT_INPUT)
    except OverflowError as exc:
        return _fail("input", str(exc), EXIT_INPUT)
    return EXIT_OK


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away; silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
