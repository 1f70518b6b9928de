"""Command-line front end.

Exit codes: 0 success, 2 input/validation error, 3 resource budget exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, TextIO

from . import cycles as cyc
from . import graph, hamilton, ops
from .errors import (
    BudgetExceededError,
    CrossJoinError,
    DomainError,
    InvariantViolationError,
    UnsupportedOperationError,
)
from .formats import parse_cycle, parse_int_list, read_cycles_jsonl, write_cycles_jsonl

log = logging.getLogger("crossjoin")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

DEFAULT_BUDGET = 1_000_000

FORMATS = {
    "edges": ("text", "json", "dot"),
    "cycles": ("json", "text"),
    "counts": ("text",),
    "distance": ("text",),
    "crossjoin apply": ("text", "json"),
    "crossjoin neighbors": ("text", "json"),
    "crossjoin histogram": ("csv", "json"),
    "crossjoin connectivity": ("text", "json", "dot"),
    "crossjoin path": ("text", "json"),
    "hamilton run": ("text", "json"),
    "hamilton verify": ("text",),
    "hamilton find-cycle-seed": ("text", "json"),
}


@dataclass
class RunConfig:
    command: str
    n: int | None
    d: int | None
    format: str
    out: str | None
    threads: int
    budget: int

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise DomainError(f"--budget must be positive, got {self.budget}")
        if self.threads <= 0:
            raise DomainError(f"--threads must be positive, got {self.threads}")
        allowed = FORMATS[self.command]
        if self.format not in allowed:
            raise DomainError(
                f"format {self.format!r} not available for '{self.command}' (choose from {', '.join(allowed)})"
            )

    def params(self) -> graph.DigraphParams:
        if self.n is None or self.d is None:
            raise DomainError("--n and --d are required")
        return graph.DigraphParams(self.n, self.d)


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _config(args: argparse.Namespace) -> RunConfig:
    fmt = args.format or FORMATS[args.command][0]
    return RunConfig(args.command, args.n, args.d, fmt, args.out, args.threads, args.budget)


def _params_from(cfg: RunConfig, fallback: graph.DigraphParams | None = None) -> graph.DigraphParams:
    if cfg.n is None and cfg.d is None and fallback is not None:
        return fallback
    p = cfg.params()
    if fallback is not None and fallback != p:
        raise DomainError(f"--n/--d ({p.N},{p.d}) disagree with the file ({fallback.N},{fallback.d})")
    return p


def _load_cycles_file(path: str) -> tuple[graph.DigraphParams, list[cyc.DeBruijnCycle]]:
    try:
        with open(path, encoding="utf-8") as fh:
            return read_cycles_jsonl(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc


def _cycle_arg(cfg: RunConfig, text: str | None, file: str | None, index: int) -> cyc.DeBruijnCycle:
    """A cycle from an inline list or from a cycles file (0-based record index)."""
    if (text is None) == (file is None):
        raise DomainError("give exactly one of an inline cycle or a cycles file")
    if text is not None:
        return parse_cycle(cfg.params(), text)
    fparams, cs = _load_cycles_file(file)
    params = _params_from(cfg, fparams)
    if not 0 <= index < len(cs):
        raise DomainError(f"{file} has {len(cs)} cycles; index {index} out of range")
    return cs[index] if cs[index].params == params else parse_cycle(params, cs[index].to_text())


# -- commands ----------------------------------------------------------------

def cmd_edges(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    params = cfg.params()
    if cfg.format == "json":
        out.write(graph.edge_table_json(params) + "\n")
    elif cfg.format == "dot":
        out.write(graph.edge_table_dot(params))
    else:
        out.write(graph.format_edge_table(params))
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    params = cfg.params()
    if args.count_only:
        count = cyc.count_cycles(params, cfg.budget, cfg.threads)
        out.write(f"{count}\n")
        k = cyc.power_exponent(params.N, params.d)
        if k is not None:
            formula = cyc.count_formula(params.d, k)
            verdict = "AGREE" if formula == count else "DISAGREE"
            out.write(f"formula (d={params.d}, k={k}): {formula} {verdict}\n")
            if verdict == "DISAGREE":
                raise InvariantViolationError("enumeration disagrees with the closed-form count")
        return EXIT_OK
    stream = cyc.enumerate_cycles(params, cfg.budget, cfg.threads)
    if cfg.format == "text":
        for c in stream:
            out.write(c.to_text() + "\n")
    else:
        write_cycles_jsonl(out, params, stream)
    return EXIT_OK


def cmd_counts(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    if args.kind == "debruijn":
        if args.d is None:
            raise DomainError("counts debruijn needs --d")
        out.write(f"{cyc.count_formula(args.d, args.k)}\n")
    else:
        out.write(f"{cyc.chang_count(args.k)}\n")
    return EXIT_OK


def cmd_distance(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    params = cfg.params()
    u, v = parse_cycle(params, args.u), parse_cycle(params, args.v)
    out.write(f"{cyc.distance(u, v)}\n")
    return EXIT_OK


def _move_arg(u: cyc.DeBruijnCycle, args: argparse.Namespace) -> ops.CrossJoinMove:
    if args.move is not None:
        if args.cross_vertices or args.join_vertices:
            raise DomainError("--move excludes --cross-vertices/--join-vertices")
        return ops.CrossJoinMove.parse(args.move)
    if args.cross_vertices is None or args.join_vertices is None:
        raise DomainError("give --move, or both --cross-vertices and --join-vertices")
    return ops.move_from_vertices(
        u, parse_int_list(args.cross_vertices), parse_int_list(args.join_vertices)
    )


def cmd_crossjoin(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    action = args.action
    if action == "apply":
        u = _cycle_arg(cfg, args.cycle, args.cycle_file, args.index)
        m = _move_arg(u, args)
        w = ops.apply_move(u, m)
        if cfg.format == "json":
            out.write(json.dumps({"move": str(m), "cycle": list(w.vertices)}) + "\n")
        else:
            out.write(w.to_text() + "\n")
        return EXIT_OK

    if action == "neighbors":
        u = _cycle_arg(cfg, args.cycle, args.cycle_file, args.index)
        if args.count_only:
            out.write(f"{ops.neighbor_count(u)}\n")
            return EXIT_OK
        rows = ops.neighbor_moves(u)
        if cfg.format == "json":
            for m, w in rows:
                out.write(json.dumps({"move": str(m), "cycle": list(w.vertices)}) + "\n")
        else:
            for m, w in rows:
                out.write(f"{w.to_text()}\t{m}\n")
        return EXIT_OK

    if action == "histogram":
        params = cfg.params()
        hist = ops.neighbor_histogram(params, cfg.budget, cfg.threads)
        if cfg.format == "json":
            out.write(json.dumps({"N": params.N, "d": params.d,
                                  "histogram": {str(n): f for n, f in hist.items()}}) + "\n")
        else:
            out.write(ops.histogram_csv(ops.dense_histogram(hist)))
        return EXIT_OK

    if action == "connectivity":
        params = cfg.params()
        g = ops.build_crossjoin_graph(params, cfg.budget, cfg.threads)
        if cfg.format == "dot":
            out.write(g.to_dot())
            return EXIT_OK
        if cfg.format == "json":
            out.write(g.to_json() + "\n")
            return EXIT_OK
        conn = ops.is_connected(g)
        word = "connected" if conn.connected else "disconnected"
        plural = "" if conn.components == 1 else "s"
        out.write(f"{word}, {conn.components} component{plural}, {len(g)} nodes\n")
        return EXIT_OK

    if action == "path":
        params = cfg.params()
        u, v = parse_cycle(params, args.u), parse_cycle(params, args.v)
        steps = ops.crossjoin_path(u, v)
        if cfg.format == "json":
            for m, w in steps:
                out.write(json.dumps({"move": str(m), "cycle": list(w.vertices),
                                      "distance": cyc.distance(w, v)}) + "\n")
        else:
            out.write(f"0\t{u.to_text()}\tD={cyc.distance(u, v)}\n")
            for k, (m, w) in enumerate(steps, 1):
                out.write(f"{k}\t{w.to_text()}\tD={cyc.distance(w, v)}\t{m}\n")
        return EXIT_OK
    raise DomainError(f"unknown crossjoin action {action!r}")


def cmd_hamilton(cfg: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    action = args.action
    if action == "run":
        seed = _cycle_arg(cfg, args.seed, args.seed_file, args.index)
        res = hamilton.run_algorithm_h(seed, args.join_rule)
        hamilton.check_result(res)
        if cfg.format == "json":
            res.write_jsonl(out)
        else:
            out.write(res.to_table())
        return EXIT_OK

    if action == "verify":
        try:
            with open(args.file, encoding="utf-8") as fh:
                res = hamilton.HamiltonPathResult.from_jsonl(fh)
        except OSError as exc:
            raise DomainError(f"cannot read {args.file}: {exc.strerror}") from exc
        params = _params_from(cfg, res.params)
        hamilton.check_result(res)
        ok = hamilton.is_hamiltonian_path(res, params, cfg.budget)
        closed = len(res.cycles) >= 2 and ops.are_adjacent(res.cycles[-1], res.cycles[0])
        out.write(f"hamiltonian: {str(ok).lower()}\nclosed: {str(closed).lower()}\n"
                  f"length: {len(res.cycles)}\n")
        return EXIT_OK if ok else 1

    if action == "find-cycle-seed":
        params = cfg.params()
        seed = hamilton.find_cycle_seed(params, args.join_rule, cfg.budget, cfg.threads)
        if cfg.format == "json":
            out.write(json.dumps({"N": params.N, "d": params.d, "join_rule": args.join_rule,
                                  "seed": None if seed is None else list(seed.vertices)}) + "\n")
        else:
            out.write(("none" if seed is None else seed.to_text()) + "\n")
        return EXIT_OK
    raise DomainError(f"unknown hamilton action {action!r}")


# -- parser ------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--n", type=int, help="number of vertices N")
    g.add_argument("--d", type=int, help="out-degree / alphabet size d")
    g.add_argument("--format", help="output format (default depends on the command)")
    g.add_argument("--out", help="write output to this file instead of stdout")
    g.add_argument("--threads", type=int, default=1, help="worker processes for census work")
    g.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum number of de Bruijn cycles to enumerate")
    return p


def _add_cycle_source(p: argparse.ArgumentParser, flag: str = "--cycle") -> None:
    dest = flag.lstrip("-").replace("-", "_")
    p.add_argument(flag, dest=dest, help="comma-separated vertex list")
    p.add_argument(f"{flag}-file", dest=f"{dest}_file", help="JSON-lines cycles file")
    p.add_argument("--index", type=int, default=0, help="0-based record in the cycles file")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="crossjoin",
        description="Generalized de Bruijn digraphs, cross-joins and Algorithm H.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("edges", parents=[common], help="adjacency table of G_B(N,d)")
    p.set_defaults(command="edges", handler=cmd_edges)

    p = sub.add_parser("cycles", parents=[common], help="enumerate de Bruijn cycles")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(command="cycles", handler=cmd_enumerate)

    p = sub.add_parser("counts", help="closed-form counts")
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("debruijn", parents=[common], help="(d!)^(d^(k-1)) / d^k")
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(command="counts", handler=cmd_counts)
    q = csub.add_parser("chang", parents=[common], help="(2^(k-1)-1)(2^(k-1)-2)/6")
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(command="counts", handler=cmd_counts)

    p = sub.add_parser("distance", parents=[common], help="prefix distance of two cycles")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(command="distance", handler=cmd_distance)

    p = sub.add_parser("crossjoin", help="cross-join operations")
    xsub = p.add_subparsers(dest="action", required=True)
    q = xsub.add_parser("apply", parents=[common], help="apply one move")
    _add_cycle_source(q)
    q.add_argument("--move", help="positional move, e.g. 'cross=2,6;join=5,7'")
    q.add_argument("--cross-vertices", help="cross pair as two vertices")
    q.add_argument("--join-vertices", help="join pair as two vertices")
    q = xsub.add_parser("neighbors", parents=[common], help="list cross-join neighbors")
    _add_cycle_source(q)
    q.add_argument("--count-only", action="store_true")
    xsub.add_parser("histogram", parents=[common], help="neighbor-count census (CSV n,f)")
    xsub.add_parser("connectivity", parents=[common], help="components of C(N,d)")
    q = xsub.add_parser("path", parents=[common], help="distance-decreasing move path u -> v")
    q.add_argument("--u", required=True)
    q.add_argument("--v", required=True)
    for action, q in xsub.choices.items():
        q.set_defaults(command=f"crossjoin {action}", handler=cmd_crossjoin)

    p = sub.add_parser("hamilton", help="Algorithm H")
    hsub = p.add_subparsers(dest="action", required=True)
    q = hsub.add_parser("run", parents=[common], help="Hamiltonian path from a seed")
    _add_cycle_source(q, "--seed")
    q.add_argument("--join-rule", choices=("largest", "smallest"), default="largest")
    q = hsub.add_parser("verify", parents=[common], help="check a saved result file")
    q.add_argument("--file", required=True)
    q = hsub.add_parser("find-cycle-seed", parents=[common],
                        help="first seed whose path closes into a cycle")
    q.add_argument("--join-rule", choices=("largest", "smallest"), default="largest")
    for action, q in hsub.choices.items():
        q.set_defaults(command=f"hamilton {action}", handler=cmd_hamilton)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    handler: Callable[[RunConfig, argparse.Namespace, TextIO], int] = args.handler
    try:
        cfg = _config(args)
        with _output(cfg.out) as out:
            return handler(cfg, args, out)
    except BudgetExceededError as exc:
        print(f"crossjoin: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolationError as exc:
        print(f"crossjoin: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, UnsupportedOperationError) as exc:
        print(f"crossjoin: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CrossJoinError as exc:
        print(f"crossjoin: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
