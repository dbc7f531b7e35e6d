"""
Command-line entry point: python -m graphtsp <subcommand> ...
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from graphtsp.config import settings
from graphtsp.core.bench import bench
from graphtsp.core.errors import GraphTspError, InvalidVertexError
from graphtsp.core.generators import parse_spec, parse_spec_file
from graphtsp.core.graph import Graph, format_graph, parse_graph
from graphtsp.core.held_karp import solve_held_karp
from graphtsp.core.oracle import oracle_opt_path, oracle_opt_tour
from graphtsp.core.pipeline import format_fraction, serialize_path, serialize_tour, tsp_path, tsp_tour
from graphtsp.core.selftest import selftest


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphtsp", description="Graph-TSP and graph-TSPP approximation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Tour with certified edge-count bounds")
    p.add_argument("file", help="Graph file, '-' for stdin")

    p = sub.add_parser("path", help="s-t path with certified edge-count bounds")
    p.add_argument("file")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("lp", help="Exact Held-Karp LP value")
    p.add_argument("file")
    p.add_argument("--path", type=int, nargs=2, metavar=("S", "T"))
    p.add_argument("--support", action="store_true", help="Also print the cut count, rounds and support edges with their x values")

    p = sub.add_parser("oracle", help="Exact optimum by dynamic programming")
    p.add_argument("file")
    p.add_argument("--path", type=int, nargs=2, metavar=("S", "T"))
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("gen", help="Print a generated graph file")
    p.add_argument("family")
    p.add_argument("args", nargs="*")

    p = sub.add_parser("bench", help="Run a spec file and write CSV")
    p.add_argument("specfile")
    p.add_argument("--out", default="-")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=None)

    sub.add_parser("selftest", help="Run the built-in invariant corpus")

    p = sub.add_parser("serve", help="Start the HTTP service")
    p.add_argument("--host", default=settings.HOST)
    p.add_argument("--port", type=int, default=settings.PORT)
    return parser


def _read_input(name: str, stdin: TextIO) -> bytes | str:
    if name == "-":
        return getattr(stdin, "buffer", stdin).read()
    try:
        return Path(name).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {name}: {e.strerror}") from e


def _read_text(name: str, stdin: TextIO) -> str:
    data = _read_input(name, stdin)
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise UsageError(f"{name} is not UTF-8 text") from e


def _read_graph(name: str, stdin: TextIO) -> Graph:
    return parse_graph(_read_input(name, stdin))


def _cmd_lp(args, stdin, stdout) -> None:
    g = _read_graph(args.file, stdin)
    s, t = args.path if args.path else (None, None)
    lp = solve_held_karp(g, s, t)
    stdout.write(f"{format_fraction(lp.value)}\n")
    if args.support:
        stdout.write(f"cuts {len(lp.active_cuts)} rounds {lp.rounds}\n")
        for eid in lp.support:
            u, v = g.edges[eid]
            stdout.write(f"{u} {v} {format_fraction(lp.x[eid])}\n")


def _cmd_oracle(args, stdin, stdout) -> None:
    g = _read_graph(args.file, stdin)
    if args.path:
        value = oracle_opt_path(g, args.path[0], args.path[1], cutoff=args.cutoff)
    else:
        value = oracle_opt_tour(g, cutoff=args.cutoff)
    stdout.write(f"{value}\n")


def _cmd_gen(args, stdout) -> None:
    instance = parse_spec(" ".join([args.family, *args.args])).build()
    comments = [instance.name]
    if instance.s is not None:
        comments.append(f"s={instance.s} t={instance.t}")
    stdout.write(format_graph(instance.graph, comments))


def _cmd_bench(args, stdin, stdout) -> None:
    specs = parse_spec_file(_read_text(args.specfile, stdin))
    if args.out == "-":
        bench(specs, stdout, workers=args.workers, oracle_cutoff=args.cutoff)
        return
    try:
        with open(args.out, "w", newline="") as out:
            bench(specs, out, workers=args.workers, oracle_cutoff=args.cutoff)
    except OSError as e:
        raise UsageError(f"cannot write {args.out}: {e.strerror}") from e


def _serve(args) -> None:
    from graphtsp.main import serve

    serve(args.host, args.port)


def run(
    argv: Optional[Sequence[str]] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "solve":
            stdout.write(serialize_tour(tsp_tour(_read_graph(args.file, stdin))))
        elif args.command == "path":
            stdout.write(serialize_path(tsp_path(_read_graph(args.file, stdin), args.s, args.t)))
        elif args.command == "lp":
            _cmd_lp(args, stdin, stdout)
        elif args.command == "oracle":
            _cmd_oracle(args, stdin, stdout)
        elif args.command == "gen":
            _cmd_gen(args, stdout)
        elif args.command == "bench":
            _cmd_bench(args, stdin, stdout)
        elif args.command == "selftest":
            return EXIT_SOLVE if selftest(stdout) else EXIT_OK
        elif args.command == "serve":
            _serve(args)
    except (UsageError, InvalidVertexError) as e:
        stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except GraphTspError as e:
        logger.debug("solve failed", exc_info=True)
        stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_SOLVE
    return EXIT_OK


def main() -> None:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    sys.exit(run(sys.argv[1:]))
