"""``bubblesim`` command line.

Machine-readable results go to standard output as ``key=value`` lines and
never include timings. Human-readable summaries and timings go to standard
error. Exit codes: 0 success, 1 verification failure, 2 bad input,
3 bubbling wider than ``--max-width``.
"""

from __future__ import annotations

import argparse
import inspect
import logging
import sys
import time
from pathlib import Path

from .bench import fit_slope, run_bench
from .circuit import CircuitError, OperatorCircuit, require_valid
from .formats import (
    FormatError,
    dump_circuit,
    format_bubbling,
    load_circuit,
    parse_bubbling,
    parse_graph,
    write_atomic,
)
from .graph import (
    DEFAULT_VERTEX_CAP,
    Bubbling,
    CircuitGraph,
    circuit_graph,
    exact_bubble_width,
    greedy_bubbling,
    layered_bubbling,
)
from .qft import QftParams, build_approx_qft, format_width_report, qft_width_report
from .randomized import DEFAULT_SEED
from .tensor import (
    DEFAULT_WIDTH_CAP,
    STRATEGIES,
    ContractionStats,
    FrontierOverflow,
    amplitude,
    choose_bubbling,
    prob_answer_zero,
    q_prime_bubbling,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_WIDTH = 0, 1, 2, 3

logger = logging.getLogger("bubblesim")


class InputError(Exception):
    """Bad user input; reported on stderr with exit code 2."""


def _emit(key: str, value) -> None:
    print(f"{key}={value}")


def _say(text: str) -> None:
    print(text, file=sys.stderr)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1e-3:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-3]")
    return value


def _seed(text: str) -> int:
    return int(text, 0)


def _bits(text: str) -> str:
    if any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError("expected a string of 0s and 1s")
    return text


def _load(path: str) -> OperatorCircuit:
    try:
        return require_valid(load_circuit(path))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (FormatError, CircuitError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_order(path: str, g: CircuitGraph) -> Bubbling:
    try:
        order = parse_bubbling(Path(path).read_text(encoding="utf-8"))
        return Bubbling.of(g, order)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _bubbling_for(q: OperatorCircuit, mode: str, q_prime: bool) -> Bubbling:
    """Strategy name or path to a bubbling file over Q's graph."""
    if mode in STRATEGIES:
        if mode == "layered" and not q.has_layers():
            raise InputError("--bubbling layered needs layer tags on every gate")
        return choose_bubbling(q, mode, q_prime=q_prime)
    b = _read_order(mode, circuit_graph(q))
    return q_prime_bubbling(q, b) if q_prime else b


def cmd_simulate(args) -> int:
    q = _load(args.circuit)
    if args.y is not None and len(args.y) != q.num_outputs:
        raise InputError(f"--y has {len(args.y)} bits, circuit has {q.num_outputs} outputs")
    if args.y is None and q.answer_wire is None:
        raise InputError("circuit has no answer_wire; give --y for an amplitude query")
    b = _bubbling_for(q, args.bubbling, q_prime=args.y is None)
    if b.width > args.max_width:
        raise FrontierOverflow(b.width, args.max_width)
    stats = ContractionStats()
    start = time.perf_counter()
    if args.y is None:
        value = prob_answer_zero(q, b, max_width=args.max_width, stats=stats)
        _emit("p0", f"{value:.15g}")
        summary = f"p0 = {value:.12g}"
    else:
        value = amplitude(q, args.y, b, max_width=args.max_width, stats=stats)
        _emit("amplitude_re", f"{value.real:.15g}")
        _emit("amplitude_im", f"{value.imag:.15g}")
        summary = f"<{args.y}|Q|{q.input_bits}> = {value:.12g}"
    elapsed = time.perf_counter() - start
    _emit("width", stats.width)
    _emit("peak_entries", stats.peak_entries)
    _emit("ops", stats.ops)
    _say(f"{summary}, width = {stats.width}, peak frontier = {stats.peak_entries} entries, {elapsed:.3f} s")
    return EXIT_OK


def cmd_width(args) -> int:
    if (args.graph is None) == (args.circuit is None):
        raise InputError("give exactly one of --graph or --circuit")
    q = None
    if args.graph is not None:
        try:
            g = parse_graph(Path(args.graph).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read {args.graph}: {exc.strerror}") from None
        except FormatError as exc:
            raise InputError(f"{args.graph}: {exc}") from None
    else:
        q = _load(args.circuit)
        g = circuit_graph(q)
    _emit("vertices", g.num_vertices)
    _emit("edges", g.num_edges)
    candidates: dict[str, Bubbling] = {}
    if g.num_vertices <= args.exact_cap:
        candidates["exact"] = exact_bubble_width(g, cap=args.exact_cap)[1]
    candidates["greedy"] = greedy_bubbling(g)
    if q is not None and q.has_layers():
        candidates["layered"] = layered_bubbling(q)
    for name, b in candidates.items():
        _emit(f"{name}_width", b.width)
    best_name = min(candidates, key=lambda name: candidates[name].width)
    best = candidates[best_name]
    _emit("width", best.width)
    _emit("order", ",".join(map(str, best.order)))
    side = ", ".join(f"{name} {b.width}" for name, b in candidates.items())
    _say(f"bubble width: {side} (best: {best_name})")
    if args.emit:
        write_atomic(args.emit, format_bubbling(best))
        _say(f"wrote {best_name} bubbling to {args.emit}")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = args.suite or list(SUITES)
    failed = 0
    for name in names:
        kwargs = {}
        params = inspect.signature(SUITES[name]).parameters
        if args.tolerance is not None and "tolerance" in params:
            kwargs["tolerance"] = args.tolerance
        if args.inject_fault is not None and "corrupt" in params:
            kwargs["corrupt"] = args.inject_fault
        result = run_suite(name, args.seed, **kwargs)
        failed += not result.passed
        _emit(f"{name}.passed", int(result.passed))
        _emit(f"{name}.max_deviation", f"{result.max_deviation:.3g}")
        _say(result.line())
    _emit("failed", failed)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bench(args) -> int:
    widths = range(args.min_width, args.max_ladder_width + 1)
    start = time.perf_counter()
    rows = run_bench(widths, args.rungs, args.seed)
    elapsed = time.perf_counter() - start
    _say(f"{'width':>5} {'vertices':>8} {'ops':>12} {'log2(ops)':>10}")
    for r in rows:
        _emit(f"ops.w{r.width}", r.ops)
        _say(f"{r.width:>5} {r.vertices:>8} {r.ops:>12} {r.log2_ops:>10.3f}")
    slope = fit_slope(rows) if len(rows) > 1 else float("nan")
    _emit("slope", f"{slope:.4f}")
    _say(f"slope of log2(ops) vs width: {slope:.4f} ({elapsed:.2f} s)")
    return EXIT_OK


def _qft_params(args) -> QftParams:
    try:
        return QftParams(args.n, args.epsilon if args.epsilon is not None else 0.01, k=args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_qft(args) -> int:
    p = _qft_params(args)
    if args.x is not None and len(args.x) != p.n:
        raise InputError(f"--x must have {p.n} bits")
    q = build_approx_qft(p, args.x)
    b = layered_bubbling(q)
    _emit("n", p.n)
    _emit("k", p.k)
    _emit("gates", len(q.gates))
    _emit("layered_width", b.width)
    _emit("answer_wire", q.answer_wire)
    if args.emit:
        write_atomic(args.emit, dump_circuit(q))
        _say(f"wrote n={p.n} k={p.k} circuit ({len(q.gates)} gates, layered width {b.width}) to {args.emit}")
    return EXIT_OK


def cmd_qft_report(args) -> int:
    rows = qft_width_report(args.n, args.epsilon)
    for r in rows:
        _emit(f"n{r.n}", f"k={r.k} gates={r.gates} vertices={r.vertices} width={r.width}")
    _say(format_width_report(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bubblesim", description="Operator-circuit simulation by low-width contraction.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="acceptance probability or one amplitude of a circuit file")
    sim.add_argument("--circuit", required=True)
    sim.add_argument("--bubbling", default="auto", help=f"{'|'.join(STRATEGIES)} or a bubbling file over Q's graph")
    sim.add_argument("--y", type=_bits, help="output string; prints <y|Q|x> instead of p0")
    sim.add_argument("--max-width", type=_positive_int, default=DEFAULT_WIDTH_CAP)
    sim.set_defaults(func=cmd_simulate)

    wid = sub.add_parser("width", help="bubble width of a graph or circuit")
    wid.add_argument("--graph")
    wid.add_argument("--circuit")
    wid.add_argument("--exact-cap", type=_positive_int, default=DEFAULT_VERTEX_CAP, help="largest vertex count solved exactly")
    wid.add_argument("--emit", help="write the best bubbling here")
    wid.set_defaults(func=cmd_width)

    ver = sub.add_parser("verify", help="run the oracle-equivalence suites")
    ver.add_argument("--suite", action="append", choices=list(SUITES))
    ver.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    ver.add_argument("--tolerance", type=_tolerance)
    ver.add_argument("--inject-fault", type=int, metavar="INDEX", help="corrupt one gate of random circuit INDEX")
    ver.set_defaults(func=cmd_verify)

    ben = sub.add_parser("bench", help="contraction cost on ladder circuits")
    ben.add_argument("--min-width", type=_positive_int, default=4)
    ben.add_argument("--max-ladder-width", type=_positive_int, default=18)
    ben.add_argument("--rungs", type=_positive_int, default=24)
    ben.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    ben.set_defaults(func=cmd_bench)

    qft = sub.add_parser("qft", help="build the approximate QFT circuit")
    qft.add_argument("--n", type=_positive_int, required=True)
    group = qft.add_mutually_exclusive_group()
    group.add_argument("--epsilon", type=float)
    group.add_argument("--k", type=_positive_int)
    qft.add_argument("--x", type=_bits, help="input bits, default all zero")
    qft.add_argument("--emit", help="write the circuit file here")
    qft.set_defaults(func=cmd_qft)

    rep = sub.add_parser("qft-report", help="layered widths of the approximate QFT")
    rep.add_argument("--n", type=_positive_int, nargs="+", default=[4, 8, 16, 32, 64])
    rep.add_argument("--epsilon", type=float, default=0.01)
    rep.set_defaults(func=cmd_qft_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    except FrontierOverflow as exc:
        _say(f"error: {exc}")
        return EXIT_WIDTH


if __name__ == "__main__":
    sys.exit(main())
