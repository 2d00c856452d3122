"""Seeded oracle-equivalence suites.

Each suite compares a fast path against an independent slow one (brute
force, dense statevector, exact DP, closed-form QFT) and returns a
:class:`SuiteResult`. ``run_suites`` is what ``bubblesim verify`` calls.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .bench import fit_slope, measure, run_bench
from .circuit import (
    GateOp,
    OperatorCircuit,
    build_q_prime,
    circuit_matrix,
    dense_apply,
    prob_answer_zero_dense,
)
from .gates import LinearGate
from .graph import CircuitGraph, circuit_graph, exact_bubble_width, exact_pathwidth, layered_bubbling
from .qft import (
    QftParams,
    build_approx_qft,
    exact_qft_matrix,
    qft_product_state,
    qft_width_report,
)
from .randomized import DEFAULT_SEED, random_operator_circuit, random_tensor_circuit
from .tensor import (
    ContractionStats,
    amplitude,
    choose_bubbling,
    contract,
    prob_answer_zero,
    q_prime_bubbling,
    value_brute_force,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    detail: str = ""
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} max_deviation={self.max_deviation:.3g} elapsed={self.elapsed:.2f}s {self.detail}"


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def suite_tensor(seed: int = DEFAULT_SEED, circuits: int = 200, bubblings: int = 10, tolerance: float = 1e-9) -> SuiteResult:
    """Contraction along random orders against the labeling sum."""
    rng = np.random.default_rng(seed)
    worst, where = 0.0, ""
    for c in range(circuits):
        t = random_tensor_circuit(rng)
        expected = value_brute_force(t)
        for _ in range(bubblings):
            order = rng.permutation(t.graph.num_vertices).tolist()
            dev = _relative(contract(t, order), expected)
            if dev > worst:
                worst, where = dev, f"circuit {c} order {order}"
    passed = worst <= tolerance
    return SuiteResult("tensor", passed, worst, f"circuits={circuits} bubblings={bubblings}" + ("" if passed else f" worst at {where}"))


def _corrupt(q: OperatorCircuit, rng: np.random.Generator) -> tuple[OperatorCircuit, int]:
    """Double one gate's matrix; every amplitude is linear in it, so nonzero values move."""
    i = int(rng.integers(len(q.gates)))
    op = q.gates[i]
    m = 2 * op.gate.matrix
    bad = LinearGate(op.gate.arity_in, op.gate.arity_out, m, name=op.gate.name + "~")
    gates = list(q.gates)
    gates[i] = GateOp(bad, op.in_wires, op.out_wires, op.layer)
    return OperatorCircuit(q.num_inputs, q.input_bits, tuple(gates), q.answer_wire, q.outputs), i


def suite_circuits(
    seed: int = DEFAULT_SEED,
    circuits: int = 100,
    tolerance: float = 1e-9,
    corrupt: int | None = None,
) -> SuiteResult:
    """Probability and one amplitude per circuit against the dense simulator.

    With ``corrupt`` set, circuit number ``corrupt`` has one gate scaled on
    the contraction side only; unless that circuit's outputs are all zero,
    the suite then fails and names it.
    """
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for c in range(circuits):
        q = random_operator_circuit(rng, max_qubits=5, max_gates=15)
        y = "".join(str(int(b)) for b in rng.integers(0, 2, size=q.num_outputs))
        fast = q
        if corrupt == c:
            fast, gate = _corrupt(q, np.random.default_rng(seed + c))
        p_dense = prob_answer_zero_dense(q)
        p_fast = prob_answer_zero(fast, choose_bubbling(fast, q_prime=True))
        a_dense = dense_apply(q).amplitude(y)
        a_fast = amplitude(fast, y, choose_bubbling(fast))
        dev = max(_relative(p_fast, p_dense), _relative(a_fast, a_dense))
        worst = max(worst, dev)
        if dev > tolerance:
            note = f"circuit {c}"
            if corrupt == c:
                note += f" (gate {gate} corrupted)"
            failures.append(note)
    detail = f"circuits={circuits}"
    if failures:
        detail += " failed: " + ", ".join(failures[:5])
    return SuiteResult("circuits", not failures, worst, detail)


def suite_qft_exact(max_n: int = 8, tolerance: float = 1e-9) -> SuiteResult:
    """Builder at k = n against the DFT columns, plus uniform outcome probabilities."""
    worst_amp = worst_uniform = worst_norm = 0.0
    for n in range(1, max_n + 1):
        m = circuit_matrix(build_approx_qft(QftParams(n, k=n)))
        worst_amp = max(worst_amp, float(np.abs(m - exact_qft_matrix(n)).max()))
        worst_uniform = max(worst_uniform, float(np.abs(np.abs(m) ** 2 - 2.0**-n).max()))
        worst_norm = max(worst_norm, float(np.abs(np.linalg.norm(m, axis=0) - 1).max()))
    worst = max(worst_amp, worst_uniform, worst_norm)
    detail = f"n<={max_n} amplitude={worst_amp:.2g} uniform={worst_uniform:.2g} norm={worst_norm:.2g}"
    return SuiteResult("qft-exact", worst <= tolerance, worst, detail)


def suite_qft_approx(n: int = 8, epsilons: Iterable[float] = (0.1, 0.01)) -> SuiteResult:
    """Fidelity of the built state with the exact QFT column, for every input."""
    passed, worst, parts = True, 0.0, []
    for eps in epsilons:
        p = QftParams(n, eps)
        m = circuit_matrix(build_approx_qft(p))
        exact = exact_qft_matrix(n)
        fid = np.abs(np.einsum("yx,yx->x", exact.conj(), m))
        min_fid = float(fid.min())
        worst = max(worst, 1 - min_fid)
        # independent check of the closed-form truncated product state
        trunc = max(float(np.abs(m[:, x] - qft_product_state(x, n, p.k)).max()) for x in range(2**n))
        ok = min_fid >= 1 - eps and trunc <= 1e-9
        passed &= ok
        parts.append(f"eps={eps} k={p.k} min_fidelity={min_fid:.6f}")
    return SuiteResult("qft-approx", passed, worst, " ".join(parts))


def _atlas_graphs(max_degree: int = 4) -> Iterable[CircuitGraph]:
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() == 0 or not nx.is_connected(g):
            continue
        if max((d for _, d in g.degree()), default=0) > max_degree:
            continue
        yield CircuitGraph(g.number_of_nodes(), tuple(g.edges()))


def suite_widths(max_degree: int = 4) -> SuiteResult:
    """Half the pathwidth <= bubble width <= degree times pathwidth, on every small connected graph."""
    count, bad = 0, []
    tightest_low = tightest_high = math.inf
    for g in _atlas_graphs(max_degree):
        bw = exact_bubble_width(g)[0]
        pw = exact_pathwidth(g)[0]
        d = g.max_degree
        count += 1
        if not (pw <= 2 * bw and bw <= d * pw):
            bad.append(f"{g.num_vertices}v {list(g.edges)} bw={bw} pw={pw}")
        tightest_low = min(tightest_low, 2 * bw - pw)
        tightest_high = min(tightest_high, d * pw - bw)
    detail = f"graphs={count} min(2BW-PW)={tightest_low} min(d*PW-BW)={tightest_high}"
    if bad:
        detail += " violations: " + "; ".join(bad[:3])
    return SuiteResult("widths", not bad, float(len(bad)), detail)


def suite_qft_width(n_values: Iterable[int] = (4, 8, 16, 32, 64), epsilon: float = 0.01) -> SuiteResult:
    """Layered width of the built QFT stays under 4k^2 and grows sub-linearly in n."""
    rows = qft_width_report(n_values, epsilon)
    by_n = {r.n: r for r in rows}
    within = all(r.width <= 4 * r.k**2 for r in rows)
    sublinear = 8 not in by_n or 64 not in by_n or by_n[64].width < 8 * by_n[8].width
    worst_ratio = max(r.ratio for r in rows)
    widths = " ".join(f"n{r.n}:k{r.k}:w{r.width}" for r in rows)
    return SuiteResult("qft-width", within and sublinear, worst_ratio, f"max width/k^2={worst_ratio:.3f} {widths}")


def suite_scaling(widths: Iterable[int] = range(4, 19), rungs: int = 24, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Slope of log2(ops) against width on ladder circuits."""
    rows = run_bench(widths, rungs, seed)
    slope = fit_slope(rows)
    big = [r for r in rows if r.width >= 10]
    step = max((abs(b.ops / a.ops - 2) for a, b in zip(big, big[1:])), default=0.0)
    w = big[0].width if big else rows[0].width
    doubling = measure(w, 2 * rungs, seed).ops / measure(w, rungs, seed).ops
    passed = abs(slope - 1) <= 0.2
    detail = f"slope={slope:.4f} max|ops(w+1)/ops(w)-2|={step:.3f} ops ratio at 2x rungs={doubling:.3f}"
    return SuiteResult("scaling", passed, abs(slope - 1), detail, extra={"slope": slope})


def suite_qprime(seed: int = DEFAULT_SEED, circuits: int = 100, max_vertices: int = 16) -> SuiteResult:
    """Lifted optimal bubbling of Q against 2 BW(Q) + 1 + max degree.

    Also reports the tightest additive constant c with width <= 2 BW(Q) + c,
    and, where Q' is small enough, its exact width.
    """
    rng = np.random.default_rng(seed)
    tried = 0
    slack, exact_slack, bad = -math.inf, -math.inf, []
    while tried < circuits:
        q = random_operator_circuit(rng, max_qubits=4, max_gates=8)
        g = circuit_graph(q)
        if g.num_vertices > max_vertices:
            continue
        tried += 1
        bw, b_star = exact_bubble_width(g)
        gp = circuit_graph(build_q_prime(q))
        lifted = q_prime_bubbling(q, b_star).width
        if lifted > 2 * bw + 1 + gp.max_degree:
            bad.append(f"circuit {tried - 1}: lifted={lifted} bw={bw}")
        slack = max(slack, lifted - 2 * bw)
        if gp.num_vertices <= 20:
            exact_slack = max(exact_slack, exact_bubble_width(gp)[0] - 2 * bw)
    detail = f"circuits={circuits} tightest c (lifted <= 2BW+c)={slack} exact BW(Q')-2BW max={exact_slack}"
    if bad:
        detail += " violations: " + "; ".join(bad[:3])
    return SuiteResult("qprime", not bad, float(slack), detail, extra={"constant": slack, "exact_constant": exact_slack})


def suite_e2e(seed: int = DEFAULT_SEED, n: int = 6, queries: int = 20, tolerance: float = 1e-8) -> SuiteResult:
    """Amplitudes of the n = 6, k = 6 QFT by contraction against dense simulation."""
    rng = np.random.default_rng(seed)
    p = QftParams(n, k=n)
    worst, peak, width = 0.0, 0, layered_bubbling(build_approx_qft(p)).width
    for _ in range(queries):
        x = "".join(str(int(b)) for b in rng.integers(0, 2, size=n))
        y = "".join(str(int(b)) for b in rng.integers(0, 2, size=n))
        q = build_approx_qft(p, x)
        stats = ContractionStats()
        fast = amplitude(q, y, layered_bubbling(q), max_width=width, stats=stats)
        worst = max(worst, abs(fast - dense_apply(q).amplitude(y)))
        peak = max(peak, stats.peak_entries)
    passed = worst <= tolerance and peak <= 2**width
    detail = f"queries={queries} layered width={width} peak entries={peak} (2^width={2**width})"
    return SuiteResult("e2e", passed, worst, detail)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "tensor": suite_tensor,
    "circuits": suite_circuits,
    "qft-exact": suite_qft_exact,
    "qft-approx": suite_qft_approx,
    "widths": suite_widths,
    "qft-width": suite_qft_width,
    "scaling": suite_scaling,
    "qprime": suite_qprime,
    "e2e": suite_e2e,
}

SEEDED = {"tensor", "circuits", "scaling", "qprime", "e2e"}


def run_suite(name: str, seed: int = DEFAULT_SEED, **kwargs) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name in SEEDED:
        kwargs.setdefault("seed", seed)
    start = time.perf_counter()
    result = SUITES[name](**kwargs)
    result.elapsed = time.perf_counter() - start
    return result


def run_suites(names: Iterable[str] | None = None, seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    return [run_suite(name, seed) for name in (names or SUITES)]
