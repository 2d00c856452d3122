"""Seeded random instances for property tests and the verify suites."""

from __future__ import annotations

import numpy as np

from .circuit import GateOp, OperatorCircuit
from .gates import (
    LinearGate,
    cnot,
    copy_gate,
    cphase_gate,
    erase_gate,
    hadamard,
    prep0_gate,
)
from .graph import CircuitGraph
from .tensor import Tensor, TensorCircuit

DEFAULT_SEED = 0xB0BB1E


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2 * cols)


def random_tensor_circuit(
    rng: np.random.Generator,
    max_vertices: int = 8,
    max_edges: int = 12,
    max_degree: int = 4,
) -> TensorCircuit:
    """Random multigraph (no self-loops) with random complex tensors."""
    nv = int(rng.integers(2, max_vertices + 1))
    target = int(rng.integers(1, max_edges + 1))
    degree = [0] * nv
    edges: list[tuple[int, int]] = []
    for _ in range(20 * target):
        if len(edges) == target:
            break
        u, v = (int(a) for a in rng.choice(nv, size=2, replace=False))
        if degree[u] < max_degree and degree[v] < max_degree:
            edges.append((u, v))
            degree[u] += 1
            degree[v] += 1
    g = CircuitGraph(nv, tuple(edges))
    tensors = []
    for v in range(nv):
        inc = g.incidence[v]
        data = rng.normal(size=2 ** len(inc)) + 1j * rng.normal(size=2 ** len(inc))
        tensors.append(Tensor(inc, data))
    return TensorCircuit(g, tuple(tensors))


def random_operator_circuit(
    rng: np.random.Generator,
    max_qubits: int = 5,
    max_gates: int = 15,
    *,
    unitary_only: bool = False,
    min_gates: int = 1,
) -> OperatorCircuit:
    """Random circuit mixing unitaries with COPY / ERASE / PREP0 and dense non-unitary gates.

    At most ``max_qubits`` wires are live at any time. Outputs keep the
    positions of the wires they replaced.
    """
    n = int(rng.integers(1, min(4, max_qubits) + 1))
    bits = "".join(str(int(b)) for b in rng.integers(0, 2, size=n))
    live = list(range(n))
    next_wire = n
    ops = []
    kinds = ["u1", "u2", "h", "cnot", "cphase"]
    if not unitary_only:
        kinds += ["copy", "erase", "prep", "dense"]
    for _ in range(int(rng.integers(min_gates, max_gates + 1))):
        options = [k for k in kinds if _allowed(k, len(live), max_qubits)]
        kind = options[int(rng.integers(len(options)))]
        gate = _make_gate(kind, rng)
        picks = sorted(rng.choice(len(live), size=gate.arity_in, replace=False).tolist())
        ins = tuple(live[i] for i in picks)
        outs = tuple(range(next_wire, next_wire + gate.arity_out))
        next_wire += gate.arity_out
        slot = picks[0] if picks else int(rng.integers(len(live) + 1))
        for i in reversed(picks):
            del live[i]
        live[slot:slot] = outs
        ops.append(GateOp(gate, ins, outs))
    answer = live[int(rng.integers(len(live)))]
    return OperatorCircuit(n, bits, tuple(ops), answer_wire=answer, outputs=tuple(live))


def _allowed(kind: str, live: int, cap: int) -> bool:
    if kind in ("u2", "cnot", "cphase"):
        return live >= 2
    if kind in ("copy", "prep"):
        return live < cap
    if kind == "erase":
        return live > 1
    return live >= 1


def _make_gate(kind: str, rng: np.random.Generator) -> LinearGate:
    if kind == "u1":
        return LinearGate(1, 1, random_unitary(2, rng))
    if kind == "u2":
        return LinearGate(2, 2, random_unitary(4, rng))
    if kind == "h":
        return hadamard()
    if kind == "cnot":
        return cnot()
    if kind == "cphase":
        return cphase_gate(float(rng.random()))
    if kind == "copy":
        return copy_gate()
    if kind == "erase":
        return erase_gate()
    if kind == "prep":
        return prep0_gate()
    return LinearGate(1, 1, random_matrix(2, 2, rng))


def random_bounded_degree_graph(rng: np.random.Generator, n: int = 10, max_degree: int = 3) -> CircuitGraph:
    """Simple graph; each vertex pair is tried once in random order and kept with probability 1/2."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    degree = [0] * n
    edges = []
    for u, v in pairs:
        if degree[u] < max_degree and degree[v] < max_degree and rng.random() < 0.5:
            edges.append((int(u), int(v)))
            degree[u] += 1
            degree[v] += 1
    return CircuitGraph(n, tuple(edges))
