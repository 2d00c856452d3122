"""Contraction cost on ladder circuits of controllable width.

A ladder has ``width`` parallel wires and a fixed number of two-qubit rungs
laid out in brick layers. Swallowing it in time slices (all inputs, then the
rungs layer by layer, then all outputs) keeps every wire in the cut, so the
bubbling width equals ``width`` while the vertex count grows only through the
terminals. Cost is measured in multiply-adds, not seconds.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .circuit import GateOp, OperatorCircuit
from .gates import LinearGate
from .graph import Bubbling, circuit_graph
from .randomized import DEFAULT_SEED, random_unitary
from .tensor import ContractionStats, amplitude


def ladder_circuit(width: int, rungs: int, seed: int = DEFAULT_SEED) -> OperatorCircuit:
    """``width`` wires, ``rungs`` random two-qubit unitaries in brick layers."""
    if width < 2:
        raise ValueError("a ladder needs at least two rails")
    rng = np.random.default_rng(seed)
    current = list(range(width))
    next_wire = width
    ops = []
    layer = 0
    while len(ops) < rungs:
        for i in range(layer % 2, width - 1, 2):
            if len(ops) == rungs:
                break
            outs = (next_wire, next_wire + 1)
            next_wire += 2
            gate = LinearGate(2, 2, random_unitary(4, rng), name="RUNG")
            ops.append(GateOp(gate, (current[i], current[i + 1]), outs, layer))
            current[i], current[i + 1] = outs
        layer += 1
    return OperatorCircuit(width, "0" * width, tuple(ops), outputs=tuple(current))


@dataclass(frozen=True)
class BenchRow:
    width: int
    rungs: int
    vertices: int
    ops: int
    peak_entries: int

    @property
    def log2_ops(self) -> float:
        return math.log2(self.ops)


def time_sliced_bubbling(q: OperatorCircuit) -> Bubbling:
    """Inputs first, gates by (layer, index), outputs last."""
    g = circuit_graph(q)
    n, num_gates = q.num_inputs, len(q.gates)
    gates = sorted(range(num_gates), key=lambda i: (q.gates[i].layer or 0, i))
    order = list(range(n)) + [n + i for i in gates] + list(range(n + num_gates, g.num_vertices))
    return Bubbling.of(g, order)


def measure(width: int, rungs: int, seed: int = DEFAULT_SEED) -> BenchRow:
    q = ladder_circuit(width, rungs, seed)
    b = time_sliced_bubbling(q)
    stats = ContractionStats()
    amplitude(q, "0" * width, b, max_width=max(width, 1) + 2, stats=stats)
    return BenchRow(stats.width, rungs, circuit_graph(q).num_vertices, stats.ops, stats.peak_entries)


def run_bench(widths: Iterable[int] = range(4, 19), rungs: int = 24, seed: int = DEFAULT_SEED) -> list[BenchRow]:
    return [measure(w, rungs, seed) for w in widths]


def fit_slope(rows: list[BenchRow]) -> float:
    """Least-squares slope of log2(ops) against width."""
    w = np.array([r.width for r in rows], dtype=float)
    y = np.array([r.log2_ops for r in rows])
    return float(np.polyfit(w, y, 1)[0])
