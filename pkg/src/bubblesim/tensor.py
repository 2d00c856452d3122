"""Tensor circuits and their contraction along a bubbling.

The value of a tensor circuit is the sum, over all 0/1 labelings of its edges,
of the product of the vertex tensors evaluated at that labeling.
:func:`value_brute_force` computes exactly that sum. :func:`contract` sweeps
the vertices in bubbling order and keeps only a vector over the edges that
currently cross the cut, so its memory is ``2**width``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .circuit import OperatorCircuit, build_q_prime, require_valid
from .graph import (
    DEFAULT_VERTEX_CAP,
    Bubbling,
    CircuitGraph,
    circuit_graph,
    cut_sizes,
    exact_bubble_width,
    greedy_bubbling,
    layered_bubbling,
)

logger = logging.getLogger(__name__)

DEFAULT_WIDTH_CAP = 26
DEFAULT_EDGE_CAP = 22
IMAG_TOLERANCE = 1e-9


class FrontierOverflow(RuntimeError):
    """The bubbling's width exceeds the configured frontier cap."""

    def __init__(self, width: int, cap: int):
        super().__init__(f"bubbling width {width} exceeds frontier cap {cap}; try a better bubbling")
        self.width = width
        self.cap = cap


@dataclass(frozen=True, eq=False)
class Tensor:
    """Complex tensor over an ordered list of incident edges, big-endian."""

    edges: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        edges = tuple(int(e) for e in self.edges)
        if len(set(edges)) != len(edges):
            raise ValueError("tensor edge ids must be distinct")
        data = np.asarray(self.data, dtype=np.complex128)
        if data.size != 2 ** len(edges):
            raise ValueError(f"tensor needs {2 ** len(edges)} entries, got {data.size}")
        data = data.reshape((2,) * len(edges))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "data", data)

    @property
    def entries(self) -> np.ndarray:
        return self.data.reshape(-1)

    @property
    def degree(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class TensorCircuit:
    graph: CircuitGraph
    tensors: tuple[Tensor, ...]

    def __post_init__(self):
        object.__setattr__(self, "tensors", tuple(self.tensors))
        if len(self.tensors) != self.graph.num_vertices:
            raise ValueError("one tensor per vertex required")
        for v, t in enumerate(self.tensors):
            if sorted(t.edges) != sorted(self.graph.incidence[v]):
                raise ValueError(f"tensor at vertex {v} does not match the graph's incident edges")


def basis_tensor(edge: int, bit: int) -> Tensor:
    data = np.zeros(2)
    data[bit] = 1.0
    return Tensor((edge,), data)


def tensor_circuit_from_operator_circuit(q: OperatorCircuit, y: str | None = None) -> TensorCircuit:
    """Tensor circuit whose value is ``<y|Q|x>``.

    Input terminals select ``q.input_bits``; output terminals select ``y``,
    which defaults to the input bits (the convention used for Q').
    A gate vertex carries its matrix reshaped over (output edges, input edges).
    """
    require_valid(q)
    if y is None:
        y = q.input_bits
    if len(y) != q.num_outputs or any(c not in "01" for c in y):
        raise ValueError(f"output string must be {q.num_outputs} bits of 0/1, got {y!r}")
    g = circuit_graph(q)
    edge_of = {w: e for e, w in enumerate(g.edge_wires)}
    tensors: list[Tensor] = []
    for w, bit in zip(q.input_wires, q.input_bits):
        tensors.append(basis_tensor(edge_of[w], int(bit)))
    for op in q.gates:
        edges = tuple(edge_of[w] for w in op.out_wires) + tuple(edge_of[w] for w in op.in_wires)
        tensors.append(Tensor(edges, op.gate.matrix.reshape(-1)))
    for w, bit in zip(q.output_wires, y):
        tensors.append(basis_tensor(edge_of[w], int(bit)))
    return TensorCircuit(g, tuple(tensors))


def value_brute_force(t: TensorCircuit, cap: int = DEFAULT_EDGE_CAP) -> complex:
    """Sum over all 2**|E| edge labelings of the product of vertex tensors."""
    num_edges = t.graph.num_edges
    if num_edges > cap:
        raise ValueError(f"{num_edges} edges exceeds brute-force cap {cap}")
    labels = np.arange(2**num_edges, dtype=np.int64)
    total = np.ones(labels.shape, dtype=np.complex128)
    for tensor in t.tensors:
        index = np.zeros(labels.shape, dtype=np.int64)
        for e in tensor.edges:
            index = (index << 1) | ((labels >> e) & 1)
        total *= tensor.entries[index]
    return complex(total.sum())


@dataclass
class ContractionStats:
    width: int = 0
    peak_entries: int = 0
    ops: int = 0
    steps: int = 0
    imag_part: float = 0.0


@dataclass
class FrontierState:
    """Partial contraction over the edges crossing the current cut (sorted)."""

    edges: tuple[int, ...] = ()
    amplitudes: np.ndarray = field(default_factory=lambda: np.ones((), dtype=np.complex128))

    def absorb(self, tensor: Tensor) -> tuple["FrontierState", int]:
        """Swallow one vertex. Returns the new state and the multiply-add count."""
        slot = {e: i for i, e in enumerate(self.edges)}
        closing = [e for e in tensor.edges if e in slot]
        opening = [e for e in tensor.edges if e not in slot]
        psi_axes = [slot[e] for e in closing]
        t_axes = [tensor.edges.index(e) for e in closing]
        out = np.tensordot(self.amplitudes, tensor.data, axes=(psi_axes, t_axes))
        kept = [e for e in self.edges if e not in closing]
        new_edges = kept + opening
        perm = sorted(range(len(new_edges)), key=new_edges.__getitem__)
        out = out.transpose(perm)
        ops = 2 ** (len(self.edges) + len(opening))
        return FrontierState(tuple(new_edges[i] for i in perm), out), ops


def contract(
    t: TensorCircuit,
    b: Bubbling | Sequence[int],
    *,
    max_width: int = DEFAULT_WIDTH_CAP,
    stats: ContractionStats | None = None,
) -> complex:
    """Value of ``t`` by sweeping its vertices in bubbling order.

    Raises FrontierOverflow before doing any work if the bubbling is wider
    than ``max_width``.
    """
    order = b.order if isinstance(b, Bubbling) else tuple(b)
    sizes = cut_sizes(t.graph, order)
    width = max(sizes, default=0)
    if width > max_width:
        raise FrontierOverflow(width, max_width)
    stats = stats if stats is not None else ContractionStats()
    stats.width = width
    state = FrontierState()
    for v, expected in zip(order, sizes):
        state, ops = state.absorb(t.tensors[v])
        assert len(state.edges) == expected, "frontier out of step with the cut profile"
        stats.ops += ops
        stats.steps += 1
        stats.peak_entries = max(stats.peak_entries, state.amplitudes.size)
    assert state.edges == ()
    return complex(state.amplitudes)


def q_prime_bubbling(q: OperatorCircuit, b: Bubbling | Sequence[int]) -> Bubbling:
    """Lift a bubbling of Q's graph to one of Q''s graph.

    Each Q vertex is swallowed as a pair: its forward copy, then its mirrored
    adjoint copy. An input terminal pairs with the Q' output terminal that
    mirrors it; the answer output terminal stands for the projector; other
    output terminals have no counterpart in Q'.
    """
    g = circuit_graph(q)
    order = b.order if isinstance(b, Bubbling) else tuple(b)
    cut_sizes(g, order)
    n, num_gates = q.num_inputs, len(q.gates)
    projector = n + num_gates
    first_output = n + 2 * num_gates + 1
    lifted: list[int] = []
    for v in order:
        if v < n:
            lifted += [v, first_output + v]
        elif v < n + num_gates:
            i = v - n
            lifted += [n + i, n + 2 * num_gates - i]
        elif q.output_wires[v - n - num_gates] == q.answer_wire:
            lifted.append(projector)
    return Bubbling.of(circuit_graph(build_q_prime(q)), lifted)


STRATEGIES = ("auto", "exact", "greedy", "layered")


def choose_bubbling(
    q: OperatorCircuit,
    strategy: str = "auto",
    *,
    q_prime: bool = False,
    exact_cap: int = DEFAULT_VERTEX_CAP,
) -> Bubbling:
    """Pick a bubbling of Q's graph, or of Q''s graph when ``q_prime`` is set.

    ``auto`` solves exactly when the graph is small enough and otherwise takes
    the narrower of the greedy and (when tags exist) layered bubblings.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown bubbling strategy {strategy!r}")
    target = build_q_prime(q) if q_prime else q
    g = circuit_graph(target)
    if strategy == "exact" or (strategy == "auto" and g.num_vertices <= exact_cap):
        return exact_bubble_width(g, cap=exact_cap)[1]
    if strategy == "greedy":
        return greedy_bubbling(g)
    if strategy == "layered":
        base = layered_bubbling(q)
        return q_prime_bubbling(q, base) if q_prime else base
    candidates = [greedy_bubbling(g)]
    if q.has_layers():
        base = layered_bubbling(q)
        candidates.append(q_prime_bubbling(q, base) if q_prime else base)
    return min(candidates, key=lambda c: c.width)


def amplitude(
    q: OperatorCircuit,
    y: str,
    b: Bubbling | Sequence[int] | None = None,
    *,
    max_width: int = DEFAULT_WIDTH_CAP,
    stats: ContractionStats | None = None,
) -> complex:
    """``<y|Q|x>`` by contraction; ``b`` is a bubbling of Q's own graph."""
    if len(y) != q.num_outputs:
        raise ValueError(f"y has {len(y)} bits, circuit has {q.num_outputs} outputs")
    t = tensor_circuit_from_operator_circuit(q, y)
    if b is None:
        b = choose_bubbling(q)
    return contract(t, b, max_width=max_width, stats=stats)


def prob_answer_zero(
    q: OperatorCircuit,
    b: Bubbling | Sequence[int] | None = None,
    *,
    max_width: int = DEFAULT_WIDTH_CAP,
    stats: ContractionStats | None = None,
) -> float:
    """Squared norm of Q|x> on answer = 0, as the value of Q''s tensor circuit.

    ``b`` is a bubbling of Q''s graph (see :func:`q_prime_bubbling`).
    """
    qp = build_q_prime(q)
    t = tensor_circuit_from_operator_circuit(qp)
    if b is None:
        b = choose_bubbling(q, q_prime=True)
    stats = stats if stats is not None else ContractionStats()
    value = contract(t, b, max_width=max_width, stats=stats)
    stats.imag_part = value.imag
    if abs(value.imag) > IMAG_TOLERANCE:
        logger.warning("imaginary part %.3g of a squared norm exceeds %.0e", value.imag, IMAG_TOLERANCE)
    return value.real


def dump_tensor_circuit(t: TensorCircuit) -> list[dict]:
    """Debug dump: one record per vertex with its edges and [re, im] entries."""
    return [
        {
            "vertex": v,
            "kind": t.graph.kinds[v],
            "edges": list(tensor.edges),
            "entries": [[float(z.real), float(z.imag)] for z in tensor.entries],
        }
        for v, tensor in enumerate(t.tensors)
    ]
