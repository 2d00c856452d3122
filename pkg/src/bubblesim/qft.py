"""Approximate QFT as an operator circuit of small bubble width.

The circuit maps |x> to the product state

    |mu_{0.x_0}> |mu_{0.x_1 x_0}> ... |mu_{0.x_{n-1} ... x_{n-k}}>

where each phase keeps only its ``k`` leading binary digits and
``|mu_t> = (|0> + exp(2 pi i t)|1>) / sqrt(2)``. It is built in three stages:

1. every input bit is fanned out into ``k`` classical copies by a tree of
   COPY gates, followed by ``k`` fresh |0> ancillas;
2. gadget ``j`` turns the last ancilla of block ``j`` into the ``j``-th
   output factor with a Hadamard and controlled phases driven by copies of
   ``x_j, x_{j-1}, ..., x_{j-k+1}``;
3. every other wire is erased to the scalar 1.

Input bit string ``x`` is big-endian: its first character is ``x_{n-1}``.
The wire layout is MSB first: block ``b`` (for bit ``l = n-1-b``) holds the
``k`` copies of ``x_l`` followed by ``k`` ancillas. Output ``j`` (position
``j`` in the output order, most significant first) is gadget ``j``'s ancilla,
which is exactly the standard big-endian DFT ordering, so no swap network
is needed.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .circuit import GateOp, OperatorCircuit
from .gates import copy_gate, cphase_gate, erase_gate, hadamard, prep0_gate
from .graph import circuit_graph, layered_bubbling

MAX_EXACT_QFT = 12

__all__ = [
    "QftParams",
    "MuState",
    "SubCircuit",
    "copy_tree",
    "build_stage1",
    "build_stage2",
    "build_stage3",
    "build_approx_qft",
    "exact_qft_matrix",
    "qft_product_state",
    "fidelity_bound",
    "WidthRow",
    "qft_width_report",
    "format_width_report",
    "default_k",
    "sweep_schedule",
    "truncated_phase",
]


def default_k(n: int, epsilon: float) -> int:
    return min(n, math.ceil(2 * math.log2(n / epsilon)) + 2)


@dataclass(frozen=True)
class QftParams:
    """Qubit count, target error and number of retained phase digits.

    ``k`` defaults to ceil(2 log2(n / epsilon)) + 2, clamped to ``n``.
    """

    n: int
    epsilon: float = 0.01
    k: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.k is None:
            object.__setattr__(self, "k", default_k(self.n, self.epsilon))
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k must lie in 1..{self.n}, got {self.k}")


@dataclass(frozen=True)
class MuState:
    theta: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([1.0, np.exp(2j * np.pi * self.theta)]) / math.sqrt(2.0)


@dataclass
class SubCircuit:
    """A block of gates with its boundary wires and a role tag per gate."""

    gates: list[GateOp] = field(default_factory=list)
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    roles: list[tuple] = field(default_factory=list)

    def add(self, gate, ins, outs, role):
        self.gates.append(GateOp(gate, tuple(ins), tuple(outs)))
        self.roles.append(role)

    def as_circuit(self, input_bits: str) -> OperatorCircuit:
        """Stand-alone circuit; requires the inputs to be wires 0..m-1 in order."""
        if self.inputs != list(range(len(self.inputs))):
            raise ValueError("sub-circuit inputs are not wires 0..m-1")
        return OperatorCircuit(len(self.inputs), input_bits, tuple(self.gates), outputs=tuple(self.outputs))


def _allocator(start: int) -> Callable[[], int]:
    counter = itertools.count(start)
    return lambda: next(counter)


def copy_tree(
    k: int,
    source: int = 0,
    alloc: Callable[[], int] | None = None,
    bit: int | None = None,
) -> SubCircuit:
    """Balanced tree of k-1 COPY gates fanning ``source`` out to ``k`` wires.

    Depth is ceil(log2 k). Leaves are returned in copy-index order; the left
    child of each node takes the lower ceil(half) of the indices.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    alloc = alloc or _allocator(source + 1)
    sub = SubCircuit(inputs=[source])
    leaves = [0] * k

    def grow(wire, lo, count, path):
        if count == 1:
            leaves[lo] = wire
            return
        a, b = alloc(), alloc()
        sub.add(copy_gate(), (wire,), (a, b), ("copy", bit, path))
        half = (count + 1) // 2
        grow(a, lo, half, path + "0")
        grow(b, lo + half, count - half, path + "1")

    grow(source, 0, k, "")
    sub.outputs = leaves
    return sub


def _copy_pos(p: QftParams, l: int, c: int) -> int:
    return (p.n - 1 - l) * 2 * p.k + c


def _anc_pos(p: QftParams, l: int, a: int) -> int:
    return (p.n - 1 - l) * 2 * p.k + p.k + a


def build_stage1(p: QftParams, alloc: Callable[[], int] | None = None) -> SubCircuit:
    """|x> -> |x_{n-1}>^k |0>^k ... |x_0>^k |0>^k on 2nk wires."""
    alloc = alloc or _allocator(p.n)
    sub = SubCircuit(inputs=list(range(p.n)))
    for i in range(p.n):
        l = p.n - 1 - i
        tree = copy_tree(p.k, i, alloc, bit=l)
        sub.gates += tree.gates
        sub.roles += tree.roles
        sub.outputs += tree.outputs
        for a in range(p.k):
            w = alloc()
            sub.add(prep0_gate(), (), (w,), ("prep", l, a))
            sub.outputs.append(w)
    return sub


def build_stage2(
    p: QftParams, wires: Sequence[int] | None = None, alloc: Callable[[], int] | None = None
) -> SubCircuit:
    """Apply the phase gadgets A_0..A_{n-1} on disjoint wire sets.

    Gadget j puts a Hadamard on the last ancilla of block j, then for each
    l = j, j-1, ..., max(0, j-k+1) a controlled phase of 2**(l-j-1) turns
    controlled by copy ``j-l`` of x_l.
    """
    size = 2 * p.n * p.k
    wires = list(range(size)) if wires is None else list(wires)
    if len(wires) != size:
        raise ValueError(f"stage 2 acts on {size} wires, got {len(wires)}")
    alloc = alloc or _allocator(max(wires) + 1)
    sub = SubCircuit(inputs=list(wires))
    current = list(wires)
    for j in range(p.n):
        at = _anc_pos(p, j, p.k - 1)
        out = alloc()
        sub.add(hadamard(), (current[at],), (out,), ("h", j))
        current[at] = out
        for l in range(j, max(0, j - p.k + 1) - 1, -1):
            cp = _copy_pos(p, l, j - l)
            ctrl, target = alloc(), alloc()
            sub.add(cphase_gate(2.0 ** (l - j - 1)), (current[cp], current[at]), (ctrl, target), ("cphase", j, l))
            current[cp], current[at] = ctrl, target
    sub.outputs = current
    return sub


def build_stage3(
    p: QftParams, wires: Sequence[int] | None = None, alloc: Callable[[], int] | None = None
) -> SubCircuit:
    """Erase every wire except each block's last ancilla; outputs in gadget order."""
    size = 2 * p.n * p.k
    wires = list(range(size)) if wires is None else list(wires)
    if len(wires) != size:
        raise ValueError(f"stage 3 acts on {size} wires, got {len(wires)}")
    sub = SubCircuit(inputs=list(wires))
    for l in range(p.n - 1, -1, -1):
        for c in range(p.k):
            sub.add(erase_gate(), (wires[_copy_pos(p, l, c)],), (), ("erase_copy", l, c))
        for a in range(p.k - 1):
            sub.add(erase_gate(), (wires[_anc_pos(p, l, a)],), (), ("erase_anc", l, a))
    sub.outputs = [wires[_anc_pos(p, j, p.k - 1)] for j in range(p.n)]
    return sub


def sweep_schedule(p: QftParams) -> list[tuple]:
    """Left-to-right swallowing order of gate roles.

    Blocks are visited in layout order. Inside a block the copy tree is
    walked depth first, highest copy index first, and each copy is used and
    erased as soon as it appears; the spare ancillas are prepared and erased
    in pairs. At most k-1 gadget wires stay open across a block boundary.
    """
    n, k = p.n, p.k
    order: list[tuple] = []
    for l in range(n - 1, -1, -1):

        def leaf(c):
            j = l + c
            if j < n:
                if c == 0:
                    order.extend([("prep", l, k - 1), ("h", l)])
                order.append(("cphase", j, l))
            order.append(("erase_copy", l, c))

        def visit(path, lo, count):
            if count == 1:
                leaf(lo)
                return
            order.append(("copy", l, path))
            half = (count + 1) // 2
            visit(path + "1", lo + half, count - half)
            visit(path + "0", lo, half)

        visit("", 0, k)
        for a in range(k - 1):
            order.extend([("prep", l, a), ("erase_anc", l, a)])
    return order


def build_approx_qft(p: QftParams, x: str | None = None) -> OperatorCircuit:
    """Three-stage approximate QFT with sweep-order layer tags.

    Every gate carries its rank in :func:`sweep_schedule` as its layer, so
    :func:`~bubblesim.graph.layered_bubbling` bubbles the circuit left to
    right. The answer wire is the first output, |mu_{0.x_0}>.
    """
    x = "0" * p.n if x is None else x
    alloc = _allocator(p.n)
    s1 = build_stage1(p, alloc)
    s2 = build_stage2(p, s1.outputs, alloc)
    s3 = build_stage3(p, s2.outputs, alloc)
    rank = {role: i for i, role in enumerate(sweep_schedule(p))}
    gates = []
    for sub in (s1, s2, s3):
        for op, role in zip(sub.gates, sub.roles):
            gates.append(GateOp(op.gate, op.in_wires, op.out_wires, rank[role]))
    outputs = tuple(s3.outputs)
    return OperatorCircuit(p.n, x, tuple(gates), answer_wire=outputs[0], outputs=outputs)


def exact_qft_matrix(n: int, *, bit_reversed: bool = False) -> np.ndarray:
    """DFT on Z_{2^n}: entry (y, x) = exp(2 pi i x y / 2^n) / sqrt(2^n).

    The builder's output order already matches the big-endian row index, so
    the default applies no permutation; ``bit_reversed`` reverses row bits.
    """
    if not 0 <= n <= MAX_EXACT_QFT:
        raise ValueError(f"n must lie in 0..{MAX_EXACT_QFT}")
    size = 2**n
    idx = np.arange(size)
    f = np.exp(2j * np.pi * np.outer(idx, idx) / size) / math.sqrt(size)
    if bit_reversed:
        rev = np.array([int(format(y, f"0{n}b")[::-1], 2) if n else 0 for y in idx])
        f = f[rev]
    return f


def truncated_phase(x: int, j: int, k: int) -> float:
    """0.x_j x_{j-1} ... x_{j-k+1} in binary (missing low bits count as 0)."""
    return sum(((x >> l) & 1) * 2.0 ** (l - j - 1) for l in range(max(0, j - k + 1), j + 1))


def qft_product_state(x: int, n: int, k: int | None = None) -> np.ndarray:
    """Kronecker product of the mu factors, output 0 most significant."""
    k = n if k is None else k
    state = np.ones(1, dtype=np.complex128)
    for j in range(n):
        state = np.kron(state, MuState(truncated_phase(x, j, k)).vector)
    return state


def fidelity_bound(n: int, k: int) -> float:
    """Infidelity bound 2 pi n 2**-k from |1 - exp(2 pi i d)| <= 2 pi d, d < 2**-k."""
    return 2 * math.pi * n * 2.0**-k


@dataclass(frozen=True)
class WidthRow:
    n: int
    k: int
    gates: int
    vertices: int
    width: int

    @property
    def ratio(self) -> float:
        return self.width / self.k**2


def qft_width_report(n_values: Iterable[int], epsilon: float = 0.01) -> list[WidthRow]:
    rows = []
    for n in n_values:
        p = QftParams(n, epsilon)
        q = build_approx_qft(p)
        g = circuit_graph(q)
        b = layered_bubbling(q)
        rows.append(WidthRow(n, p.k, len(q.gates), g.num_vertices, b.width))
    return rows


def format_width_report(rows: Sequence[WidthRow]) -> str:
    header = f"{'n':>5} {'k':>4} {'gates':>7} {'vertices':>9} {'width':>6} {'width/k^2':>10}"
    lines = [header]
    for r in rows:
        lines.append(f"{r.n:>5} {r.k:>4} {r.gates:>7} {r.vertices:>9} {r.width:>6} {r.ratio:>10.3f}")
    return "\n".join(lines)
