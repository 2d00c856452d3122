"""Operator circuits, their validation, the Q' construction and a dense simulator.

Wire ids are non-negative integers. Input terminal ``i`` produces wire ``i``;
every gate consumes wires that are already live and produces fresh ones. Wires
that no gate consumes are the circuit outputs.

The dense simulator here is deliberately naive. It is the ground truth the
tensor-network engine is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gates import LinearGate, adjoint_gate, identity_gate, project0_gate

DEFAULT_WIRE_CAP = 20


class CircuitError(ValueError):
    """Raised when a circuit violates its structural invariants."""

    def __init__(self, violation: "Violation"):
        super().__init__(str(violation))
        self.violation = violation


class WireCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GateOp:
    """One application of a gate: consumed wires, produced wires, optional layer tag."""

    gate: LinearGate
    in_wires: tuple[int, ...]
    out_wires: tuple[int, ...]
    layer: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "in_wires", tuple(int(w) for w in self.in_wires))
        object.__setattr__(self, "out_wires", tuple(int(w) for w in self.out_wires))


@dataclass(frozen=True)
class OperatorCircuit:
    """A circuit of arbitrary linear gates acting on a classical input string.

    ``outputs`` fixes the order of the dangling wires; when omitted they are
    taken in ascending wire id. ``answer_wire`` is a wire id, not a position.
    """

    num_inputs: int
    input_bits: str
    gates: tuple[GateOp, ...] = ()
    answer_wire: int | None = None
    outputs: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.outputs is not None:
            object.__setattr__(self, "outputs", tuple(int(w) for w in self.outputs))

    @property
    def input_wires(self) -> tuple[int, ...]:
        return tuple(range(self.num_inputs))

    @property
    def output_wires(self) -> tuple[int, ...]:
        if self.outputs is not None:
            return self.outputs
        return tuple(sorted(_dangling(self)))

    @property
    def num_outputs(self) -> int:
        return len(self.output_wires)

    @property
    def answer_index(self) -> int:
        if self.answer_wire is None:
            raise CircuitError(Violation("missing answer", "circuit has no answer wire"))
        return self.output_wires.index(self.answer_wire)

    def max_wire(self) -> int:
        wires = [self.num_inputs - 1]
        for op in self.gates:
            wires.extend(op.out_wires)
        return max(wires)

    def has_layers(self) -> bool:
        return bool(self.gates) and all(op.layer is not None for op in self.gates)

    def with_input(self, bits: str) -> "OperatorCircuit":
        return OperatorCircuit(self.num_inputs, bits, self.gates, self.answer_wire, self.outputs)


def _dangling(q: OperatorCircuit) -> set[int]:
    live = set(q.input_wires)
    for op in q.gates:
        live.difference_update(op.in_wires)
        live.update(op.out_wires)
    return live


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    gate_index: int | None = None
    wire: int | None = None

    def __str__(self):
        where = []
        if self.gate_index is not None:
            where.append(f"gate {self.gate_index}")
        if self.wire is not None:
            where.append(f"wire {self.wire}")
        suffix = f" ({', '.join(where)})" if where else ""
        return f"{self.kind}: {self.message}{suffix}"


def validate(q: OperatorCircuit) -> Violation | None:
    """Return ``None`` if ``q`` is well formed, else the first violation found."""
    if len(q.input_bits) != q.num_inputs or any(c not in "01" for c in q.input_bits):
        return Violation("bad input bits", f"expected {q.num_inputs} bits of 0/1, got {q.input_bits!r}")
    produced = set(q.input_wires)
    consumed: set[int] = set()
    for i, op in enumerate(q.gates):
        if len(op.in_wires) != op.gate.arity_in or len(op.out_wires) != op.gate.arity_out:
            return Violation(
                "arity mismatch",
                f"{op.gate.name} is {op.gate.arity_in}->{op.gate.arity_out} "
                f"but wired {len(op.in_wires)}->{len(op.out_wires)}",
                gate_index=i,
            )
        for w in op.in_wires:
            if w not in produced:
                return Violation("unknown wire", "consumed before it is produced", i, w)
            if w in consumed:
                return Violation("wire reuse", "wire consumed more than once", i, w)
            consumed.add(w)
        for w in op.out_wires:
            if w < 0:
                return Violation("bad wire id", "wire ids must be non-negative", i, w)
            if w in produced:
                return Violation("wire redefined", "wire produced more than once", i, w)
            produced.add(w)
    dangling = produced - consumed
    if q.outputs is not None:
        if len(set(q.outputs)) != len(q.outputs) or set(q.outputs) != dangling:
            return Violation("output mismatch", f"outputs {list(q.outputs)} != dangling wires {sorted(dangling)}")
    if q.answer_wire is not None and q.answer_wire not in dangling:
        return Violation("answer not output", "answer wire is not a dangling output", wire=q.answer_wire)
    return None


def require_valid(q: OperatorCircuit) -> OperatorCircuit:
    violation = validate(q)
    if violation is not None:
        raise CircuitError(violation)
    return q


def build_q_prime(q: OperatorCircuit, *, verbatim_projector: bool = False) -> OperatorCircuit:
    """Build Q' = Q^dagger . (|0><0| on the answer wire) . Q.

    The result maps the inputs of ``q`` back onto the same number of outputs,
    and ``<x|Q'|x>`` is the squared norm of ``Q|x>`` projected onto answer 0.

    With ``verbatim_projector`` the middle gate is the identity pattern
    m(00) = m(11) = 1 instead of diag(1, 0); Q' then computes the full squared
    norm of ``Q|x>``.

    Gate layout: forward gates keep their indices ``0..G-1``, the projector is
    gate ``G`` and the adjoint of gate ``i`` is gate ``2G - i``.
    """
    require_valid(q)
    if q.answer_wire is None:
        raise CircuitError(Violation("missing answer", "Q' needs an answer wire"))
    next_id = q.max_wire() + 1

    def fresh() -> int:
        nonlocal next_id
        next_id += 1
        return next_id - 1

    mirror = {w: w for w in q.output_wires}
    projected = fresh()
    mirror[q.answer_wire] = projected
    middle = identity_gate() if verbatim_projector else project0_gate()

    tagged = q.has_layers()
    top = max((op.layer for op in q.gates), default=0) if tagged else 0

    ops = list(q.gates)
    ops.append(GateOp(middle, (q.answer_wire,), (projected,), top + 1 if tagged else None))
    for op in reversed(q.gates):
        ins = tuple(mirror[w] for w in op.out_wires)
        outs = tuple(fresh() for _ in op.in_wires)
        mirror.update(zip(op.in_wires, outs))
        layer = 2 * top + 2 - op.layer if tagged else None
        ops.append(GateOp(adjoint_gate(op.gate), ins, outs, layer))
    outputs = tuple(mirror[w] for w in q.input_wires)
    return OperatorCircuit(q.num_inputs, q.input_bits, tuple(ops), answer_wire=None, outputs=outputs)


@dataclass(frozen=True)
class StateVector:
    """Dense amplitudes over live wires, big-endian in ``wire_order``."""

    amplitudes: np.ndarray
    wire_order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.amplitudes.shape != (2 ** len(self.wire_order),):
            raise ValueError("amplitude vector length must be 2**(number of wires)")

    def amplitude(self, bits: str) -> complex:
        if len(bits) != len(self.wire_order):
            raise ValueError(f"expected {len(self.wire_order)} bits")
        return complex(self.amplitudes[int(bits, 2)] if bits else self.amplitudes[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def gate_schedule(q: OperatorCircuit, schedule: str | Sequence[int] = "auto") -> list[int]:
    """Order in which the dense simulator applies gates.

    ``"listed"`` is list order. ``"layered"`` sorts by layer tag (ties by
    index) and must be topological. ``"auto"`` uses the layered order when
    every gate is tagged and the order is topological, since that keeps far
    fewer wires live for circuits built with a sweep in mind.
    """
    n = len(q.gates)
    if isinstance(schedule, str):
        if schedule == "listed":
            return list(range(n))
        if schedule not in ("layered", "auto"):
            raise ValueError(f"unknown schedule {schedule!r}")
        if not q.has_layers():
            if schedule == "layered":
                raise ValueError("circuit has untagged gates")
            return list(range(n))
        order = sorted(range(n), key=lambda i: (q.gates[i].layer, i))
        if _is_topological(q, order):
            return order
        if schedule == "layered":
            raise ValueError("layer order is not topological")
        return list(range(n))
    order = [int(i) for i in schedule]
    if sorted(order) != list(range(n)) or not _is_topological(q, order):
        raise ValueError("schedule must be a topological permutation of the gates")
    return order


def _is_topological(q: OperatorCircuit, order: Sequence[int]) -> bool:
    live = set(q.input_wires)
    for i in order:
        op = q.gates[i]
        if not live.issuperset(op.in_wires):
            return False
        live.difference_update(op.in_wires)
        live.update(op.out_wires)
    return True


class _DenseRun:
    """State of shape (2,)*live + (batch,); input wires are inserted lazily."""

    def __init__(self, q: OperatorCircuit, batch_bits: np.ndarray | None, initial, cap: int):
        self.cap = cap
        if initial is not None:
            vec = np.asarray(initial, dtype=np.complex128)
            if vec.shape != (2**q.num_inputs,):
                raise ValueError(f"initial state must have length {2**q.num_inputs}")
            self.live = list(q.input_wires)
            self._check_cap()
            self.state = vec.reshape((2,) * q.num_inputs + (1,))
            self.pending: dict[int, np.ndarray] = {}
        else:
            self.live = []
            self.state = np.ones((batch_bits.shape[1],), dtype=np.complex128)
            self.pending = {w: batch_bits[w] for w in q.input_wires}

    def _check_cap(self):
        if len(self.live) > self.cap:
            raise WireCapExceeded(f"{len(self.live)} live wires exceeds cap {self.cap}")

    def _insert(self, w: int):
        bits = self.pending.pop(w)
        batch = self.state.shape[-1]
        onehot = np.zeros((2, batch))
        onehot[bits, np.arange(batch)] = 1.0
        onehot = onehot.reshape((2,) + (1,) * len(self.live) + (batch,))
        self.live.insert(0, w)
        self._check_cap()
        self.state = onehot * self.state[None]

    def apply(self, op: GateOp):
        for w in op.in_wires:
            if w in self.pending:
                self._insert(w)
        try:
            axes = [self.live.index(w) for w in op.in_wires]
        except ValueError:
            raise CircuitError(Violation("unknown wire", "gate input not live", wire=None)) from None
        m = len(axes)
        rest = [w for w in self.live if w not in op.in_wires]
        moved = np.moveaxis(self.state, axes, list(range(m)))
        tail = moved.shape[m:]
        flat = moved.reshape(2**m, -1)
        out = op.gate.matrix @ flat
        self.live = list(op.out_wires) + rest
        self._check_cap()
        self.state = out.reshape((2,) * len(op.out_wires) + tail)

    def finish(self, outputs: Sequence[int]) -> np.ndarray:
        for w in list(self.pending):
            self._insert(w)
        perm = [self.live.index(w) for w in outputs] + [len(self.live)]
        return self.state.transpose(perm).reshape(2 ** len(outputs), -1)


def _run(q, batch_bits, initial, cap, schedule) -> np.ndarray:
    require_valid(q)
    run = _DenseRun(q, batch_bits, initial, cap)
    for i in gate_schedule(q, schedule):
        run.apply(q.gates[i])
    return run.finish(q.output_wires)


def _bits_array(strings: Sequence[str], width: int) -> np.ndarray:
    arr = np.zeros((width, len(strings)), dtype=np.intp)
    for b, s in enumerate(strings):
        for w, c in enumerate(s):
            arr[w, b] = int(c)
    return arr


def dense_apply(
    q: OperatorCircuit,
    *,
    initial: Sequence[complex] | np.ndarray | None = None,
    cap: int = DEFAULT_WIRE_CAP,
    schedule: str | Sequence[int] = "auto",
) -> StateVector:
    """Apply ``q`` to ``|input_bits>`` (or to ``initial``) by brute force.

    Raises WireCapExceeded if more than ``cap`` wires are ever live.
    """
    batch = None if initial is not None else _bits_array([q.input_bits], q.num_inputs)
    out = _run(q, batch, initial, cap, schedule)
    return StateVector(out[:, 0].copy(), q.output_wires)


def circuit_matrix(
    q: OperatorCircuit, *, cap: int = DEFAULT_WIRE_CAP, schedule: str | Sequence[int] = "auto"
) -> np.ndarray:
    """The full ``2**num_outputs x 2**num_inputs`` matrix of ``q``, ignoring ``input_bits``."""
    n = q.num_inputs
    strings = [format(x, f"0{n}b") if n else "" for x in range(2**n)]
    return _run(q, _bits_array(strings, n), None, cap, schedule)


def prob_answer_zero_dense(q: OperatorCircuit, **kwargs) -> float:
    """Squared norm of the output state restricted to answer wire = 0."""
    index = q.answer_index
    psi = dense_apply(q, **kwargs)
    k = len(psi.wire_order)
    amps = psi.amplitudes.reshape((2,) * k)
    zero = np.take(amps, 0, axis=index)
    return float(np.vdot(zero, zero).real)
