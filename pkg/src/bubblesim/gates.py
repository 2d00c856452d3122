"""Linear gates and the built-in gate library.

A gate is any complex matrix from ``arity_in`` to ``arity_out`` qubits. Rows
and columns are indexed by basis strings in big-endian wire order: the first
listed wire is the most significant bit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class LinearGate:
    """A linear map from ``arity_in`` qubits to ``arity_out`` qubits.

    The matrix has shape ``(2**arity_out, 2**arity_in)`` and need not be
    unitary. Zero-arity sides are allowed (state preparation, erasure) but not
    both at once.
    """

    arity_in: int
    arity_out: int
    matrix: np.ndarray
    name: str = field(default="U")

    def __post_init__(self):
        if self.arity_in < 0 or self.arity_out < 0:
            raise ValueError("gate arities must be non-negative")
        if self.arity_in == 0 and self.arity_out == 0:
            raise ValueError("a gate must touch at least one wire")
        matrix = np.array(self.matrix, dtype=np.complex128)
        expected = (2**self.arity_out, 2**self.arity_in)
        if matrix.shape != expected:
            raise ValueError(f"gate {self.name!r}: matrix shape {matrix.shape}, expected {expected}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError(f"gate {self.name!r}: matrix has non-finite entries")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def degree(self) -> int:
        return self.arity_in + self.arity_out

    def is_unitary(self, atol: float = 1e-10) -> bool:
        if self.arity_in != self.arity_out:
            return False
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[1]), atol=atol))

    def __eq__(self, other):
        if not isinstance(other, LinearGate):
            return NotImplemented
        return (
            self.arity_in == other.arity_in
            and self.arity_out == other.arity_out
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.arity_in, self.arity_out, self.matrix.tobytes()))

    def __repr__(self):
        return f"LinearGate({self.name!r}, {self.arity_in}->{self.arity_out})"


def adjoint_gate(g: LinearGate) -> LinearGate:
    """Return the adjoint g* (arities swapped, conjugate-transposed matrix)."""
    if g.name.endswith("*"):
        name = g.name[:-1]
    elif g.name in SELF_ADJOINT:
        name = g.name
    else:
        name = g.name + "*"
    return LinearGate(g.arity_out, g.arity_in, g.matrix.conj().T, name=name)


def hadamard() -> LinearGate:
    return LinearGate(1, 1, SQRT_HALF * np.array([[1, 1], [1, -1]]), name="H")


def cnot() -> LinearGate:
    m = np.eye(4)[[0, 1, 3, 2]]
    return LinearGate(2, 2, m, name="CNOT")


def copy_gate() -> LinearGate:
    """1 -> 2 fan-out of a classical bit: |b> -> |b>|b>."""
    m = np.zeros((4, 2))
    m[0b00, 0] = 1.0
    m[0b11, 1] = 1.0
    return LinearGate(1, 2, m, name="COPY")


def erase_gate() -> LinearGate:
    """1 -> 0 map sending both basis states to the scalar 1."""
    return LinearGate(1, 0, np.array([[1.0, 1.0]]), name="ERASE")


def prep0_gate() -> LinearGate:
    """0 -> 1 map sending the scalar 1 to |0>."""
    return LinearGate(0, 1, np.array([[1.0], [0.0]]), name="PREP0")


def cphase_gate(theta: float) -> LinearGate:
    """Controlled phase |x>|y> -> exp(2 pi i theta x y) |x>|y>.

    ``theta`` is measured in turns, not radians.
    """
    theta = float(theta)
    phase = np.exp(2j * np.pi * theta)
    return LinearGate(2, 2, np.diag([1.0, 1.0, 1.0, phase]), name=f"CPHASE({theta!r})")


def project0_gate() -> LinearGate:
    """1 -> 1 projector onto |0>, i.e. diag(1, 0)."""
    return LinearGate(1, 1, np.diag([1.0, 0.0]), name="PROJ0")


def identity_gate(arity: int = 1) -> LinearGate:
    return LinearGate(arity, arity, np.eye(2**arity), name="I")


SELF_ADJOINT = {"H", "CNOT", "PROJ0", "I"}

_FIXED = {
    "H": hadamard,
    "CNOT": cnot,
    "COPY": copy_gate,
    "ERASE": erase_gate,
    "PREP0": prep0_gate,
    "PROJ0": project0_gate,
    "I": identity_gate,
}
_CPHASE_RE = re.compile(r"^CPHASE\(\s*([^)]+?)\s*\)$")


def builtin_gate(name: str) -> LinearGate:
    """Look up a named built-in such as ``"H"`` or ``"CPHASE(0.25)"``.

    Raises KeyError for unknown names.
    """
    if name in _FIXED:
        return _FIXED[name]()
    match = _CPHASE_RE.match(name)
    if match:
        try:
            theta = float(match.group(1))
        except ValueError:
            raise KeyError(name) from None
        return cphase_gate(theta)
    raise KeyError(name)


def is_builtin(g: LinearGate) -> bool:
    try:
        return builtin_gate(g.name) == g
    except KeyError:
        return False
