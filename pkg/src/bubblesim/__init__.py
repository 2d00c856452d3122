"""Simulate operator circuits by contracting their tensor network along a low-width vertex order."""

from .circuit import (
    CircuitError,
    GateOp,
    OperatorCircuit,
    build_q_prime,
    circuit_matrix,
    dense_apply,
    prob_answer_zero_dense,
    validate,
)
from .gates import LinearGate, adjoint_gate, builtin_gate
from .graph import (
    Bubbling,
    CircuitGraph,
    PathDecomposition,
    circuit_graph,
    exact_bubble_width,
    exact_pathwidth,
    greedy_bubbling,
    layered_bubbling,
)
from .qft import QftParams, build_approx_qft, exact_qft_matrix
from .tensor import (
    FrontierOverflow,
    Tensor,
    TensorCircuit,
    amplitude,
    choose_bubbling,
    contract,
    prob_answer_zero,
    q_prime_bubbling,
    tensor_circuit_from_operator_circuit,
    value_brute_force,
)

__all__ = [
    "Bubbling",
    "CircuitError",
    "CircuitGraph",
    "FrontierOverflow",
    "GateOp",
    "LinearGate",
    "OperatorCircuit",
    "PathDecomposition",
    "QftParams",
    "Tensor",
    "TensorCircuit",
    "adjoint_gate",
    "amplitude",
    "build_approx_qft",
    "build_q_prime",
    "builtin_gate",
    "choose_bubbling",
    "circuit_graph",
    "circuit_matrix",
    "contract",
    "dense_apply",
    "exact_bubble_width",
    "exact_pathwidth",
    "exact_qft_matrix",
    "greedy_bubbling",
    "layered_bubbling",
    "prob_answer_zero",
    "prob_answer_zero_dense",
    "q_prime_bubbling",
    "tensor_circuit_from_operator_circuit",
    "validate",
    "value_brute_force",
]
