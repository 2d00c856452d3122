import json
import os

import numpy as np
import pytest

from bubblesim.circuit import GateOp, OperatorCircuit, circuit_matrix
from bubblesim.formats import (
    FormatError,
    circuit_from_dict,
    circuit_to_dict,
    dump_circuit,
    format_bubbling,
    format_graph,
    load_circuit,
    parse_bubbling,
    parse_circuit,
    parse_graph,
    write_atomic,
)
from bubblesim.gates import LinearGate, hadamard
from bubblesim.graph import exact_bubble_width
from bubblesim.qft import QftParams, build_approx_qft
from bubblesim.randomized import random_operator_circuit

H_FILE = '{"num_inputs": 1, "input_bits": "0", "answer_wire": 1, "gates": [{"name": "H", "in_wires": [0], "out_wires": [1]}]}'


def test_parse_minimal_circuit():
    q = parse_circuit(H_FILE)
    assert q.num_inputs == 1 and q.answer_wire == 1
    assert q.gates[0].gate == hadamard()


def test_round_trip_random_circuits():
    rng = np.random.default_rng(2)
    for _ in range(20):
        q = random_operator_circuit(rng)
        back = parse_circuit(dump_circuit(q))
        assert back.output_wires == q.output_wires
        assert back.answer_wire == q.answer_wire
        np.testing.assert_allclose(circuit_matrix(back), circuit_matrix(q), atol=1e-12)


def test_round_trip_keeps_layers():
    q = build_approx_qft(QftParams(3, k=2), "101")
    back = circuit_from_dict(json.loads(dump_circuit(q)))
    assert [op.layer for op in back.gates] == [op.layer for op in q.gates]
    assert back.input_bits == "101"


def test_builtins_are_written_without_matrix():
    doc = circuit_to_dict(parse_circuit(H_FILE))
    assert "matrix" not in doc["gates"][0]
    custom = OperatorCircuit(1, "0", (GateOp(LinearGate(1, 1, np.eye(2) * 1j, name="S"), (0,), (1,)),))
    rec = circuit_to_dict(custom)["gates"][0]
    assert rec["matrix"] == [[0.0, 1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 1.0]]


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"gates": []}',
        '{"num_inputs": 1, "gates": [{"name": "H"}]}',
        '{"num_inputs": 1, "gates": [{"name": "FOO", "in_wires": [0], "out_wires": [1]}]}',
        '{"num_inputs": 1, "gates": [{"name": "CNOT", "in_wires": [0], "out_wires": [1]}]}',
        '{"num_inputs": 1, "gates": [{"name": "U", "in_wires": [0], "out_wires": [1], "matrix": [[1, 0]]}]}',
        '{"num_inputs": 1, "gates": [{"name": "U", "in_wires": [0], "out_wires": [1], "matrix": [1, 2, 3, 4]}]}',
    ],
)
def test_malformed_circuits(text):
    with pytest.raises(FormatError):
        parse_circuit(text)


def test_load_from_path(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(H_FILE)
    assert load_circuit(path).num_inputs == 1


def test_graph_round_trip():
    text = "c a star\np 5 4\n0 1\n0 2\n# comment\n0 3\n0 4\n"
    g = parse_graph(text)
    assert exact_bubble_width(g)[0] == 2
    assert parse_graph(format_graph(g)).edges == g.edges


@pytest.mark.parametrize(
    "text",
    ["0 1\n", "p 2\n", "p 2 1\n0\n", "p 2 2\n0 1\n", "p 2 1\n0 x\n", "p 2 1\n0 5\n", "p 2 1\np 2 1\n0 1\n", ""],
)
def test_malformed_graphs(text):
    with pytest.raises(FormatError):
        parse_graph(text)


def test_bubbling_round_trip():
    g = parse_graph("p 3 2\n0 1\n1 2\n")
    _, b = exact_bubble_width(g)
    assert parse_bubbling(format_bubbling(b)) == b.order
    with pytest.raises(FormatError):
        parse_bubbling("0 one 2")


def test_write_atomic_replaces_and_cleans_up(tmp_path):
    path = tmp_path / "out.txt"
    write_atomic(path, "first")
    write_atomic(path, "second")
    assert path.read_text() == "second"
    assert os.listdir(tmp_path) == ["out.txt"]
    assert path.stat().st_mode & 0o044
