"""Text formats: JSON circuit files, edge-list graphs and bubbling files.

Circuit file (UTF-8 JSON)::

    {"num_inputs": 1, "input_bits": "0", "answer_wire": 1,
     "gates": [{"name": "H", "in_wires": [0], "out_wires": [1]}]}

A gate record may carry ``matrix`` as a row-major list of ``[re, im]`` pairs
of length ``2**len(out_wires) * 2**len(in_wires)``; without it, ``name``
must be a built-in (H, CNOT, COPY, ERASE, PREP0, PROJ0, I, CPHASE(theta)).
Optional fields: ``outputs`` (output wire order) and per-gate ``layer``.

Edge-list graph: header ``p <num_vertices> <num_edges>``, then one ``u v``
line per edge. Lines starting with ``c`` or ``#`` are comments.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .circuit import GateOp, OperatorCircuit
from .gates import LinearGate, builtin_gate, is_builtin
from .graph import Bubbling, CircuitGraph


class FormatError(ValueError):
    pass


def _matrix_from_pairs(pairs, rows: int, cols: int) -> np.ndarray:
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in pairs], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if flat.size != rows * cols:
        raise FormatError(f"matrix has {flat.size} entries, expected {rows * cols}")
    return flat.reshape(rows, cols)


def _gate_from_record(rec: dict, index: int) -> GateOp:
    try:
        ins = [int(w) for w in rec["in_wires"]]
        outs = [int(w) for w in rec["out_wires"]]
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"gate {index}: in_wires and out_wires must be integer lists") from None
    name = rec.get("name", "U")
    if "matrix" in rec:
        matrix = _matrix_from_pairs(rec["matrix"], 2 ** len(outs), 2 ** len(ins))
        try:
            gate = LinearGate(len(ins), len(outs), matrix, name=name)
        except ValueError as exc:
            raise FormatError(f"gate {index}: {exc}") from None
    else:
        try:
            gate = builtin_gate(name)
        except KeyError:
            raise FormatError(f"gate {index}: unknown gate {name!r} and no matrix given") from None
        if (gate.arity_in, gate.arity_out) != (len(ins), len(outs)):
            raise FormatError(f"gate {index}: {name} is {gate.arity_in}->{gate.arity_out}, wired {len(ins)}->{len(outs)}")
    layer = rec.get("layer")
    return GateOp(gate, tuple(ins), tuple(outs), None if layer is None else int(layer))


def circuit_from_dict(doc: dict) -> OperatorCircuit:
    if not isinstance(doc, dict):
        raise FormatError("circuit document must be a JSON object")
    try:
        num_inputs = int(doc["num_inputs"])
        bits = str(doc.get("input_bits", "0" * num_inputs))
        gates = doc.get("gates", [])
    except (KeyError, TypeError, ValueError):
        raise FormatError("circuit needs an integer num_inputs") from None
    ops = tuple(_gate_from_record(rec, i) for i, rec in enumerate(gates))
    answer = doc.get("answer_wire")
    outputs = doc.get("outputs")
    return OperatorCircuit(
        num_inputs,
        bits,
        ops,
        answer_wire=None if answer is None else int(answer),
        outputs=None if outputs is None else tuple(int(w) for w in outputs),
    )


def circuit_to_dict(q: OperatorCircuit) -> dict:
    gates = []
    for op in q.gates:
        rec = {"name": op.gate.name, "in_wires": list(op.in_wires), "out_wires": list(op.out_wires)}
        if not is_builtin(op.gate):
            rec["matrix"] = [[float(z.real), float(z.imag)] for z in op.gate.matrix.reshape(-1)]
        if op.layer is not None:
            rec["layer"] = op.layer
        gates.append(rec)
    doc = {"num_inputs": q.num_inputs, "input_bits": q.input_bits}
    if q.answer_wire is not None:
        doc["answer_wire"] = q.answer_wire
    if q.outputs is not None:
        doc["outputs"] = list(q.outputs)
    doc["gates"] = gates
    return doc


def parse_circuit(text: str) -> OperatorCircuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    return circuit_from_dict(doc)


def load_circuit(path: str | os.PathLike) -> OperatorCircuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def dump_circuit(q: OperatorCircuit) -> str:
    return json.dumps(circuit_to_dict(q), indent=1)


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_graph(g: CircuitGraph) -> str:
    lines = [f"p {g.num_vertices} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> CircuitGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c#":
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 3:
                raise FormatError(f"line {lineno}: malformed or repeated header")
            header = (int(parts[1]), int(parts[2]))
            continue
        if header is None:
            raise FormatError(f"line {lineno}: edge before 'p' header")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"line {lineno}: vertex ids must be integers") from None
    if header is None:
        raise FormatError("missing 'p <num_vertices> <num_edges>' header")
    if len(edges) != header[1]:
        raise FormatError(f"header announces {header[1]} edges, found {len(edges)}")
    try:
        return CircuitGraph(header[0], tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_bubbling(b: Bubbling) -> str:
    return " ".join(str(v) for v in b.order) + "\n"


def parse_bubbling(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise FormatError("bubbling file must hold whitespace-separated vertex ids") from None
