import math

import numpy as np
import pytest

from bubblesim.circuit import OperatorCircuit, circuit_matrix, dense_apply, gate_schedule
from bubblesim.graph import circuit_graph, layered_bubbling
from bubblesim.qft import (
    MuState,
    QftParams,
    build_approx_qft,
    build_stage1,
    build_stage2,
    build_stage3,
    copy_tree,
    default_k,
    exact_qft_matrix,
    fidelity_bound,
    format_width_report,
    qft_product_state,
    qft_width_report,
    sweep_schedule,
    truncated_phase,
)
from bubblesim.tensor import amplitude

from oracles import dft_column


@pytest.mark.parametrize(
    "n,eps,k",
    [(8, 0.01, 8), (8, 0.1, 8), (16, 0.01, 16), (32, 0.01, 26), (64, 0.01, 28), (64, 0.1, 21)],
)
def test_default_k(n, eps, k):
    assert default_k(n, eps) == k
    assert QftParams(n, eps).k == k


@pytest.mark.parametrize("kwargs", [dict(n=0), dict(n=4, epsilon=0), dict(n=4, epsilon=1.5), dict(n=4, k=5), dict(n=4, k=0)])
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        QftParams(**kwargs)


def test_mu_state():
    np.testing.assert_allclose(MuState(0.5).vector, [2**-0.5, -(2**-0.5)])
    np.testing.assert_allclose(MuState(0.25).vector, [2**-0.5, 1j * 2**-0.5])


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("bit", ["0", "1"])
def test_copy_tree_fans_out(k, bit):
    tree = copy_tree(k)
    assert len(tree.gates) == k - 1
    assert len(tree.outputs) == k
    psi = dense_apply(tree.as_circuit(bit))
    assert psi.amplitude(bit * k) == 1


def test_copy_tree_depth_is_logarithmic():
    tree = copy_tree(16)
    depth = {0: 0}
    for op in tree.gates:
        d = depth[op.in_wires[0]] + 1
        depth.update({w: d for w in op.out_wires})
    assert max(depth[w] for w in tree.outputs) == 4


def test_stage1_layout():
    p = QftParams(2, k=2)
    sub = build_stage1(p)
    psi = dense_apply(sub.as_circuit("10"))
    # block for x_1 then block for x_0, each k copies then k zeros
    assert psi.amplitude("1100" + "0000") == 1


def test_stage2_gadget_on_one_block():
    p = QftParams(1, k=1)
    q = build_stage2(p).as_circuit("10")
    psi = dense_apply(q)
    # copy of x_0 = 1 controls a half-turn phase on H|0>
    assert psi.amplitude("10") == pytest.approx(2**-0.5)
    assert psi.amplitude("11") == pytest.approx(-(2**-0.5))


def test_stage3_keeps_last_ancillas():
    p = QftParams(2, k=2)
    sub = build_stage3(p)
    assert sub.outputs == [7, 3]
    assert len(sub.gates) == 2 * (2 * p.k - 1)


def test_stage_sizes_are_checked():
    p = QftParams(2, k=2)
    with pytest.raises(ValueError):
        build_stage2(p, wires=[0, 1])
    with pytest.raises(ValueError):
        build_stage3(p, wires=[0, 1])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_exact_at_full_k_against_dft_oracle(n):
    m = circuit_matrix(build_approx_qft(QftParams(n, k=n)))
    for x in range(2**n):
        np.testing.assert_allclose(m[:, x], dft_column(x, n), atol=1e-9)


def test_exact_qft_matrix_against_oracle():
    f = exact_qft_matrix(4)
    for x in range(16):
        np.testing.assert_allclose(f[:, x], dft_column(x, 4), atol=1e-12)
    rev = exact_qft_matrix(3, bit_reversed=True)
    assert rev[0b100, 1] == pytest.approx(exact_qft_matrix(3)[0b001, 1])
    with pytest.raises(ValueError):
        exact_qft_matrix(13)


def test_uniform_outcomes_and_norm():
    n = 5
    m = circuit_matrix(build_approx_qft(QftParams(n, k=n)))
    np.testing.assert_allclose(np.abs(m) ** 2, 2.0**-n, atol=1e-9)
    np.testing.assert_allclose(np.linalg.norm(m, axis=0), 1, atol=1e-9)


def test_truncated_phase():
    assert truncated_phase(0b101, 2, 3) == pytest.approx(0.5 + 0.125)
    assert truncated_phase(0b101, 2, 1) == pytest.approx(0.5)
    assert truncated_phase(0b101, 0, 3) == pytest.approx(0.5)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_truncated_circuit_matches_product_state(k):
    n = 6
    m = circuit_matrix(build_approx_qft(QftParams(n, k=k)))
    for x in range(0, 2**n, 7):
        np.testing.assert_allclose(m[:, x], qft_product_state(x, n, k), atol=1e-9)


@pytest.mark.parametrize("k", range(3, 9))
def test_fidelity_bound_holds(k):
    n = 8
    m = circuit_matrix(build_approx_qft(QftParams(n, k=k)))
    fid = np.abs(np.sum(exact_qft_matrix(n).conj() * m, axis=0))
    assert fid.min() >= 1 - fidelity_bound(n, k)


def test_gate_count_is_linear_in_n():
    def expected(n, k):
        cphases = sum(min(j + 1, k) for j in range(n))
        return n * (k - 1) + n * k + n + cphases + n * (2 * k - 1)

    for n in (4, 8, 16):
        p = QftParams(n, k=4)
        assert len(build_approx_qft(p).gates) == expected(n, 4)
    assert len(build_approx_qft(QftParams(16, k=4)).gates) - 2 * len(build_approx_qft(QftParams(8, k=4)).gates) == 6


def test_sweep_schedule_covers_every_gate_once():
    p = QftParams(5, k=3)
    roles = sweep_schedule(p)
    assert len(roles) == len(set(roles)) == len(build_approx_qft(p).gates)


def test_layer_tags_are_topological():
    q = build_approx_qft(QftParams(6, k=4))
    assert q.has_layers()
    order = gate_schedule(q, "layered")
    assert sorted(q.gates[i].layer for i in order) == list(range(len(q.gates)))


def test_answer_wire_is_first_output():
    q = build_approx_qft(QftParams(4, k=2), "1011")
    assert q.answer_wire == q.output_wires[0]
    assert q.input_bits == "1011"


def test_widths_are_frozen():
    # measured layered widths at epsilon 0.01
    rows = qft_width_report([4, 8, 16, 32, 64])
    assert [(r.k, r.width) for r in rows] == [(4, 6), (8, 11), (16, 20), (26, 30), (28, 32)]
    assert all(r.width <= 4 * r.k**2 for r in rows)
    assert rows[-1].width < 8 * rows[1].width
    text = format_width_report(rows)
    assert text.splitlines()[0].split()[:2] == ["n", "k"]
    assert len(text.splitlines()) == 6


def test_layered_width_stays_flat_in_n_for_fixed_k():
    widths = [layered_bubbling(build_approx_qft(QftParams(n, k=4))).width for n in (8, 16, 32)]
    assert len(set(widths)) == 1


def test_contraction_amplitude_of_qft():
    n = 5
    x = 0b10110
    q = build_approx_qft(QftParams(n, k=n), format(x, f"0{n}b"))
    b = layered_bubbling(q)
    col = dft_column(x, n)
    for y in (0, 3, 17, 31):
        assert amplitude(q, format(y, f"0{n}b"), b) == pytest.approx(col[y], abs=1e-10)


def test_input_bits_are_big_endian():
    q = build_approx_qft(QftParams(3, k=3), "100")
    psi = dense_apply(q)
    np.testing.assert_allclose(psi.amplitudes, dft_column(4, 3), atol=1e-12)
    assert circuit_graph(q).num_vertices == 3 + len(q.gates) + 3
    assert isinstance(q, OperatorCircuit)
    assert math.isclose(psi.norm(), 1)
