"""Slow reference implementations used only by the tests.

They share no code with the package's simulators: amplitudes are summed
over every 0/1 labeling of every wire with itertools, and widths come from
trying every vertex order.
"""

from __future__ import annotations

import itertools

import numpy as np


def path_sum_amplitude(q, y: str) -> complex:
    """<y|Q|x> as a sum over all wire labelings consistent with x and y."""
    wires = sorted(set(range(q.num_inputs)) | {w for op in q.gates for w in op.out_wires})
    fixed = {w: int(b) for w, b in zip(range(q.num_inputs), q.input_bits)}
    outs = list(q.outputs) if q.outputs is not None else None
    if outs is None:
        consumed = {w for op in q.gates for w in op.in_wires}
        outs = [w for w in wires if w not in consumed]
    for w, b in zip(outs, y):
        if w in fixed and fixed[w] != int(b):
            return 0j
        fixed[w] = int(b)
    free = [w for w in wires if w not in fixed]
    total = 0j
    for bits in itertools.product((0, 1), repeat=len(free)):
        label = dict(fixed)
        label.update(zip(free, bits))
        term = 1 + 0j
        for op in q.gates:
            row = int("".join(str(label[w]) for w in op.out_wires) or "0", 2)
            col = int("".join(str(label[w]) for w in op.in_wires) or "0", 2)
            term *= op.gate.matrix[row, col]
            if term == 0:
                break
        total += term
    return total


def cut_of(edges, order) -> int:
    pos = {v: i for i, v in enumerate(order)}
    return max(
        (sum(1 for u, v in edges if min(pos[u], pos[v]) <= i < max(pos[u], pos[v])) for i in range(len(order))),
        default=0,
    )


def brute_cutwidth(num_vertices: int, edges) -> int:
    return min(cut_of(edges, order) for order in itertools.permutations(range(num_vertices)))


def brute_pathwidth(num_vertices: int, edges) -> int:
    """Bag-size pathwidth via vertex separation number over every order.

    A graph with no edges needs no bags, so its width is 0.
    """
    if not edges:
        return 0
    adj = {v: set() for v in range(num_vertices)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    best = num_vertices
    for order in itertools.permutations(range(num_vertices)):
        vs = 0
        for i in range(num_vertices):
            prefix = set(order[: i + 1])
            vs = max(vs, sum(1 for v in prefix if adj[v] - prefix))
        best = min(best, vs)
    return best + 1


def dft_column(x: int, n: int) -> np.ndarray:
    size = 2**n
    return np.array([np.exp(2j * np.pi * x * y / size) for y in range(size)]) / np.sqrt(size)
