"""Circuit graphs, bubblings and path decompositions.

A bubbling is a vertex order; its width is the largest number of edges with
exactly one endpoint among the first ``i`` vertices (the cutwidth of that
linear arrangement). Multi-edges count with multiplicity.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .circuit import OperatorCircuit, require_valid

DEFAULT_VERTEX_CAP = 20


class GraphCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CircuitGraph:
    """Undirected multigraph with vertex kinds.

    For graphs built by :func:`circuit_graph` the vertex layout is fixed:
    input terminals ``0..n-1``, then one vertex per gate in list order, then
    one output terminal per output wire in output order. ``edge_wires`` gives
    the circuit wire behind each edge.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    kinds: tuple[str, ...] | None = None
    edge_wires: tuple[int, ...] | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.num_vertices - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        if self.kinds is None:
            object.__setattr__(self, "kinds", ("node",) * self.num_vertices)
        elif len(self.kinds) != self.num_vertices:
            raise ValueError("one kind per vertex required")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    @property
    def max_degree(self) -> int:
        return max((len(x) for x in self.incidence), default=0)

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def without_edge(self, e: int) -> "CircuitGraph":
        edges = self.edges[:e] + self.edges[e + 1 :]
        return CircuitGraph(self.num_vertices, edges, self.kinds)

    def relabel(self, perm: Sequence[int]) -> "CircuitGraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        kinds = [""] * self.num_vertices
        for v, k in enumerate(self.kinds):
            kinds[perm[v]] = k
        edges = tuple((perm[u], perm[v]) for u, v in self.edges)
        return CircuitGraph(self.num_vertices, edges, tuple(kinds))


def circuit_graph(q: OperatorCircuit) -> CircuitGraph:
    """One vertex per input terminal, gate and output terminal; one edge per wire."""
    require_valid(q)
    n, num_gates = q.num_inputs, len(q.gates)
    producer = {w: w for w in q.input_wires}
    consumer: dict[int, int] = {}
    order = list(q.input_wires)
    for i, op in enumerate(q.gates):
        for w in op.in_wires:
            consumer[w] = n + i
        for w in op.out_wires:
            producer[w] = n + i
            order.append(w)
    for p, w in enumerate(q.output_wires):
        consumer[w] = n + num_gates + p
    kinds = ("input",) * n + ("gate",) * num_gates + ("output",) * q.num_outputs
    edges = tuple((producer[w], consumer[w]) for w in order)
    return CircuitGraph(len(kinds), edges, kinds, tuple(order))


def _check_order(g: CircuitGraph, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(v) for v in order)
    if len(order) != g.num_vertices or set(order) != set(range(g.num_vertices)):
        raise ValueError("bubbling order is not a permutation of the graph's vertices")
    return order


def cut_sizes(g: CircuitGraph, order: Sequence[int]) -> list[int]:
    """|z_i| for i = 1..n, maintained incrementally."""
    order = _check_order(g, order)
    seen = np.zeros(g.num_vertices, dtype=bool)
    sizes = []
    size = 0
    for v in order:
        back = sum(1 for e in g.incidence[v] if seen[g.other_end(e, v)])
        size += g.degree(v) - 2 * back
        seen[v] = True
        sizes.append(size)
    return sizes


@dataclass(frozen=True)
class Bubbling:
    """A vertex order and its cut sets ``z_1..z_n`` (edge ids)."""

    order: tuple[int, ...]
    cut_profile: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, g: CircuitGraph, order: Sequence[int]) -> "Bubbling":
        order = _check_order(g, order)
        cut: set[int] = set()
        profile = []
        for v in order:
            cut.symmetric_difference_update(g.incidence[v])
            profile.append(frozenset(cut))
        return cls(order, tuple(profile))

    @property
    def width(self) -> int:
        return max((len(z) for z in self.cut_profile), default=0)

    def __len__(self):
        return len(self.order)


def bubbling_width(g: CircuitGraph, b: Bubbling | Sequence[int]) -> int:
    order = b.order if isinstance(b, Bubbling) else b
    return max(cut_sizes(g, order), default=0)


def _popcount(x: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(x).astype(np.int64)
    counts = np.zeros_like(x)
    y = x.copy()
    while np.any(y):
        counts += y & 1
        y >>= 1
    return counts


def _subset_dp(n: int, cost: np.ndarray) -> tuple[int, list[int]]:
    """Minimise, over vertex orders, the maximum of ``cost`` over prefix sets.

    ``cost[S]`` depends only on the set S, so f(S) = max(cost(S), min_v f(S - v))
    is exact. Returns the optimum and a witness order; backtracking fills the
    order from the end with the highest admissible id, so low ids come first.
    """
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pc = _popcount(masks)
    big = np.iinfo(np.int32).max
    f = np.full(size, big, dtype=np.int32)
    f[0] = cost[0]
    for p in range(1, n + 1):
        layer = masks[pc == p]
        best = np.full(layer.shape, big, dtype=np.int32)
        for v in range(n):
            has = ((layer >> v) & 1).astype(bool)
            best[has] = np.minimum(best[has], f[layer[has] ^ (1 << v)])
        f[layer] = np.maximum(cost[layer], best)
    full = size - 1
    order: list[int] = []
    s = full
    while s:
        for v in reversed(range(n)):
            if s >> v & 1 and f[s ^ (1 << v)] <= f[s]:
                order.append(v)
                s ^= 1 << v
                break
    order.reverse()
    return int(f[full]), order


def _cut_cost(g: CircuitGraph) -> np.ndarray:
    masks = np.arange(1 << g.num_vertices, dtype=np.int64)
    cost = np.zeros(masks.shape, dtype=np.int32)
    for u, v in g.edges:
        cost += (((masks >> u) ^ (masks >> v)) & 1).astype(np.int32)
    return cost


def _separation_cost(g: CircuitGraph) -> np.ndarray:
    masks = np.arange(1 << g.num_vertices, dtype=np.int64)
    cost = np.zeros(masks.shape, dtype=np.int32)
    for v in range(g.num_vertices):
        nbrs = 0
        for e in g.incidence[v]:
            nbrs |= 1 << g.other_end(e, v)
        if nbrs:
            on_boundary = ((masks >> v) & 1).astype(bool) & ((masks & nbrs) != nbrs)
            cost += on_boundary.astype(np.int32)
    return cost


def _require_small(g: CircuitGraph, cap: int):
    if g.num_vertices > cap:
        raise GraphCapExceeded(f"{g.num_vertices} vertices exceeds exact-solver cap {cap}")


def exact_bubble_width(g: CircuitGraph, cap: int = DEFAULT_VERTEX_CAP) -> tuple[int, Bubbling]:
    """Exact bubble width by dynamic programming over vertex subsets."""
    _require_small(g, cap)
    if g.num_vertices == 0:
        return 0, Bubbling((), ())
    width, order = _subset_dp(g.num_vertices, _cut_cost(g))
    return width, Bubbling.of(g, order)


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    @property
    def width(self) -> int:
        """Largest bag size (bags are counted by size, not size - 1)."""
        return max((len(b) for b in self.bags), default=0)

    def violation(self, g: CircuitGraph) -> str | None:
        for bag in self.bags:
            if any(not 0 <= v < g.num_vertices for v in bag):
                return "bag contains a vertex outside the graph"
        for u, v in g.edges:
            if not any(u in bag and v in bag for bag in self.bags):
                return f"edge ({u}, {v}) is in no bag"
        for v in range(g.num_vertices):
            hits = [i for i, bag in enumerate(self.bags) if v in bag]
            if hits and hits[-1] - hits[0] + 1 != len(hits):
                return f"bags containing vertex {v} are not contiguous"
        return None

    def is_valid(self, g: CircuitGraph) -> bool:
        return self.violation(g) is None


def exact_pathwidth(g: CircuitGraph, cap: int = DEFAULT_VERTEX_CAP) -> tuple[int, PathDecomposition]:
    """Exact path width via the vertex separation number.

    Bags only need to cover edges, so an edgeless graph has width 0 and every
    other graph has width ``vsn + 1``. The witness bags come from an optimal
    separation order: bag i holds v_i and the already-placed vertices that
    still have an unplaced neighbour.
    """
    _require_small(g, cap)
    if g.num_edges == 0:
        return 0, PathDecomposition(())
    vsn, order = _subset_dp(g.num_vertices, _separation_cost(g))
    placed: set[int] = set()
    remaining = [g.degree(v) for v in range(g.num_vertices)]
    boundary: set[int] = set()
    bags = []
    for v in order:
        if g.degree(v):
            bags.append(frozenset(boundary | {v}))
        placed.add(v)
        boundary.add(v)
        for e in g.incidence[v]:
            u = g.other_end(e, v)
            if u in placed:
                remaining[u] -= 1
                remaining[v] -= 1
        boundary = {u for u in boundary if remaining[u] > 0}
    pd = PathDecomposition(tuple(bags))
    return pd.width, pd


def greedy_bubbling(g: CircuitGraph) -> Bubbling:
    """Repeatedly swallow the vertex giving the smallest next cut (lowest id on ties)."""
    delta = [g.degree(v) for v in range(g.num_vertices)]
    heap = [(d, v) for v, d in enumerate(delta)]
    heapq.heapify(heap)
    done = [False] * g.num_vertices
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if done[v] or d != delta[v]:
            continue
        done[v] = True
        order.append(v)
        for e in g.incidence[v]:
            u = g.other_end(e, v)
            if not done[u]:
                delta[u] -= 2
                heapq.heappush(heap, (delta[u], u))
    return Bubbling.of(g, order)


def layered_bubbling(q: OperatorCircuit) -> Bubbling:
    """Swallow gates by layer tag, terminals alongside the gate they touch.

    Gates are taken in (layer, list index) order. An input terminal goes just
    before its consuming gate and an output terminal just after its producing
    gate. Wires that never meet a gate have their input terminal swallowed
    first and their output terminal last.
    """
    require_valid(q)
    if not q.has_layers() and q.gates:
        raise ValueError("layered bubbling needs a layer tag on every gate")
    g = circuit_graph(q)
    n, num_gates = q.num_inputs, len(q.gates)
    before: dict[int, list[int]] = {}
    after: dict[int, list[int]] = {}
    head, tail = [], []
    edge_of = {w: e for e, w in enumerate(g.edge_wires)}
    for p, w in enumerate(q.output_wires):
        terminal = n + num_gates + p
        producer = g.edges[edge_of[w]][0]
        if producer >= n:
            after.setdefault(producer, []).append(terminal)
        else:
            tail.append(terminal)
    for w in q.input_wires:
        consumer = g.edges[edge_of[w]][1]
        if consumer < n + num_gates:
            before.setdefault(consumer, []).append(w)
        else:
            head.append(w)
    order = list(head)
    for i in sorted(range(num_gates), key=lambda i: (q.gates[i].layer, i)):
        v = n + i
        order.extend(before.get(v, ()))
        order.append(v)
        order.extend(after.get(v, ()))
    order.extend(tail)
    return Bubbling.of(g, order)


def path_decomposition_from_bubbling(g: CircuitGraph, b: Bubbling | Sequence[int]) -> PathDecomposition:
    """Bag i = endpoints of the edges in z_i; empty bags are dropped."""
    if not isinstance(b, Bubbling):
        b = Bubbling.of(g, b)
    bags = []
    for cut in b.cut_profile:
        bag = frozenset(x for e in cut for x in g.edges[e])
        if bag:
            bags.append(bag)
    return PathDecomposition(tuple(bags))


def bubbling_from_path_decomposition(g: CircuitGraph, p: PathDecomposition) -> Bubbling:
    """Order vertices by the first bag they appear in (ascending id within a bag)."""
    problem = p.violation(g)
    if problem is not None:
        raise ValueError(f"invalid path decomposition: {problem}")
    seen: set[int] = set()
    order = []
    for bag in p.bags:
        for v in sorted(bag - seen):
            order.append(v)
            seen.add(v)
    order.extend(v for v in range(g.num_vertices) if v not in seen)
    return Bubbling.of(g, order)
