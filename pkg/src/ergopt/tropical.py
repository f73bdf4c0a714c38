"""Exact min-plus solvers on finite graphs: minimizing value (minimum
cycle mean), Mane potential and Peierls barrier matrices, critical
structure with irreducible components, and calibrated sub-action vectors.

Everything is Fraction arithmetic with exact zero tests; determinism
comes from ascending index order in every tie-break.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .symbolic import Edge, strongly_connected_components


class SimpleDigraph:
    """Plain indexed digraph with the same adjacency surface as
    DeBruijnGraph, for raw-graph callers (oracle, tests)."""

    def __init__(self, n_nodes: int, edge_pairs: Sequence[tuple[int, int]]):
        if n_nodes < 1:
            raise ValueError("graph needs at least one node")
        edges: list[Edge] = []
        out_edges: list[list[int]] = [[] for _ in range(n_nodes)]
        in_edges: list[list[int]] = [[] for _ in range(n_nodes)]
        for tail, head in edge_pairs:
            if not (0 <= tail < n_nodes and 0 <= head < n_nodes):
                raise ValueError(f"edge ({tail},{head}) out of range")
            out_edges[tail].append(len(edges))
            in_edges[head].append(len(edges))
            edges.append(Edge(tail, head, ()))
        self.n_nodes = n_nodes
        self.edges = tuple(edges)
        self.out_edges = tuple(tuple(v) for v in out_edges)
        self.in_edges = tuple(tuple(v) for v in in_edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ErgodicSummary:
    abar: Fraction
    witness_cycle: tuple[int, ...]  # edge indices, in cycle order


@dataclass(frozen=True)
class BarrierMatrices:
    phi: tuple[tuple[Fraction, ...], ...]
    h: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Component:
    index: int
    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    representative: int


@dataclass(frozen=True, eq=False)
class CriticalStructure:
    """Critical edges (those on a zero-mean cycle of normalized weight),
    their strongly connected components, and the inputs they came from.

    The components of the critical subgraph are node-disjoint by
    construction (SCCs partition nodes, and a critical edge always joins
    nodes of the same SCC); node_disjoint records the verified fact.
    """

    graph: object
    weights: tuple[Fraction, ...]
    abar: Fraction
    critical_edges: tuple[int, ...]
    critical_nodes: tuple[int, ...]
    components: tuple[Component, ...]
    node_component: tuple[int | None, ...]
    edge_component: dict
    node_disjoint: bool

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c.representative for c in self.components)


def _shortest_path_potentials(graph, reduced: Sequence[Fraction]) -> list[Fraction]:
    """Bellman-Ford distances from node 0; requires no negative cycle."""
    n = graph.n_nodes
    dist: list[Fraction | None] = [None] * n
    dist[0] = Fraction(0)
    for _ in range(n):
        changed = False
        for k, e in enumerate(graph.edges):
            d = dist[e.tail]
            if d is None:
                continue
            cand = d + reduced[k]
            if dist[e.head] is None or cand < dist[e.head]:
                dist[e.head] = cand
                changed = True
        if not changed:
            break
    else:
        raise AssertionError("negative cycle under normalized weights")
    if any(d is None for d in dist):
        raise ValueError("graph is not strongly connected from node 0")
    return dist  # type: ignore[return-value]


def minimizing_value(graph, weights: Sequence[Fraction]) -> ErgodicSummary:
    """Minimum cycle mean by Karp's formula, with a zero-cycle witness.

    The witness is extracted from the subgraph of edges whose reduced
    weight (after shortest-path reweighting) is exactly zero: the
    shortest such cycle through the smallest node that lies on one.
    """
    n = graph.n_nodes
    weights = [Fraction(w) for w in weights]
    if graph.n_edges == 0:
        raise ValueError("graph has no edges")

    dp: list[list[Fraction | None]] = [[None] * n for _ in range(n + 1)]
    dp[0][0] = Fraction(0)
    for k in range(1, n + 1):
        row = dp[k]
        prev = dp[k - 1]
        for idx, e in enumerate(graph.edges):
            d = prev[e.tail]
            if d is None:
                continue
            cand = d + weights[idx]
            if row[e.head] is None or cand < row[e.head]:
                row[e.head] = cand
    abar: Fraction | None = None
    for v in range(n):
        dnv = dp[n][v]
        if dnv is None:
            continue
        worst: Fraction | None = None
        for k in range(n):
            dkv = dp[k][v]
            if dkv is None:
                continue
            ratio = (dnv - dkv) / (n - k)
            if worst is None or ratio > worst:
                worst = ratio
        if worst is not None and (abar is None or worst < abar):
            abar = worst
    if abar is None:
        raise AssertionError("no cycle found in a strongly connected graph")

    normalized = [w - abar for w in weights]
    pot = _shortest_path_potentials(graph, normalized)
    reduced = [normalized[k] + pot[e.tail] - pot[e.head] for k, e in enumerate(graph.edges)]
    assert all(r >= 0 for r in reduced)
    zero_succ: list[list[int]] = [[] for _ in range(n)]
    for k, e in enumerate(graph.edges):
        if reduced[k] == 0:
            zero_succ[e.tail].append(e.head)
    sccs = strongly_connected_components(zero_succ)
    node_scc = [0] * n
    for ci, comp in enumerate(sccs):
        for v in comp:
            node_scc[v] = ci
    cyclic = set()
    for k, e in enumerate(graph.edges):
        if reduced[k] == 0 and node_scc[e.tail] == node_scc[e.head]:
            cyclic.add(node_scc[e.tail])
    start = min(min(sccs[ci]) for ci in cyclic)
    home = node_scc[start]

    parent: dict[int, tuple[int, int]] = {}  # node -> (previous node, edge index)
    queue = [start]
    seen = {start}
    closing: int | None = None
    last: int | None = None
    while queue and closing is None:
        nxt: list[int] = []
        for u in queue:
            for k in graph.out_edges[u]:
                e = graph.edges[k]
                if reduced[k] != 0 or node_scc[e.head] != home:
                    continue
                if e.head == start:
                    closing, last = k, u
                    break
                if e.head not in seen:
                    seen.add(e.head)
                    parent[e.head] = (u, k)
                    nxt.append(e.head)
            if closing is not None:
                break
        queue = nxt
    assert closing is not None and last is not None
    chain: list[int] = [closing]
    node = last
    while node != start:
        prev, k = parent[node]
        chain.append(k)
        node = prev
    witness = tuple(reversed(chain))
    total = sum(weights[k] for k in witness)
    assert total == abar * len(witness), "witness cycle mean disagrees with abar"
    return ErgodicSummary(abar, witness)


def mane_matrix(graph, weights: Sequence[Fraction], abar: Fraction) -> tuple[tuple[Fraction, ...], ...]:
    """phi[i][j] = minimum over nonempty paths i -> j of sum(w - abar).

    Normalized weights have no negative cycle, so walk minima are path
    minima and the per-source relaxation settles within n rounds.
    """
    n = graph.n_nodes
    normalized = [Fraction(w) - abar for w in weights]
    rows: list[tuple[Fraction, ...]] = []
    for i in range(n):
        dist: list[Fraction | None] = [None] * n
        for k in graph.out_edges[i]:
            e = graph.edges[k]
            cand = normalized[k]
            if dist[e.head] is None or cand < dist[e.head]:
                dist[e.head] = cand
        for _ in range(n):
            changed = False
            for k, e in enumerate(graph.edges):
                d = dist[e.tail]
                if d is None:
                    continue
                cand = d + normalized[k]
                if dist[e.head] is None or cand < dist[e.head]:
                    dist[e.head] = cand
                    changed = True
            if not changed:
                break
        if any(d is None for d in dist):
            raise ValueError("graph is not strongly connected")
        rows.append(tuple(dist))  # type: ignore[arg-type]
    return tuple(rows)


def critical_structure(graph, weights: Sequence[Fraction], abar: Fraction,
                       phi: Sequence[Sequence[Fraction]]) -> CriticalStructure:
    """Critical edges by the exact round-trip test, components by SCC.

    An edge is critical iff (w - abar) + phi[head][tail] == 0, i.e. it
    closes into a zero-mean cycle. Components are the strongly connected
    pieces of the critical subgraph that contain at least one edge,
    ordered by smallest node; that node is the representative.
    """
    n = graph.n_nodes
    weights = tuple(Fraction(w) for w in weights)
    critical = tuple(
        k for k, e in enumerate(graph.edges)
        if (weights[k] - abar) + phi[e.head][e.tail] == 0
    )
    succ: list[list[int]] = [[] for _ in range(n)]
    for k in critical:
        e = graph.edges[k]
        succ[e.tail].append(e.head)
    sccs = strongly_connected_components(succ)
    node_scc = [0] * n
    for ci, comp in enumerate(sccs):
        for v in comp:
            node_scc[v] = ci
    edges_by_scc: dict[int, list[int]] = {}
    for k in critical:
        e = graph.edges[k]
        assert node_scc[e.tail] == node_scc[e.head], "critical edge crosses components"
        edges_by_scc.setdefault(node_scc[e.tail], []).append(k)
    raw = [(min(sccs[ci]), sccs[ci], sorted(ks)) for ci, ks in edges_by_scc.items()]
    raw.sort()
    components: list[Component] = []
    node_component: list[int | None] = [None] * n
    edge_component: dict[int, int] = {}
    seen_nodes: set[int] = set()
    disjoint = True
    for idx, (rep, nodes, ks) in enumerate(raw):
        comp = Component(idx, tuple(nodes), tuple(ks), rep)
        components.append(comp)
        for v in nodes:
            if v in seen_nodes:
                disjoint = False
            seen_nodes.add(v)
            node_component[v] = idx
        for k in ks:
            edge_component[k] = idx
    critical_nodes = tuple(sorted(seen_nodes))
    return CriticalStructure(
        graph=graph,
        weights=weights,
        abar=Fraction(abar),
        critical_edges=critical,
        critical_nodes=critical_nodes,
        components=tuple(components),
        node_component=tuple(node_component),
        edge_component=edge_component,
        node_disjoint=disjoint,
    )


def peierls_matrix(graph, weights: Sequence[Fraction], abar: Fraction,
                   phi: Sequence[Sequence[Fraction]],
                   crit: CriticalStructure) -> tuple[tuple[Fraction, ...], ...]:
    """h[i][j] = min over critical z of phi[i][z] + phi[z][j].

    Long minimizing paths can idle inside the critical graph at zero
    cost, so the liminf over path lengths relays through some critical
    node; the oracle checks this identity against fixed-length minima.
    """
    if not crit.critical_nodes:
        raise AssertionError("no critical node: witness cycle must produce one")
    n = graph.n_nodes
    rows = []
    for i in range(n):
        rows.append(tuple(
            min(phi[i][z] + phi[z][j] for z in crit.critical_nodes)
            for j in range(n)
        ))
    return tuple(rows)


def lax_oleinik_step(u: Sequence[Fraction], graph, weights: Sequence[Fraction],
                     abar: Fraction) -> tuple[Fraction, ...]:
    """(Lu)(j) = min over incoming edges (i -> j) of u(i) + w - abar."""
    out = []
    for j in range(graph.n_nodes):
        out.append(min(
            u[graph.edges[k].tail] + weights[k] - abar
            for k in graph.in_edges[j]
        ))
    return tuple(out)


def calibrated_fixed_point(graph, weights: Sequence[Fraction], abar: Fraction,
                           crit: CriticalStructure,
                           h: Sequence[Sequence[Fraction]] | None = None) -> tuple[Fraction, ...]:
    """The pointwise minimum of the barrier rows of the component
    representatives: an exact fixed point of lax_oleinik_step."""
    if h is None:
        phi = mane_matrix(graph, weights, abar)
        h = peierls_matrix(graph, weights, abar, phi, crit)
    reps = crit.representatives
    return tuple(min(h[r][j] for r in reps) for j in range(graph.n_nodes))


@dataclass(frozen=True)
class ConstraintPolytope:
    """Pairwise barrier constraints on boundary data: u_j - u_i <= H[i][j]."""

    representatives: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def contains(self, values: Sequence[Fraction]) -> bool:
        r = len(self.representatives)
        if len(values) != r:
            raise ValueError(f"expected {r} boundary values, got {len(values)}")
        vals = [Fraction(v) for v in values]
        return all(
            vals[j] - vals[i] <= self.matrix[i][j]
            for i in range(r) for j in range(r)
        )


def constraint_polytope(crit: CriticalStructure, h: Sequence[Sequence[Fraction]],
                        representatives: Sequence[int] | None = None) -> ConstraintPolytope:
    reps = tuple(representatives) if representatives is not None else crit.representatives
    matrix = tuple(tuple(h[a][b] for b in reps) for a in reps)
    return ConstraintPolytope(reps, matrix)
