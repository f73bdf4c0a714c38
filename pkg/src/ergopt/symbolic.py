"""Symbolic dynamics substrate: subshifts of finite type, lasso points,
and the de Bruijn refinement graphs all solvers run on.

Symbols are 0-based integers. Metric values are exact powers of the
rational parameter lambda, so distance comparisons never round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    BudgetExceeded,
    EmptyRowOrColumn,
    LambdaOutOfRange,
    NotIrreducible,
)

Word = tuple[int, ...]

DEFAULT_NODE_BUDGET = 10**6
MAX_ALPHABET = 64


def strongly_connected_components(successors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Returns the components in reverse topological order (a component is
    emitted only after everything reachable from it), each sorted
    ascending. Singletons without a self-loop are included; callers that
    only want cyclic components filter afterwards.
    """
    n = len(successors)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            succ = successors[v]
            while ei < len(succ):
                w = succ[ei]
                ei += 1
                if index[w] < 0:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                components.append(comp)
    return components


@dataclass(frozen=True)
class SftSystem:
    """A one-sided subshift of finite type with its metric parameter."""

    alphabet_size: int
    transition: tuple[tuple[int, ...], ...]
    lam: Fraction
    successors: tuple[tuple[int, ...], ...]
    predecessors: tuple[tuple[int, ...], ...]

    def allows(self, a: int, b: int) -> bool:
        return self.transition[a][b] == 1

    def admissible(self, word: Sequence[int]) -> bool:
        if len(word) == 0:
            return False
        for s in word:
            if not 0 <= s < self.alphabet_size:
                return False
        return all(self.allows(a, b) for a, b in zip(word, word[1:]))


def validate_word(word: Sequence[int], sft: SftSystem) -> Word:
    """Coerce to a tuple and insist on admissibility."""
    w = tuple(int(s) for s in word)
    if not sft.admissible(w):
        raise ValueError(f"word {w} is not admissible for this system")
    return w


def build_sft(alphabet_size: int, matrix: Sequence[Sequence[int]], lam) -> SftSystem:
    """Validate and freeze a subshift of finite type.

    The transition matrix must be square 0/1, have no empty row or
    column, and be irreducible (single strongly connected component).
    """
    if not 1 <= alphabet_size <= MAX_ALPHABET:
        raise ValueError(f"alphabet size must be in 1..{MAX_ALPHABET}, got {alphabet_size}")
    if len(matrix) != alphabet_size or any(len(row) != alphabet_size for row in matrix):
        raise ValueError(f"transition matrix must be {alphabet_size}x{alphabet_size}")
    rows = []
    for row in matrix:
        entries = tuple(int(v) for v in row)
        if any(v not in (0, 1) for v in entries):
            raise ValueError("transition matrix entries must be 0 or 1")
        rows.append(entries)
    transition = tuple(rows)
    successors = tuple(
        tuple(b for b in range(alphabet_size) if transition[a][b] == 1)
        for a in range(alphabet_size)
    )
    predecessors = tuple(
        tuple(a for a in range(alphabet_size) if transition[a][b] == 1)
        for b in range(alphabet_size)
    )
    for a in range(alphabet_size):
        if not successors[a]:
            raise EmptyRowOrColumn(f"symbol {a} has no successor (empty row)")
        if not predecessors[a]:
            raise EmptyRowOrColumn(f"symbol {a} has no predecessor (empty column)")
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise LambdaOutOfRange(f"lambda must lie strictly between 0 and 1, got {lam}")
    if len(strongly_connected_components(successors)) != 1:
        raise NotIrreducible("transition matrix is not strongly connected")
    return SftSystem(alphabet_size, transition, lam, successors, predecessors)


@dataclass(frozen=True)
class LassoPoint:
    """Eventually periodic point, preperiod + repeating cycle.

    Always construct through make(): equality, shifts and distances
    assume the canonical form (primitive cycle, shortest preperiod).
    """

    preperiod: Word
    cycle: Word

    @staticmethod
    def make(preperiod: Sequence[int], cycle: Sequence[int]) -> LassoPoint:
        pre = [int(s) for s in preperiod]
        cyc = tuple(int(s) for s in cycle)
        if not cyc:
            raise ValueError("lasso cycle must be nonempty")
        length = len(cyc)
        for d in range(1, length + 1):
            if length % d == 0 and cyc == cyc[:d] * (length // d):
                cyc = cyc[:d]
                break
        # Absorb preperiod symbols that already continue the cycle:
        # u·c^inf with u ending in c's last symbol equals u'·c'^inf for
        # the right rotation c' of c.
        while pre and pre[-1] == cyc[-1]:
            pre.pop()
            cyc = cyc[-1:] + cyc[:-1]
        return LassoPoint(tuple(pre), cyc)

    def symbol(self, i: int) -> int:
        p = len(self.preperiod)
        if i < p:
            return self.preperiod[i]
        return self.cycle[(i - p) % len(self.cycle)]

    def expansion(self, n: int) -> Word:
        return tuple(self.symbol(i) for i in range(n))

    def admissible(self, sft: SftSystem) -> bool:
        seq = self.preperiod + self.cycle + (self.cycle[0],)
        if any(not 0 <= s < sft.alphabet_size for s in seq):
            return False
        return all(sft.allows(a, b) for a, b in zip(seq, seq[1:]))


def lasso_shift(x: LassoPoint) -> LassoPoint:
    """The left shift on lasso representations, canonicalized."""
    if x.preperiod:
        return LassoPoint.make(x.preperiod[1:], x.cycle)
    return LassoPoint.make((), x.cycle[1:] + x.cycle[:1])


def lasso_distance(x: LassoPoint, y: LassoPoint, sft: SftSystem) -> Fraction:
    """d(x,y) = lambda^k with k the first index where the expansions differ.

    Two eventually periodic points that agree up to
    max(preperiods) + lcm(cycle lengths) agree everywhere, so the scan
    is bounded.
    """
    x = LassoPoint.make(x.preperiod, x.cycle)
    y = LassoPoint.make(y.preperiod, y.cycle)
    if x == y:
        return Fraction(0)
    bound = max(len(x.preperiod), len(y.preperiod)) + math.lcm(len(x.cycle), len(y.cycle))
    for i in range(bound):
        if x.symbol(i) != y.symbol(i):
            return sft.lam**i
    raise AssertionError("distinct canonical lassos agree past the periodicity bound")


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    word: Word


class DeBruijnGraph:
    """Order-r refinement of an SFT.

    Nodes are the admissible r-words in lexicographic order; every
    admissible (r+1)-word is an edge from its length-r prefix to its
    length-r suffix. Irreducibility of the transition matrix makes the
    graph strongly connected at every order.
    """

    def __init__(self, sft: SftSystem, order: int, node_budget: int = DEFAULT_NODE_BUDGET):
        if order < 1:
            raise ValueError(f"graph order must be >= 1, got {order}")
        self.sft = sft
        self.order = order
        words: list[Word] = [(a,) for a in range(sft.alphabet_size)]
        if len(words) > node_budget:
            raise BudgetExceeded(
                f"order-{order} refinement exceeds the node budget of {node_budget}"
            )
        for _ in range(order - 1):
            words = [w + (b,) for w in words for b in sft.successors[w[-1]]]
            if len(words) > node_budget:
                raise BudgetExceeded(
                    f"order-{order} refinement exceeds the node budget of {node_budget}"
                )
        self.node_words: tuple[Word, ...] = tuple(words)
        self._node_index = {w: i for i, w in enumerate(words)}
        edges: list[Edge] = []
        out_edges: list[list[int]] = [[] for _ in words]
        in_edges: list[list[int]] = [[] for _ in words]
        for i, w in enumerate(words):
            for b in sft.successors[w[-1]]:
                j = self._node_index[w[1:] + (b,)]
                out_edges[i].append(len(edges))
                in_edges[j].append(len(edges))
                edges.append(Edge(i, j, w + (b,)))
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._edge_index = {e.word: k for k, e in enumerate(edges)}
        self.out_edges: tuple[tuple[int, ...], ...] = tuple(tuple(v) for v in out_edges)
        self.in_edges: tuple[tuple[int, ...], ...] = tuple(tuple(v) for v in in_edges)

    @property
    def n_nodes(self) -> int:
        return len(self.node_words)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def node_index(self, word: Sequence[int]) -> int:
        try:
            return self._node_index[tuple(word)]
        except KeyError:
            raise ValueError(f"not an admissible node word: {tuple(word)}") from None

    def edge_index(self, word: Sequence[int]) -> int:
        try:
            return self._edge_index[tuple(word)]
        except KeyError:
            raise ValueError(f"not an admissible edge word: {tuple(word)}") from None


def refine(sft: SftSystem, r: int, node_budget: int = DEFAULT_NODE_BUDGET) -> DeBruijnGraph:
    return DeBruijnGraph(sft, r, node_budget)


def lift(graph: DeBruijnGraph, weights: Sequence[Fraction],
         node_budget: int = DEFAULT_NODE_BUDGET):
    """One refinement step: order r -> r+1, weights carried by prefix.

    The lifted graph is the line graph of the original, and the weight
    of a lifted edge is the weight of the base edge it starts with, so
    path sums (and hence cycle means and everything downstream) are
    preserved.
    """
    lifted = DeBruijnGraph(graph.sft, graph.order + 1, node_budget)
    r = graph.order
    lifted_weights = tuple(weights[graph.edge_index(e.word[: r + 1])] for e in lifted.edges)
    return lifted, lifted_weights


def lift_to(graph: DeBruijnGraph, weights: Sequence[Fraction], order: int,
            node_budget: int = DEFAULT_NODE_BUDGET):
    """Refine straight to the requested order, carrying weights by prefix."""
    if order < graph.order:
        raise ValueError(f"cannot lower order {graph.order} to {order}")
    if order == graph.order:
        return graph, tuple(weights)
    lifted = DeBruijnGraph(graph.sft, order, node_budget)
    r = graph.order
    lifted_weights = tuple(weights[graph.edge_index(e.word[: r + 1])] for e in lifted.edges)
    return lifted, lifted_weights


def lift_values(values: Sequence[Fraction], graph: DeBruijnGraph,
                lifted: DeBruijnGraph) -> tuple[Fraction, ...]:
    """Carry a node function to a finer graph: value at the r-prefix."""
    r = graph.order
    if lifted.order < r:
        raise ValueError("target graph is coarser than the source graph")
    return tuple(values[graph.node_index(w[:r])] for w in lifted.node_words)


def node_of(x: LassoPoint, graph: DeBruijnGraph) -> int:
    """Node holding the cylinder of x at the graph's resolution."""
    return graph.node_index(x.expansion(graph.order))
