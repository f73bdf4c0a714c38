"""Locally constant observables and the operations that massage them:
two-sided to one-sided reduction, sub-action normalization, range
truncation, and compilation to edge weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import IncompatibleOrder, NoAdmissiblePast, NotASubAction
from .symbolic import DeBruijnGraph, SftSystem, Word


def admissible_words(sft: SftSystem, length: int) -> list[Word]:
    words: list[Word] = [(a,) for a in range(sft.alphabet_size)]
    for _ in range(length - 1):
        words = [w + (b,) for w in words for b in sft.successors[w[-1]]]
    return words


@dataclass(frozen=True, eq=False)
class OneSidedPotential:
    """B: Sigma -> Q depending only on the first `range` symbols.

    Range-1 inputs are promoted to range 2 at construction (the value of
    a 2-word is the value of its first symbol); declared_range remembers
    what was asked for. Optional Hoelder metadata rides along for
    reporting only, it never enters the arithmetic.
    """

    sft: SftSystem
    range: int
    table: Mapping[Word, Fraction]
    declared_range: int
    holder_theta: Fraction | None = None
    holder_const: Fraction | None = None

    def value(self, word: Sequence[int]) -> Fraction:
        key = tuple(word[: self.range])
        try:
            return self.table[key]
        except KeyError:
            raise ValueError(
                f"word {tuple(word)} does not determine an admissible "
                f"range-{self.range} window"
            ) from None


def build_one_sided(sft: SftSystem, m: int, entries: Mapping, *,
                    holder_theta=None, holder_const=None) -> OneSidedPotential:
    """Validate a range-m table: exactly the admissible m-words, rational values."""
    if m < 1:
        raise ValueError(f"potential range must be >= 1, got {m}")
    table: dict[Word, Fraction] = {}
    for key, val in entries.items():
        word = tuple(int(s) for s in key)
        if len(word) != m:
            raise ValueError(f"table word {word} does not have length {m}")
        if not sft.admissible(word):
            raise ValueError(f"table word {word} is not admissible")
        if word in table:
            raise ValueError(f"duplicate table word {word}")
        table[word] = Fraction(val)
    missing = [w for w in admissible_words(sft, m) if w not in table]
    if missing:
        raise ValueError(f"table is missing admissible words, first: {missing[0]}")
    declared = m
    if m == 1:
        table = {w: table[w[:1]] for w in admissible_words(sft, 2)}
        m = 2
    theta = None if holder_theta is None else Fraction(holder_theta)
    const = None if holder_const is None else Fraction(holder_const)
    return OneSidedPotential(sft, m, table, declared, theta, const)


@dataclass(frozen=True, eq=False)
class TwoSidedPotential:
    """Observable on the two-sided model, constant on windows of
    past_depth symbols behind and future_depth symbols ahead.

    Table keys are the admissible (p+q)-words y_p...y_1 x_0...x_{q-1};
    admissibility of the key covers the junction pair (y_1, x_0). The
    value is read as the observable composed with the forward step, so
    the one-sided reduction below is a plain minimum over pasts.
    """

    sft: SftSystem
    past_depth: int
    future_depth: int
    table: Mapping[Word, Fraction]


def build_two_sided(sft: SftSystem, p: int, q: int, entries: Mapping) -> TwoSidedPotential:
    if p < 1 or q < 1:
        raise ValueError("past and future depths must both be >= 1")
    table: dict[Word, Fraction] = {}
    for key, val in entries.items():
        word = tuple(int(s) for s in key)
        if len(word) != p + q:
            raise ValueError(f"table word {word} does not have length {p + q}")
        if not sft.admissible(word):
            raise ValueError(f"table word {word} is not admissible")
        if word in table:
            raise ValueError(f"duplicate table word {word}")
        table[word] = Fraction(val)
    missing = [w for w in admissible_words(sft, p + q) if w not in table]
    if missing:
        raise ValueError(f"table is missing admissible words, first: {missing[0]}")
    return TwoSidedPotential(sft, p, q, table)


def admissible_pasts(sft: SftSystem, p: int, anchor: int) -> list[Word]:
    """All admissible p-words y_p...y_1 that can precede the symbol `anchor`."""
    chains: list[Word] = [(y,) for y in sft.predecessors[anchor]]
    for _ in range(p - 1):
        chains = [(y,) + c for c in chains for y in sft.predecessors[c[0]]]
    return chains


def reduce_two_sided(ahat: TwoSidedPotential, sft: SftSystem) -> OneSidedPotential:
    """B(w) = min over admissible pasts y of ahat(y + w), range = future_depth.

    The minimizing value of the result equals the holonomic minimizing
    value of ahat: every length-k path of the two-sided model picks its
    pasts freely step by step, so minimizing per step loses nothing.
    """
    p, q = ahat.past_depth, ahat.future_depth
    reduced: dict[Word, Fraction] = {}
    for w in admissible_words(sft, q):
        pasts = admissible_pasts(sft, p, w[0])
        if not pasts:
            raise NoAdmissiblePast(f"no admissible past of depth {p} before {w}")
        reduced[w] = min(ahat.table[y + w] for y in pasts)
    return build_one_sided(sft, q, reduced)


@dataclass(frozen=True, eq=False)
class NormalizedPotential:
    """Edge slacks of a sub-action: B = w - abar - u(head) + u(tail) >= 0.

    Stored as a potential of range order+1 so it can be compiled onto
    the same graph (or any finer one) like any other observable.
    """

    base: OneSidedPotential
    abar: Fraction
    subaction_used: object


def normalize(b: OneSidedPotential, u, abar, graph: DeBruijnGraph) -> NormalizedPotential:
    """Normalize by a sub-action given as node values on `graph`.

    `u` may be a SubAction or a plain sequence of node values; a depth
    mismatch with the graph order is refused.
    """
    abar = Fraction(abar)
    values = getattr(u, "values", u)
    depth = getattr(u, "depth", graph.order)
    if depth != graph.order or len(values) != graph.n_nodes:
        raise IncompatibleOrder(
            f"sub-action depth {depth} with {len(values)} values does not fit "
            f"an order-{graph.order} graph on {graph.n_nodes} nodes"
        )
    weights = compile_weights(b, graph)
    table: dict[Word, Fraction] = {}
    for e, w in zip(graph.edges, weights):
        slack = w - abar - values[e.head] + values[e.tail]
        if slack < 0:
            raise NotASubAction(
                f"edge {e.word} has negative normalized weight {slack}"
            )
        table[e.word] = slack
    base = OneSidedPotential(graph.sft, graph.order + 1, table, graph.order + 1)
    return NormalizedPotential(base, abar, u)


def truncate(b: OneSidedPotential, r: int) -> tuple[OneSidedPotential, Fraction]:
    """Coarsen to range r by minimizing over extensions.

    Returns the coarsened potential and the exact sup-error bound
    max over r-words of (max extension - min extension). r equal to the
    working range is allowed and is the identity with bound 0.
    """
    m = b.range
    if not 1 <= r <= m:
        raise ValueError(f"truncation range must be in 1..{m}, got {r}")
    if r == m:
        return b, Fraction(0)
    groups: dict[Word, list[Fraction]] = {}
    for word, val in b.table.items():
        groups.setdefault(word[:r], []).append(val)
    table = {w: min(vals) for w, vals in groups.items()}
    bound = max(max(vals) - min(vals) for vals in groups.values())
    out = build_one_sided(b.sft, r, table,
                          holder_theta=b.holder_theta, holder_const=b.holder_const)
    return out, bound


def compile_weights(b: OneSidedPotential, graph: DeBruijnGraph) -> tuple[Fraction, ...]:
    """Edge weight = b on the length-m prefix of the edge word.

    Needs order >= m-1 so every edge word determines the value; on finer
    graphs path sums agree with the coarsest compatible graph.
    """
    m = b.range
    if graph.order < max(m - 1, 1):
        raise IncompatibleOrder(
            f"graph order {graph.order} cannot carry a range-{m} potential"
        )
    return tuple(b.table[e.word[:m]] for e in graph.edges)
