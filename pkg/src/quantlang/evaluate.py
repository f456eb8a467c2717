"""Exact values of weighted automata on lasso words and finite words."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    AutomatonError,
    FiniteWord,
    LassoWord,
    Transition,
    ValueFunction,
    WeightedAutomaton,
    require_valid,
)
from .graphs import (
    Edge,
    WeightedGraph,
    cycle_through,
    discounted_lasso_value,
    disc_policy_iteration,
    edge_sccs,
    follow_policy,
    scc_cycle_means,
    shortest_path,
    tight_cycle,
)


class UnknownSymbol(AutomatonError):
    pass


@dataclass(eq=False)
class ProductGraph(WeightedGraph):
    """Reachable part of automaton x word positions.

    ``nodes[k] = (state, position)``; numbering is state-major, position-minor.
    Edge labels are the automaton transitions they come from.
    """

    nodes: list = None
    word: LassoWord = None


@dataclass(frozen=True)
class EvalResult:
    value: Fraction
    stem: tuple[Edge, ...] = ()
    cycle: tuple[Edge, ...] = ()
    run: tuple[Transition, ...] = ()

    def replay(self, valuefn: ValueFunction) -> Fraction:
        if valuefn.finite:
            return run_value(valuefn, [t.weight for t in self.run])
        return lasso_value(valuefn, [e.weight for e in self.stem], [e.weight for e in self.cycle])

    def describe(self) -> str:
        if self.run:
            return " ".join(f"{t.src}-{t.sym}/{t.weight}->{t.dst}" for t in self.run)

        def hop(e):
            t = e.label
            return f"{t.src}-{t.sym}/{e.weight}->{t.dst}"

        stem = " ".join(hop(e) for e in self.stem)
        cyc = " ".join(hop(e) for e in self.cycle)
        return f"{stem} ( {cyc} )^w".strip()


def lasso_value(valuefn: ValueFunction, stem: Sequence[Fraction], cycle: Sequence[Fraction]) -> Fraction:
    """Value of the weight sequence ``stem . cycle^omega``."""
    if not cycle:
        raise ValueError("empty cycle")
    tag = valuefn.tag
    if tag == "sup":
        return max(list(stem) + list(cycle))
    if tag == "limsup":
        return max(cycle)
    if tag == "liminf":
        return min(cycle)
    if tag == "limavg":
        return Fraction(sum(cycle), len(cycle))
    if tag == "disc":
        return discounted_lasso_value(stem, cycle, valuefn.lam)
    raise ValueError(f"{valuefn.display} is a finite-word value function")


def run_value(valuefn: ValueFunction, weights: Sequence[Fraction]) -> Fraction:
    if not weights:
        raise ValueError("empty run")
    if valuefn.tag == "last":
        return weights[-1]
    if valuefn.tag == "max":
        return max(weights)
    if valuefn.tag == "sum":
        return sum(weights, Fraction(0))
    raise ValueError(f"{valuefn.display} is an infinite-word value function")


def _check_symbols(aut: WeightedAutomaton, symbols) -> None:
    known = set(aut.alphabet)
    for s in symbols:
        if s not in known:
            raise UnknownSymbol(f"symbol {s!r} not in alphabet of {aut.name}")


def build_product(aut: WeightedAutomaton, word: LassoWord) -> ProductGraph:
    _check_symbols(aut, word.prefix + word.period)
    if aut.missing:
        raise AutomatonError(f"automaton {aut.name} is not total")
    length = len(word)
    start = (aut.initial, 0)
    seen = {start}
    todo = [start]
    while todo:
        q, i = todo.pop()
        j = word.next_position(i)
        for t in aut.successors(q, word.symbol(i)):
            node = (t.dst, j)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    nodes = sorted(seen)
    index = {v: k for k, v in enumerate(nodes)}
    edges = []
    for (q, i) in nodes:
        j = word.next_position(i)
        u = index[q, i]
        for t in aut.successors(q, word.symbol(i)):
            edges.append(Edge(u, index[t.dst, j], t.weight, t))
    assert len(nodes) <= aut.n_states * length
    return ProductGraph(n=len(nodes), edges=edges, initial=index[start], nodes=nodes, word=word)


def _lasso_through(g: WeightedGraph, edge: int, allowed=None) -> tuple[list[int], list[int]]:
    """Stem reaching ``edge``'s source, then a cycle starting with ``edge``."""
    cyc = cycle_through(g, edge, allowed)
    stem = shortest_path(g, g.initial, lambda v: v == g.edges[edge].src)
    return stem, cyc


def _walk_to_cycle(g: WeightedGraph, start: int) -> tuple[list[int], list[int]]:
    where, path, v = {}, [], start
    while v not in where:
        where[v] = len(path)
        i = g.succ[v][0]
        path.append(i)
        v = g.edges[i].dst
    return path[: where[v]], path[where[v]:]


def _eval_graph(g: WeightedGraph, valuefn: ValueFunction) -> tuple[Fraction, list[int], list[int]]:
    tag = valuefn.tag
    if tag == "sup":
        best = max(range(len(g.edges)), key=lambda i: (g.edges[i].weight, -i))
        stem = shortest_path(g, g.initial, lambda v: v == g.edges[best].src)
        more, cyc = _walk_to_cycle(g, g.edges[best].dst)
        return g.edges[best].weight, stem + [best] + more, cyc
    if tag == "limsup":
        _, _, internal = edge_sccs(g)
        inner = [i for lst in internal for i in lst]
        best = max(inner, key=lambda i: (g.edges[i].weight, -i))
        stem, cyc = _lasso_through(g, best)
        return g.edges[best].weight, stem, cyc
    if tag == "liminf":
        for v in sorted({e.weight for e in g.edges}, reverse=True):
            keep = lambda e, v=v: e.weight >= v
            _, _, internal = edge_sccs(g, keep)
            inner = [i for lst in internal for i in lst]
            if inner:
                first = min(inner)
                stem, cyc = _lasso_through(g, first, lambda i, v=v: g.edges[i].weight >= v)
                return v, stem, cyc
        raise AssertionError("total product graph without a cycle")
    if tag == "limavg":
        comps = scc_cycle_means(g)
        members, internal, _, hi = max(comps, key=lambda c: c[3])
        cyc = tight_cycle(g, internal, hi)
        src = g.edges[cyc[0]].src
        stem = shortest_path(g, g.initial, lambda v: v == src)
        return hi, stem, cyc
    if tag == "disc":
        value, policy, _ = disc_policy_iteration(g, valuefn.lam, g.initial)
        stem, cyc = follow_policy(g, policy, g.initial)
        return value, stem, cyc
    raise ValueError(f"{valuefn.display} is a finite-word value function")


def eval_graph(g: WeightedGraph, valuefn: ValueFunction) -> EvalResult:
    """Sup over infinite paths from ``g.initial`` of the value function."""
    value, stem, cyc = _eval_graph(g, valuefn)
    return EvalResult(value, tuple(g.edges[i] for i in stem), tuple(g.edges[i] for i in cyc))


def eval_lasso(aut: WeightedAutomaton, word: LassoWord) -> EvalResult:
    """``L_A(word)``: exact sup over runs, with a lasso run attaining it."""
    if aut.valuefn.finite:
        raise AutomatonError(f"{aut.valuefn.display} automata read finite words")
    if aut.valuefn.tag == "disc":
        require_valid(aut)
    return eval_graph(build_product(aut, word), aut.valuefn)


def eval_finite(aut: WeightedAutomaton, word: FiniteWord) -> EvalResult:
    """Backward dynamic programme over the layered (position, state) DAG."""
    if not aut.valuefn.finite:
        raise AutomatonError(f"{aut.valuefn.display} automata read infinite words")
    if not isinstance(word, FiniteWord):
        word = FiniteWord(tuple(word))
    _check_symbols(aut, word.symbols)
    if aut.missing:
        raise AutomatonError(f"automaton {aut.name} is not total")
    tag = aut.valuefn.tag
    n = len(word)
    # best[q]: value of the best suffix run from q at the current position
    best: dict[int, tuple[Fraction, Transition] | None] = {q: None for q in aut.states}
    choice: list[dict[int, Transition]] = [dict() for _ in range(n)]
    for pos in range(n - 1, -1, -1):
        nxt = best
        best = {}
        for q in aut.states:
            top = None
            for t in aut.successors(q, word.symbols[pos]):
                tail = nxt[t.dst]
                if pos == n - 1:
                    cand = t.weight
                elif tag == "sum":
                    cand = t.weight + tail
                elif tag == "max":
                    cand = max(t.weight, tail)
                else:
                    cand = tail
                if top is None or cand > top[0]:
                    top = (cand, t)
            best[q] = top[0]
            choice[pos][q] = top[1]
    run = []
    q = aut.initial
    for pos in range(n):
        t = choice[pos][q]
        run.append(t)
        q = t.dst
    return EvalResult(best[aut.initial], run=tuple(run))


def evaluate(aut: WeightedAutomaton, word) -> EvalResult:
    """Dispatch on the word kind."""
    if isinstance(word, LassoWord):
        return eval_lasso(aut, word)
    return eval_finite(aut, word)


def value(aut: WeightedAutomaton, word) -> Fraction:
    return evaluate(aut, word).value
