"""Brute-force reference values, deliberately computed a different way.

Limit value functions are obtained by enumerating every simple cycle of the
reachable product graph (networkx's Johnson enumeration).  Discounted values
are obtained by exhaustive depth-``n`` deepening with tail bounds, then
snapped to the unique candidate lasso value left inside the interval.
"""
from __future__ import annotations

from fractions import Fraction

import networkx as nx

from .core import AutomatonError, LassoWord, WeightedAutomaton
from .evaluate import build_product, lasso_value
from .graphs import WeightedGraph, discounted_lasso_value

DEFAULT_CAP = 64


class OracleCapExceeded(AutomatonError):
    pass


def _collapse(g: WeightedGraph) -> nx.DiGraph:
    # every value function here is monotone in each weight: parallel edges keep the heaviest
    d = nx.DiGraph()
    d.add_nodes_from(range(g.n))
    for e in g.edges:
        if d.has_edge(e.src, e.dst):
            if e.weight > d[e.src][e.dst]["w"]:
                d[e.src][e.dst]["w"] = e.weight
        else:
            d.add_edge(e.src, e.dst, w=e.weight)
    return d


def _reachable(d: nx.DiGraph, start: int) -> nx.DiGraph:
    keep = nx.descendants(d, start) | {start}
    return d.subgraph(keep)


def oracle_graph(g: WeightedGraph, valuefn) -> Fraction:
    d = _reachable(_collapse(g), g.initial)
    if valuefn.tag == "sup":
        return max(w for _, _, w in d.edges(data="w"))
    if valuefn.tag == "disc":
        return oracle_disc_graph(g, valuefn.lam)
    best = None
    for cyc in nx.simple_cycles(d):
        weights = [d[cyc[k]][cyc[(k + 1) % len(cyc)]]["w"] for k in range(len(cyc))]
        val = lasso_value(valuefn, (), weights)
        if best is None or val > best:
            best = val
    if best is None:
        raise AutomatonError("no reachable cycle")
    return best


def _rho_values(d: nx.DiGraph, start: int, lam: Fraction) -> set[Fraction]:
    """Values of every lasso made of a simple stem closing onto itself."""
    values = set()
    path = [start]
    weights: list[Fraction] = []
    pos = {start: 0}

    def extend():
        u = path[-1]
        for v in d.successors(u):
            w = d[u][v]["w"]
            if v in pos:
                k = pos[v]
                values.add(discounted_lasso_value(weights[:k], weights[k:] + [w], lam))
            else:
                pos[v] = len(path)
                path.append(v)
                weights.append(w)
                extend()
                path.pop()
                weights.pop()
                del pos[v]

    extend()
    return values


def oracle_disc_graph(g: WeightedGraph, lam) -> Fraction:
    """Optimal discounted value by deepening with tail bounds ``V lam^n / (1-lam)``."""
    lam = Fraction(lam)
    d = _reachable(_collapse(g), g.initial)
    candidates = _rho_values(d, g.initial, lam)
    big_v = max(abs(w) for _, _, w in d.edges(data="w"))
    # best[u] = max partial discounted sum over all paths of length n from u
    best = {u: Fraction(0) for u in d.nodes}
    n = 0
    while True:
        tail = big_v * lam**n / (1 - lam)
        centre = best[g.initial]
        inside = [c for c in candidates if centre - tail <= c <= centre + tail]
        if len(inside) == 1:
            return inside[0]
        if not inside:
            raise ArithmeticError("no candidate lasso value inside the tail interval")
        best = {u: max(d[u][v]["w"] + lam * best[v] for v in d.successors(u)) for u in d.nodes}
        n += 1


def oracle_eval(aut: WeightedAutomaton, word: LassoWord, cap: int = DEFAULT_CAP) -> Fraction:
    if aut.valuefn.finite:
        raise AutomatonError("the lasso oracle needs an infinite-word automaton")
    g = build_product(aut, word)
    if g.n > cap:
        raise OracleCapExceeded(f"product graph has {g.n} nodes, cap is {cap}")
    return oracle_graph(g, aut.valuefn)


def oracle_finite(aut: WeightedAutomaton, word) -> Fraction:
    """Enumerate every run explicitly."""
    from .evaluate import run_value

    symbols = tuple(getattr(word, "symbols", word))
    runs = [((aut.initial,), ())]
    for s in symbols:
        runs = [
            (states + (t.dst,), ws + (t.weight,))
            for states, ws in runs
            for t in aut.successors(states[-1], s)
        ]
    return max(run_value(aut.valuefn, ws) for _, ws in runs)
