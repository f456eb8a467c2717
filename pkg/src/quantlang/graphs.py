"""Graph algorithms on weighted digraphs: SCCs, cycle means, discounted values."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, NamedTuple, Sequence


class Edge(NamedTuple):
    src: int
    dst: int
    weight: Fraction
    label: object = None


@dataclass(eq=False)
class WeightedGraph:
    n: int
    edges: list[Edge]
    initial: int = 0

    @cached_property
    def succ(self) -> list[list[int]]:
        out = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            out[e.src].append(i)
        return out


def strongly_connected_components(n: int, succ_nodes: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Iterative Tarjan.  Returns ``(comp_of_node, components)``; components in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = succ_nodes[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = len(comps)
                    members.append(w)
                    if w == v:
                        break
                comps.append(members)
    return comp, comps


def edge_sccs(graph: WeightedGraph, keep: Callable[[Edge], bool] | None = None):
    """SCCs of the subgraph made of edges accepted by ``keep``.

    Returns ``(comp, comps, internal)`` where ``internal[c]`` lists the indices
    of kept edges whose endpoints both lie in component ``c``.  A component is
    nontrivial (carries a cycle) iff its internal list is nonempty.
    """
    kept = [i for i, e in enumerate(graph.edges) if keep is None or keep(e)]
    adj = [[] for _ in range(graph.n)]
    for i in kept:
        e = graph.edges[i]
        adj[e.src].append(e.dst)
    comp, comps = strongly_connected_components(graph.n, adj)
    internal = [[] for _ in comps]
    for i in kept:
        e = graph.edges[i]
        if comp[e.src] == comp[e.dst]:
            internal[comp[e.src]].append(i)
    return comp, comps, internal


def reachable_nodes(graph: WeightedGraph, start: int | None = None) -> list[bool]:
    start = graph.initial if start is None else start
    seen = [False] * graph.n
    seen[start] = True
    todo = [start]
    while todo:
        u = todo.pop()
        for i in graph.succ[u]:
            v = graph.edges[i].dst
            if not seen[v]:
                seen[v] = True
                todo.append(v)
    return seen


def shortest_path(graph: WeightedGraph, start: int, goal: Callable[[int], bool],
                  allowed: Callable[[int], bool] | None = None) -> list[int] | None:
    """BFS; returns edge indices of a shortest path from ``start`` to a goal node."""
    if goal(start):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for i in graph.succ[u]:
            if allowed is not None and not allowed(i):
                continue
            v = graph.edges[i].dst
            if v in parent:
                continue
            parent[v] = i
            if goal(v):
                path = []
                while v != start:
                    j = parent[v]
                    path.append(j)
                    v = graph.edges[j].src
                return path[::-1]
            queue.append(v)
    return None


def cycle_through(graph: WeightedGraph, edge: int, allowed: Callable[[int], bool] | None = None) -> list[int] | None:
    """A cycle starting with ``edge`` and returning to its source."""
    e = graph.edges[edge]
    back = shortest_path(graph, e.dst, lambda v: v == e.src, allowed)
    return None if back is None else [edge] + back


def _scale_factor(weights) -> int:
    d = 1
    for w in weights:
        d = d * w.denominator // math.gcd(d, w.denominator)
    return d


def _karp(nodes: list[int], edges: list[tuple[int, int, int]]) -> Fraction:
    """Minimum cycle mean of a strongly connected integer-weighted graph."""
    k = len(nodes)
    local = {v: i for i, v in enumerate(nodes)}
    ledges = [(local[u], local[v], w) for u, v, w in edges]
    table = [[None] * k for _ in range(k + 1)]
    table[0][0] = 0
    for step in range(1, k + 1):
        prev, cur = table[step - 1], table[step]
        for u, v, w in ledges:
            pu = prev[u]
            if pu is not None:
                cand = pu + w
                if cur[v] is None or cand < cur[v]:
                    cur[v] = cand
    best = None
    last = table[k]
    for v in range(k):
        if last[v] is None:
            continue
        worst = None
        for j in range(k):
            dj = table[j][v]
            if dj is None:
                continue
            val = Fraction(last[v] - dj, k - j)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def scc_cycle_means(graph: WeightedGraph, only: Sequence[bool] | None = None):
    """``[(component_nodes, internal_edges, min_mean, max_mean)]`` for every
    component that carries a cycle (restricted to nodes flagged in ``only``)."""
    scale = _scale_factor(e.weight for e in graph.edges)
    comp, comps, internal = edge_sccs(graph)
    out = []
    for c, members in enumerate(comps):
        if not internal[c] or (only is not None and not only[members[0]]):
            continue
        ints = [(graph.edges[i].src, graph.edges[i].dst, int(graph.edges[i].weight * scale)) for i in internal[c]]
        lo = _karp(members, ints)
        hi = -_karp(members, [(u, v, -w) for u, v, w in ints])
        out.append((members, internal[c], lo / scale, hi / scale))
    return out


def min_cycle_mean(graph: WeightedGraph) -> Fraction | None:
    """Minimum over all cycles of weight/length (Karp, per SCC); None if acyclic."""
    means = [lo for _, _, lo, _ in scc_cycle_means(graph)]
    return min(means) if means else None


def max_cycle_mean(graph: WeightedGraph) -> Fraction | None:
    means = [hi for _, _, _, hi in scc_cycle_means(graph)]
    return max(means) if means else None


def tight_cycle(graph: WeightedGraph, edge_ids: Sequence[int], mean: Fraction) -> list[int]:
    """A cycle among ``edge_ids`` whose mean equals ``mean``, the maximum cycle mean there.

    With weights shifted by ``-mean`` no cycle is positive, so longest-path
    potentials exist; every optimal cycle uses only edges tight for them.
    """
    scale = _scale_factor([graph.edges[i].weight for i in edge_ids] + [mean])
    num, den = (mean * scale).numerator, (mean * scale).denominator
    shifted = {i: int(graph.edges[i].weight * scale) * den - num for i in edge_ids}
    nodes = {graph.edges[i].src for i in edge_ids} | {graph.edges[i].dst for i in edge_ids}
    pot = {v: 0 for v in nodes}
    for _ in range(len(nodes) + 1):
        changed = False
        for i in edge_ids:
            e = graph.edges[i]
            cand = pot[e.src] + shifted[i]
            if cand > pot[e.dst]:
                pot[e.dst] = cand
                changed = True
        if not changed:
            break
    else:
        raise ArithmeticError("positive cycle: mean is not the maximum cycle mean")
    tight = {}
    for i in edge_ids:
        e = graph.edges[i]
        if pot[e.src] + shifted[i] == pot[e.dst]:
            tight.setdefault(e.src, []).append(i)
    # every node with a tight out-edge on an optimal cycle; walk until a repeat
    for start in sorted(tight):
        seen: dict[int, int] = {}
        path: list[int] = []
        v = start
        while v in tight and v not in seen:
            seen[v] = len(path)
            i = tight[v][0]
            path.append(i)
            v = graph.edges[i].dst
        if v in seen:
            cyc = path[seen[v]:]
            if sum(shifted[i] for i in cyc) == 0:
                return cyc
    # fall back to searching tight cycles exhaustively through the tight subgraph
    sub = WeightedGraph(graph.n, graph.edges)
    allowed = {i for lst in tight.values() for i in lst}
    for i in sorted(allowed):
        cyc = cycle_through(sub, i, lambda j: j in allowed)
        if cyc is not None:
            return cyc
    raise ArithmeticError("no cycle attains the given mean")


def discounted_lasso_value(stem: Sequence[Fraction], cycle: Sequence[Fraction], lam: Fraction) -> Fraction:
    """``sum_i lam^i v_i`` for the weight sequence ``stem . cycle^omega``."""
    cyc = Fraction(0)
    p = Fraction(1)
    for w in cycle:
        cyc += p * w
        p *= lam
    total = cyc / (1 - p)
    for w in reversed(stem):
        total = w + lam * total
    return total


def _policy_values(graph: WeightedGraph, policy: list[int], lam: Fraction) -> list[Fraction]:
    val: list[Fraction | None] = [None] * graph.n
    for root in range(graph.n):
        if val[root] is not None:
            continue
        path: list[int] = []
        where: dict[int, int] = {}
        v = root
        while val[v] is None and v not in where:
            where[v] = len(path)
            path.append(v)
            v = graph.edges[policy[v]].dst
        if val[v] is None:
            cyc = path[where[v]:]
            weights = [graph.edges[policy[u]].weight for u in cyc]
            val[cyc[0]] = discounted_lasso_value((), weights, lam)
            for u in reversed(cyc[1:]):
                e = graph.edges[policy[u]]
                val[u] = e.weight + lam * val[e.dst]
            path = path[:where[v]]
        for u in reversed(path):
            e = graph.edges[policy[u]]
            val[u] = e.weight + lam * val[e.dst]
    return val


def disc_policy_iteration(graph: WeightedGraph, lam: Fraction, start: int | None = None):
    """Exact optimal discounted value by policy iteration.

    Returns ``(value_at_start, policy, values)`` where ``policy[u]`` is the
    chosen edge index.  Improvements switch only on strict gain; among best
    successors the lowest destination index (then lowest edge index) wins.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("discount factor must lie in (0, 1)")
    start = graph.initial if start is None else start
    succ = graph.succ
    if any(not s for s in succ):
        raise ValueError("every node needs a successor")

    def pick(u, score):
        return min(succ[u], key=lambda i: (-score(i), graph.edges[i].dst, i))

    policy = [pick(u, lambda i: graph.edges[i].weight) for u in range(graph.n)]
    while True:
        val = _policy_values(graph, policy, lam)
        changed = False
        for u in range(graph.n):
            score = lambda i: graph.edges[i].weight + lam * val[graph.edges[i].dst]
            best = pick(u, score)
            if score(best) > val[u]:
                policy[u] = best
                changed = True
        if not changed:
            return val[start], policy, val


def follow_policy(graph: WeightedGraph, policy: Sequence[int], start: int) -> tuple[list[int], list[int]]:
    """Stem and cycle (edge indices) traced by a memoryless policy."""
    where: dict[int, int] = {}
    path: list[int] = []
    v = start
    while v not in where:
        where[v] = len(path)
        path.append(policy[v])
        v = graph.edges[policy[v]].dst
    k = where[v]
    return path[:k], path[k:]
