"""Cut-point languages ``{w : L(w) >= eta}`` and their extraction as Büchi automata."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    LIMSUP,
    AutomatonError,
    CapExceeded,
    LassoWord,
    Transition,
    WeightedAutomaton,
    as_rational,
    fmt,
    require_valid,
)
from .evaluate import eval_lasso
from .graphs import Edge, WeightedGraph, reachable_nodes, scc_cycle_means

ONE = Fraction(1)
ZERO = Fraction(0)

DEFAULT_UNFOLD_CAP = 200_000


class NotIsolated(AutomatonError):
    """The threshold meets the interval of some reachable component."""


class IsolationViolated(AutomatonError):
    """A finite path ends strictly between the two decision bounds."""

    def __init__(self, message, path, partial):
        super().__init__(message)
        self.path = tuple(path)
        self.partial = partial


@dataclass(frozen=True)
class CutPoint:
    eta: Fraction
    epsilon: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "eta", as_rational(self.eta))
        if self.epsilon is not None:
            eps = as_rational(self.epsilon)
            if eps <= 0:
                raise ValueError("the isolation margin must be positive")
            object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class SccInterval:
    scc: int
    m: Fraction
    M: Fraction
    reachable: bool
    states: tuple[int, ...]

    def __contains__(self, x) -> bool:
        return self.m <= x <= self.M

    def distance(self, x) -> Fraction:
        if x < self.m:
            return self.m - x
        if x > self.M:
            return x - self.M
        return ZERO


@dataclass(frozen=True)
class IsolationReport:
    isolated: bool
    margin: Fraction | None
    intervals: tuple[SccInterval, ...]


def cutpoint_member(aut: WeightedAutomaton, word: LassoWord, eta) -> bool:
    return eval_lasso(aut, word).value >= as_rational(eta)


def automaton_graph(aut: WeightedAutomaton) -> WeightedGraph:
    """The transition graph of ``aut``; edges are labelled with their transitions."""
    return WeightedGraph(aut.n_states, [Edge(t.src, t.dst, t.weight, t) for t in aut.transitions], aut.initial)


def _require_det_limavg(aut: WeightedAutomaton) -> None:
    require_valid(aut)
    if aut.valuefn.tag != "limavg":
        raise AutomatonError("expected a LimAvg automaton")
    if not aut.deterministic:
        raise AutomatonError("expected a deterministic automaton")


def limavg_scc_intervals(aut: WeightedAutomaton) -> list[SccInterval]:
    """``[m_i, M_i]`` for every cycle-carrying SCC, ordered by smallest state."""
    _require_det_limavg(aut)
    g = automaton_graph(aut)
    reach = reachable_nodes(g)
    rows = sorted(scc_cycle_means(g), key=lambda r: min(r[0]))
    return [
        SccInterval(k, lo, hi, reach[members[0]], tuple(sorted(members)))
        for k, (members, _, lo, hi) in enumerate(rows)
    ]


def limavg_isolation_check(aut: WeightedAutomaton, eta) -> IsolationReport:
    """Only reachable components matter: others can never carry a run's tail."""
    eta = as_rational(eta)
    intervals = tuple(limavg_scc_intervals(aut))
    live = [iv for iv in intervals if iv.reachable]
    if any(eta in iv for iv in live):
        return IsolationReport(False, None, intervals)
    margin = min(iv.distance(eta) for iv in live)
    return IsolationReport(True, margin, intervals)


def extract_dbw_limavg(aut: WeightedAutomaton, eta) -> WeightedAutomaton:
    """Deterministic Büchi automaton for ``L >= eta`` on the same skeleton.

    Edges leaving a state of a reachable SCC with ``m_i > eta`` get weight 1,
    every other edge weight 0.
    """
    eta = as_rational(eta)
    report = limavg_isolation_check(aut, eta)
    if not report.isolated:
        bad = next(iv for iv in report.intervals if iv.reachable and eta in iv)
        raise NotIsolated(
            f"threshold {fmt(eta)} lies in [{fmt(bad.m)}, {fmt(bad.M)}] of the component {list(bad.states)}"
        )
    accepting = {q for iv in report.intervals if iv.reachable and iv.m > eta for q in iv.states}
    return aut.replace(
        name=f"{aut.name}>={fmt(eta)}",
        transitions=[t._replace(weight=ONE if t.src in accepting else ZERO) for t in aut.transitions],
        valuefn=LIMSUP,
        meta={"construction": "SCC interval acceptance", "citation": "Thm 5", "accepting": sorted(accepting)},
    )


def unfolding_depth(vmax, lam, epsilon) -> int:
    """Least ``n`` with ``vmax * lam**n / (1 - lam) < epsilon``."""
    lam, epsilon, vmax = as_rational(lam), as_rational(epsilon), as_rational(vmax)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = 0
    while vmax * lam**n / (1 - lam) >= epsilon:
        n += 1
    return n


def tail_bound(vmax, lam, n) -> Fraction:
    lam = as_rational(lam)
    return as_rational(vmax) * lam**n / (1 - lam)


def extract_nbw_disc(aut: WeightedAutomaton, eta, epsilon, cap: int = DEFAULT_UNFOLD_CAP) -> WeightedAutomaton:
    """Büchi automaton for ``L >= eta`` given a claimed isolation margin ``epsilon``.

    The automaton is unfolded to the least depth ``n`` whose tail bound
    ``u_n`` is below ``epsilon``.  Nodes are ``(state, depth, partial sum)``,
    so paths agreeing on all three share a node.  A depth-``n`` node goes to
    an accepting sink when its partial sum is at least
    ``eta + epsilon - u_n``, to a rejecting sink when it is at most
    ``eta - epsilon + u_n``, and anything in between refutes the margin.
    """
    require_valid(aut)
    if aut.valuefn.tag != "disc":
        raise AutomatonError("expected a Disc automaton")
    cut = CutPoint(eta, epsilon)
    eta, epsilon = cut.eta, cut.epsilon
    lam = aut.valuefn.lam
    vmax = max(abs(t.weight) for t in aut.transitions)
    n = unfolding_depth(vmax, lam, epsilon)
    u_n = tail_bound(vmax, lam, n)
    hi, lo = eta + epsilon - u_n, eta - epsilon + u_n

    start = (aut.initial, 0, ZERO)
    parent: dict[tuple, tuple | None] = {start: None}

    def path_to(key):
        syms = []
        while parent[key] is not None:
            key, sym = parent[key]
            syms.append(sym)
        return syms[::-1]

    def classify(key):
        s = key[2]
        if s >= hi:
            return "accept"
        if s <= lo:
            return "reject"
        raise IsolationViolated(
            f"a length-{n} path has partial value {fmt(s)} inside ({fmt(lo)}, {fmt(hi)})",
            path_to(key),
            s,
        )

    index: dict[object, int] = {}
    order: list[object] = []

    def node(key):
        if key not in index:
            if len(order) >= cap:
                raise CapExceeded(f"unfolding exceeds {cap} nodes")
            index[key] = len(order)
            order.append(key)
        return index[key]

    root = classify(start) if n == 0 else start
    node(root)
    trans = []
    queue = deque([root])
    while queue:
        key = queue.popleft()
        src = index[key]
        if key in ("accept", "reject"):
            w = ONE if key == "accept" else ZERO
            trans.extend(Transition(src, s, src, w) for s in aut.alphabet)
            continue
        q, k, s = key
        for sym in aut.alphabet:
            for t in aut.successors(q, sym):
                nxt = (t.dst, k + 1, s + lam**k * t.weight)
                if nxt not in parent:
                    parent[nxt] = (key, sym)
                if k + 1 == n:
                    nxt = classify(nxt)
                fresh = nxt not in index
                trans.append(Transition(src, sym, node(nxt), ZERO))
                if fresh:
                    queue.append(nxt)
    return WeightedAutomaton(
        name=f"{aut.name}>={fmt(eta)}",
        alphabet=aut.alphabet,
        n_states=len(order),
        initial=0,
        transitions=tuple(trans),
        valuefn=LIMSUP,
        meta={
            "construction": "bounded unfolding",
            "citation": "Thm 4",
            "depth": n,
            "tail": u_n,
            "keys": order,
        },
    )
