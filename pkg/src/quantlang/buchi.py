"""Boolean-weight views: Büchi slices, complementation, LimInf determinization.

A Büchi automaton here is a LimSup automaton whose weights are 0 or 1; the
weight-1 transitions are the accepting ones and a word is accepted iff its
value is 1.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .core import (
    LIMINF,
    LIMSUP,
    AutomatonError,
    CapExceeded,
    LassoWord,
    WeightedAutomaton,
    explore,
    require_valid,
    weight_set,
)
from .evaluate import eval_lasso

DEFAULT_COMPLEMENT_CAP = 8
DEFAULT_DETERMINIZE_CAP = 8

ONE = Fraction(1)
ZERO = Fraction(0)


def is_buchi(aut: WeightedAutomaton) -> bool:
    return aut.valuefn.tag == "limsup" and all(t.weight in (0, 1) for t in aut.transitions)


def require_buchi(aut: WeightedAutomaton) -> None:
    if not is_buchi(aut):
        raise AutomatonError(f"{aut.name} is not a Büchi automaton (LimSup with weights 0/1)")


def buchi_member(aut: WeightedAutomaton, word: LassoWord) -> bool:
    require_buchi(aut)
    return eval_lasso(aut, word).value == 1


def threshold_nbw(aut: WeightedAutomaton, v) -> WeightedAutomaton:
    """Büchi automaton for ``{w : L(w) >= v}``: edges of weight >= v accept."""
    if aut.valuefn.tag != "limsup":
        raise AutomatonError("threshold slicing expects a LimSup automaton")
    v = Fraction(v)
    return aut.replace(
        name=f"{aut.name}>={v}",
        transitions=[t._replace(weight=ONE if t.weight >= v else ZERO) for t in aut.transitions],
        meta={"construction": "threshold slice", "threshold": v},
    )


def _tight_rankings(states, rank, bounds=None):
    """Level rankings on ``states`` with values in ``0..rank`` using every odd value below ``rank``.

    ``rank`` is odd; ``bounds`` optionally caps each state's value.
    """
    odds = set(range(1, rank + 1, 2))
    ranges = []
    for q in states:
        top = rank if bounds is None else min(rank, bounds[q])
        if top < 0:
            return
        ranges.append(range(top + 1))
    for values in itertools.product(*ranges):
        if odds <= set(values):
            yield tuple(zip(states, values))


def complement_nbw(aut: WeightedAutomaton, cap: int = DEFAULT_COMPLEMENT_CAP) -> WeightedAutomaton:
    """Büchi automaton for the complement language.

    Rank-based construction with tight level rankings, working directly on
    accepting transitions: ranks never increase along an edge, and an
    accepting edge may not keep an odd rank.  A subset phase guesses the
    point from which the ranking is tight; the breakpoint set ``O`` tracks
    even-ranked runs and the automaton accepts when it empties.
    """
    require_buchi(aut)
    require_valid(aut)
    if aut.n_states > cap:
        raise CapExceeded(f"complementation capped at {cap} states, got {aut.n_states}")

    def post(states, sym):
        return frozenset(t.dst for q in states for t in aut.successors(q, sym))

    def step(key, sym):
        if key[0] == "dead":
            yield key, ZERO
            return
        if key[0] == "S":
            s2 = post(key[1], sym)
            yield ("S", s2), ZERO
            top = 2 * len(s2) - 1
            for rank in range(1, top + 1, 2):
                for f in _tight_rankings(sorted(s2), rank):
                    yield ("R", s2, frozenset(), f), ONE
            return
        _, s, o, f = key
        fmap = dict(f)
        rank = max(fmap.values())
        bounds: dict[int, int] = {}
        for q in s:
            for t in aut.successors(q, sym):
                b = fmap[q] - 1 if t.weight == 1 and fmap[q] % 2 == 1 else fmap[q]
                bounds[t.dst] = min(bounds.get(t.dst, b), b)
        s2 = frozenset(bounds)
        tracked = s2 if not o else post(o, sym)
        stuck = True
        for f2 in _tight_rankings(sorted(s2), rank, bounds):
            stuck = False
            even = {q for q, r in f2 if r % 2 == 0}
            o2 = frozenset(tracked & even)
            yield ("R", s2, o2, f2), ONE if not o2 else ZERO
        if stuck:
            # no ranking can continue: this guess is refuted, keep the automaton total
            yield ("dead",), ZERO

    return explore(
        f"not({aut.name})",
        aut.alphabet,
        ("S", frozenset([aut.initial])),
        step,
        LIMSUP,
        construction="rank-based complementation",
    )


def determinize_liminf(aut: WeightedAutomaton, cap: int = DEFAULT_DETERMINIZE_CAP) -> WeightedAutomaton:
    """Deterministic LimInf automaton with the same language.

    For each weight ``v`` the co-Büchi slice "some run eventually only sees
    weights >= v" is determinized by a breakpoint construction sharing the
    subset component.  A component resets when its tracked set dies out.
    The emitted weight is the largest ``v_j`` such that no component
    ``1..j`` reset on this step; the slices are nested, so the liminf of that
    signal is the largest accepted threshold.
    """
    if aut.valuefn.tag != "liminf":
        raise AutomatonError("determinize_liminf expects a LimInf automaton")
    require_valid(aut)
    if aut.n_states > cap:
        raise CapExceeded(f"determinization capped at {cap} states, got {aut.n_states}")
    levels = weight_set(aut)
    init = frozenset([aut.initial])

    def step(key, sym):
        s, tracked = key
        s2 = frozenset(t.dst for q in s for t in aut.successors(q, sym))
        out = []
        weight = None
        intact = True
        for v, o in zip(levels, tracked):
            good = frozenset(t.dst for q in o for t in aut.successors(q, sym) if t.weight >= v)
            if good:
                out.append(good)
                if intact:
                    weight = v
            else:
                out.append(s2)
                intact = False
        if weight is None:
            weight = levels[0]
        yield (s2, tuple(out)), weight

    return explore(
        f"det({aut.name})",
        aut.alphabet,
        (init, tuple(init for _ in levels)),
        step,
        LIMINF,
        construction="breakpoint determinization",
    )
