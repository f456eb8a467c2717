"""max, min, sum and complement of quantitative languages, per automaton class.

Each operation checks the closure table first and raises
:class:`ClosedUnderOpViolation` for a class that is provably not closed; no
fallback construction is ever attempted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .buchi import complement_nbw, determinize_liminf, threshold_nbw
from .core import (
    LIMSUP,
    TAG_NAMES,
    AutomatonError,
    WeightedAutomaton,
    automaton,
    explore,
    negate,
    require_valid,
    shift,
    weight_set,
)


@dataclass(frozen=True)
class AutomatonClass:
    tag: str
    deterministic: bool

    @property
    def label(self) -> str:
        return ("D" if self.deterministic else "N") + TAG_NAMES[self.tag]

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ClosureVerdict:
    closed: bool
    construction: str
    cost: str
    citation: str


class ClosedUnderOpViolation(AutomatonError):
    def __init__(self, cls: AutomatonClass, op: str, verdict: ClosureVerdict):
        self.cls, self.op, self.verdict = cls, op, verdict
        super().__init__(f"{cls} not closed under {op} ({verdict.citation})")


OPS = ("max", "min", "comp", "sum")

_NO = "not closed"


def _v(construction, cost, citation):
    return ClosureVerdict(construction != _NO, construction, cost, citation)


# (tag, deterministic, op) -> verdict; finite rows first, then infinite rows.
_TABLE: dict[tuple[str, bool, str], ClosureVerdict] = {}


def _row(tag, det_flags, **cells):
    for det in det_flags:
        for op, verdict in cells.items():
            _TABLE[tag, det, op] = verdict


_row("max", (True,),
     max=_v("synchronized product, max weight", "O(n1*n2)", "Thm 8"),
     min=_v("running-maxima product, min weight", "O(n1*m1*n2*m2)", "Thm 9"),
     comp=_v(_NO, "", "Thm 10"),
     sum=_v("running-maxima product, summed weight", "O(n1*m1*n2*m2)", "Thm 11"))
_row("max", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 8"),
     min=_v("running-maxima product, min weight", "O(n1*m1*n2*m2)", "Thm 9"),
     comp=_v(_NO, "", "Thm 10"),
     sum=_v("running-maxima product, summed weight", "O(n1*m1*n2*m2)", "Thm 11"))
_row("last", (True,),
     max=_v("synchronized product, max weight", "O(n1*n2)", "Thm 8"),
     min=_v("synchronized product, min weight", "O(n1*n2)", "Thm 9"),
     comp=_v("negate weights then shift by 1", "O(n)", "Thm 10"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 11"))
_row("last", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 8"),
     min=_v("synchronized product, min weight", "O(n1*n2)", "Thm 9"),
     comp=_v("subset determinization, negate, shift by 1", "O(2^n)", "Thm 10"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 11"))
_row("sum", (True,),
     max=_v(_NO, "", "Thm 8"),
     min=_v(_NO, "", "Thm 9"),
     comp=_v("negate weights then shift by 1", "O(n)", "Thm 10"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 11"))
_row("sum", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 8"),
     min=_v(_NO, "", "Thm 9"),
     comp=_v(_NO, "", "Thm 10"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 11"))

_row("sup", (True,),
     max=_v("synchronized product, max weight", "O(n1*n2)", "Thm 12"),
     min=_v("running-maxima product, min weight", "O(n1*m1*n2*m2)", "Thm 14"),
     comp=_v(_NO, "", "Thm 19"),
     sum=_v("running-maxima product, summed weight", "O(n1*m1*n2*m2)", "Thm 24"))
_row("sup", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 12"),
     min=_v("running-maxima product, min weight", "O(n1*m1*n2*m2)", "Thm 14"),
     comp=_v(_NO, "", "Thm 19"),
     sum=_v("running-maxima product, summed weight", "O(n1*m1*n2*m2)", "Thm 24"))
_row("liminf", (True,),
     max=_v("nondeterministic choice then determinization", "O((m1+m2)*2^(n1+n2))", "Thm 12"),
     min=_v("synchronized product, min weight", "O(n1*n2)", "Thm 15"),
     comp=_v(_NO, "", "Thm 19"),
     sum=_v("product with per-threshold breakpoint sets", "O(n1*n2*2^(m1*m2))", "Thm 27"))
_row("liminf", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 12"),
     min=_v("synchronized product, min weight", "O(n1*n2)", "Thm 15"),
     comp=_v(_NO, "", "Thm 19"),
     sum=_v("determinization then breakpoint product", "O(n1*n2*2^(m1*m2))", "Thm 27"))
_row("limsup", (True,),
     max=_v("synchronized product, max weight", "O(n1*n2)", "Thm 12"),
     min=_v("product of per-threshold switching copies", "O(n1*n2*2^(m1+m2))", "Thm 16"),
     comp=_v(_NO, "", "Thm 19"),
     sum=_v("product with one bit per weight pair", "O(n1*n2*2^(m1*m2))", "Thm 26"))
_row("limsup", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 12"),
     min=_v("guessed threshold with alternating index", "O(n1*n2*(m1+m2))", "Thm 15"),
     comp=_v("threshold slices, Büchi complementation, max, shift by 1", "O(m*2^(n log n))", "Thm 20"),
     sum=_v("guessed weight pair with alternating bit", "O(n1*m1*n2*m2)", "Thm 25"))
_row("limavg", (True,),
     max=_v(_NO, "", "Thm 13"),
     min=_v(_NO, "", "Thm 17"),
     comp=_v(_NO, "", "Thm 22"),
     sum=_v(_NO, "", "Thm 29"))
_row("limavg", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 12"),
     min=_v(_NO, "", "Thm 17"),
     comp=_v(_NO, "", "Thm 23"),
     sum=_v(_NO, "", "Thm 29"))
_row("disc", (True,),
     max=_v(_NO, "", "Thm 13"),
     min=_v(_NO, "", "Thm 18"),
     comp=_v("weight map v -> 1 - lambda - v", "O(n)", "Thm 21"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 28"))
_row("disc", (False,),
     max=_v("initial nondeterministic choice", "O(n1+n2)", "Thm 12"),
     min=_v(_NO, "", "Thm 18"),
     comp=_v(_NO, "", "Thm 23"),
     sum=_v("synchronized product, summed weight", "O(n1*n2)", "Thm 28"))


def closure_table(cls: AutomatonClass, op: str) -> ClosureVerdict:
    if op == "complement":
        op = "comp"
    if op not in OPS:
        raise ValueError(f"unknown operator {op!r}")
    return _TABLE[cls.tag, cls.deterministic, op]


def closure_cells():
    """All ``(class, op, verdict)`` rows of the table."""
    for (tag, det, op), verdict in _TABLE.items():
        yield AutomatonClass(tag, det), op, verdict


def automaton_class(aut: WeightedAutomaton) -> AutomatonClass:
    return AutomatonClass(aut.valuefn.tag, aut.deterministic)


def _target_class(auts, deterministic):
    det = all(a.deterministic for a in auts)
    if deterministic is None:
        deterministic = det
    elif deterministic and not det:
        raise AutomatonError("a deterministic result was requested from nondeterministic inputs")
    return AutomatonClass(auts[0].valuefn.tag, deterministic)


def _check_pair(a1: WeightedAutomaton, a2: WeightedAutomaton):
    require_valid(a1)
    require_valid(a2)
    if set(a1.alphabet) != set(a2.alphabet):
        raise AutomatonError("operands must share an alphabet")
    if a1.valuefn.tag != a2.valuefn.tag:
        raise AutomatonError("operands must share a value function")
    if a1.valuefn != a2.valuefn:
        raise AutomatonError("unequal discount factors")


def _require_closed(cls: AutomatonClass, op: str) -> ClosureVerdict:
    verdict = closure_table(cls, op)
    if not verdict.closed:
        raise ClosedUnderOpViolation(cls, op, verdict)
    return verdict


def _meta(verdict: ClosureVerdict, cls: AutomatonClass, op: str) -> dict:
    return {
        "construction": verdict.construction,
        "cost": verdict.cost,
        "citation": verdict.citation,
        "class": str(cls),
        "op": op,
    }


# --- constructions -------------------------------------------------------


def union(auts, name, valuefn, **meta) -> WeightedAutomaton:
    """Fresh initial state copying every operand's initial transitions."""
    alphabet = auts[0].alphabet

    def step(key, sym):
        if key == ("init",):
            for k, a in enumerate(auts):
                for t in a.successors(a.initial, sym):
                    yield (k, t.dst), t.weight
            return
        k, q = key
        for t in auts[k].successors(q, sym):
            yield (k, t.dst), t.weight

    return explore(name, alphabet, ("init",), step, valuefn, **meta)


def product(a1, a2, combine, name, **meta) -> WeightedAutomaton:
    """Synchronized product; joint weight ``combine(w1, w2)``."""

    def step(key, sym):
        q1, q2 = key
        for t1 in a1.successors(q1, sym):
            for t2 in a2.successors(q2, sym):
                yield (t1.dst, t2.dst), combine(t1.weight, t2.weight)

    return explore(name, a1.alphabet, (a1.initial, a2.initial), step, a1.valuefn, **meta)


def running_max_product(a1, a2, combine, name, **meta) -> WeightedAutomaton:
    """States ``(q1, v1, q2, v2)`` remember the largest weight seen by each
    run; the joint weight is ``combine`` of the updated maxima."""
    start = (a1.initial, weight_set(a1)[0], a2.initial, weight_set(a2)[0])

    def step(key, sym):
        q1, v1, q2, v2 = key
        for t1 in a1.successors(q1, sym):
            n1 = max(v1, t1.weight)
            for t2 in a2.successors(q2, sym):
                n2 = max(v2, t2.weight)
                yield (t1.dst, n1, t2.dst, n2), combine(n1, n2)

    return explore(name, a1.alphabet, start, step, a1.valuefn, **meta)


def _nlsup_min(a1, a2, name, **meta) -> WeightedAutomaton:
    """Guess the value v; toggle j when A_j sees a weight >= v; emit v on toggles."""
    values = sorted(set(weight_set(a1)) | set(weight_set(a2)))
    vmin = values[0]

    def step(key, sym):
        if key == ("init",):
            for t1 in a1.successors(a1.initial, sym):
                for t2 in a2.successors(a2.initial, sym):
                    for v in values:
                        yield (t1.dst, t2.dst, 1, v), Fraction(0)
            return
        q1, q2, j, v = key
        for t1 in a1.successors(q1, sym):
            for t2 in a2.successors(q2, sym):
                w = (t1, t2)[j - 1].weight
                j2 = 3 - j if w >= v else j
                yield (t1.dst, t2.dst, j2, v), (v if j2 != j else vmin)

    return explore(name, a1.alphabet, ("init",), step, LIMSUP, **meta)


def _dlsup_min(a1, a2, name, **meta) -> WeightedAutomaton:
    """One switching bit per threshold; weight = largest threshold whose bit flipped."""
    values = sorted(set(weight_set(a1)) | set(weight_set(a2)))
    vmin = values[0]

    def step(key, sym):
        q1, q2, bits = key
        (t1,) = a1.successors(q1, sym)
        (t2,) = a2.successors(q2, sym)
        seen = (None, t1.weight, t2.weight)
        new = tuple(3 - b if seen[b] >= v else b for b, v in zip(bits, values))
        flipped = [v for b, b2, v in zip(bits, new, values) if b != b2]
        yield (t1.dst, t2.dst, new), max([vmin] + flipped)

    start = (a1.initial, a2.initial, tuple(1 for _ in values))
    return explore(name, a1.alphabet, start, step, LIMSUP, **meta)


def _nlsup_sum(a1, a2, name, **meta) -> WeightedAutomaton:
    """Guess a weight pair (v1, v2); the bit b waits for A_b to take weight v_b."""
    pairs = list(itertools.product(weight_set(a1), weight_set(a2)))
    low = min(v1 + v2 for v1, v2 in pairs)

    def step(key, sym):
        if key == ("init",):
            for t1 in a1.successors(a1.initial, sym):
                for t2 in a2.successors(a2.initial, sym):
                    for v1, v2 in pairs:
                        yield (t1.dst, t2.dst, 1, v1, v2), low
            return
        q1, q2, b, v1, v2 = key
        for t1 in a1.successors(q1, sym):
            for t2 in a2.successors(q2, sym):
                hit = (t1.weight == v1) if b == 1 else (t2.weight == v2)
                b2 = 3 - b if hit else b
                yield (t1.dst, t2.dst, b2, v1, v2), (v1 + v2 if hit else low)

    return explore(name, a1.alphabet, ("init",), step, LIMSUP, **meta)


def _dlsup_sum(a1, a2, name, **meta) -> WeightedAutomaton:
    """One bit per weight pair; weight = largest v1+v2 whose bit changed."""
    pairs = list(itertools.product(weight_set(a1), weight_set(a2)))
    low = min(v1 + v2 for v1, v2 in pairs)

    def step(key, sym):
        q1, q2, bits = key
        (t1,) = a1.successors(q1, sym)
        (t2,) = a2.successors(q2, sym)
        taken = (None, t1.weight, t2.weight)
        new = []
        best = low
        for b, (v1, v2) in zip(bits, pairs):
            if taken[b] == (None, v1, v2)[b]:
                new.append(3 - b)
                best = max(best, v1 + v2)
            else:
                new.append(b)
        yield (t1.dst, t2.dst, tuple(new)), best

    start = (a1.initial, a2.initial, tuple(1 for _ in pairs))
    return explore(name, a1.alphabet, start, step, LIMSUP, **meta)


def _dlinf_sum(a1, a2, name, **meta) -> WeightedAutomaton:
    """Deterministic LimInf sum.

    For a sum level ``s`` the pair condition "eventually A1 stays >= v1 and A2
    stays >= v2" for some ``v1 + v2 >= s`` is tracked by a breakpoint set of
    candidate pairs that have not failed since the last reset.  The emitted
    weight is the largest level ``s_j`` such that no level ``1..j`` reset on
    this step, so its liminf is the largest level whose set eventually stops
    resetting, namely ``L1 + L2``.
    """
    pairs = list(itertools.product(weight_set(a1), weight_set(a2)))
    levels = sorted({v1 + v2 for v1, v2 in pairs})
    candidates = [frozenset(p for p in pairs if sum(p) >= s) for s in levels]

    def step(key, sym):
        q1, q2, tracked = key
        (t1,) = a1.successors(q1, sym)
        (t2,) = a2.successors(q2, sym)
        ok = {p for p in pairs if t1.weight >= p[0] and t2.weight >= p[1]}
        out = []
        weight = levels[0]
        intact = True
        for s, cand, live in zip(levels, candidates, tracked):
            keep = live & ok
            if keep:
                out.append(frozenset(keep))
                if intact:
                    weight = s
            else:
                out.append(cand)
                intact = False
        yield (t1.dst, t2.dst, tuple(out)), weight

    start = (a1.initial, a2.initial, tuple(candidates))
    return explore(name, a1.alphabet, start, step, a1.valuefn, **meta)


def _determinize_last(aut: WeightedAutomaton) -> WeightedAutomaton:
    """Subset construction; the weight is the best weight of the step just taken."""

    def step(key, sym):
        moves = [t for q in key for t in aut.successors(q, sym)]
        yield frozenset(t.dst for t in moves), max(t.weight for t in moves)

    return explore(aut.name, aut.alphabet, frozenset([aut.initial]), step, aut.valuefn)


def _nlsup_complement(aut: WeightedAutomaton, name, **meta) -> WeightedAutomaton:
    values = weight_set(aut)
    top = values[-1]
    pieces = []
    for lower, v in zip(values, values[1:]):
        comp = complement_nbw(threshold_nbw(aut, v))
        pieces.append(comp.map_weights(lambda w, lower=lower: -lower if w == 1 else -top))
    if not pieces:
        neg = automaton(name, aut.alphabet, 1, 0, [(0, s, 0, -top) for s in aut.alphabet], LIMSUP)
    else:
        neg = union(pieces, name, LIMSUP)
    return shift(neg, 1).replace(name=name, meta=meta)


# --- public operators ----------------------------------------------------


def op_max(a1: WeightedAutomaton, a2: WeightedAutomaton, deterministic: bool | None = None) -> WeightedAutomaton:
    """Automaton for ``max(L1, L2)``.

    ``deterministic`` selects the target class; by default it is deterministic
    iff both operands are.  Passing ``False`` treats deterministic operands as
    members of the nondeterministic class.
    """
    _check_pair(a1, a2)
    cls = _target_class((a1, a2), deterministic)
    verdict = _require_closed(cls, "max")
    name = f"max({a1.name},{a2.name})"
    meta = _meta(verdict, cls, "max")
    if not cls.deterministic:
        return union((a1, a2), name, a1.valuefn, **meta)
    if cls.tag == "liminf":
        return determinize_liminf(union((a1, a2), name, a1.valuefn), cap=2 * 8 + 1).replace(name=name, meta=meta)
    return product(a1, a2, max, name, **meta)


def op_min(a1: WeightedAutomaton, a2: WeightedAutomaton, deterministic: bool | None = None) -> WeightedAutomaton:
    _check_pair(a1, a2)
    cls = _target_class((a1, a2), deterministic)
    verdict = _require_closed(cls, "min")
    name = f"min({a1.name},{a2.name})"
    meta = _meta(verdict, cls, "min")
    tag = cls.tag
    if tag in ("max", "sup"):
        return running_max_product(a1, a2, min, name, **meta)
    if tag in ("last", "liminf"):
        return product(a1, a2, min, name, **meta)
    if tag == "limsup":
        if cls.deterministic:
            return _dlsup_min(a1, a2, name, **meta)
        return _nlsup_min(a1, a2, name, **meta)
    raise AssertionError(tag)


def op_sum(a1: WeightedAutomaton, a2: WeightedAutomaton, deterministic: bool | None = None) -> WeightedAutomaton:
    _check_pair(a1, a2)
    cls = _target_class((a1, a2), deterministic)
    verdict = _require_closed(cls, "sum")
    name = f"sum({a1.name},{a2.name})"
    meta = _meta(verdict, cls, "sum")
    tag = cls.tag
    add = lambda x, y: x + y
    if tag in ("max", "sup"):
        return running_max_product(a1, a2, add, name, **meta)
    if tag in ("last", "sum", "disc"):
        return product(a1, a2, add, name, **meta)
    if tag == "limsup":
        if cls.deterministic:
            return _dlsup_sum(a1, a2, name, **meta)
        return _nlsup_sum(a1, a2, name, **meta)
    if tag == "liminf":
        if not a1.deterministic:
            a1 = determinize_liminf(a1)
        if not a2.deterministic:
            a2 = determinize_liminf(a2)
        return _dlinf_sum(a1, a2, name, **meta)
    raise AssertionError(tag)


def complement(aut: WeightedAutomaton, deterministic: bool | None = None) -> WeightedAutomaton:
    """Automaton for ``1 - L``.  Unary results keep the operand's name."""
    require_valid(aut)
    cls = _target_class((aut,), deterministic)
    verdict = _require_closed(cls, "comp")
    meta = _meta(verdict, cls, "comp")
    tag = cls.tag
    if tag == "disc":
        lam = aut.valuefn.lam
        return aut.map_weights(lambda v: 1 - lam - v).replace(meta=meta)
    if tag in ("last", "sum"):
        base = aut if aut.deterministic else _determinize_last(aut)
        return shift(negate(base), 1).replace(meta=meta)
    if tag == "limsup":
        return _nlsup_complement(aut, aut.name, **meta)
    raise AssertionError(tag)


def apply_op(op: str, *auts, deterministic: bool | None = None) -> WeightedAutomaton:
    if op == "max":
        return op_max(*auts, deterministic=deterministic)
    if op == "min":
        return op_min(*auts, deterministic=deterministic)
    if op == "sum":
        return op_sum(*auts, deterministic=deterministic)
    if op in ("comp", "complement"):
        return complement(*auts, deterministic=deterministic)
    raise ValueError(f"unknown operator {op!r}")
