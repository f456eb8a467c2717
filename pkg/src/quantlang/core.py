"""Weighted automata, words and value functions over exact rationals.

Every weight, threshold and discount factor is a :class:`fractions.Fraction`;
floats are rejected at construction time so that no rounding can enter the
value path.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

Rational = Fraction

FINITE_TAGS = ("last", "max", "sum")
INFINITE_TAGS = ("sup", "limsup", "liminf", "limavg", "disc")

TAG_NAMES = {
    "last": "Last",
    "max": "Max",
    "sum": "Sum",
    "sup": "Sup",
    "limsup": "LimSup",
    "liminf": "LimInf",
    "limavg": "LimAvg",
    "disc": "Disc",
}


class AutomatonError(ValueError):
    """An automaton is malformed or violates an operation's precondition."""


def as_rational(value) -> Fraction:
    """Convert ints, strings like ``"3/4"`` and Fractions; refuse floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} is not allowed, use a Fraction")
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    return Fraction(value)


def fmt(q: Fraction) -> str:
    """Canonical ``p/q`` text (denominator always written)."""
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ValueFunction:
    tag: str
    lam: Fraction | None = None

    def __post_init__(self):
        tag = self.tag.lower()
        if tag not in TAG_NAMES:
            raise ValueError(f"unknown value function {self.tag!r}")
        object.__setattr__(self, "tag", tag)
        if tag == "disc":
            if self.lam is None:
                raise ValueError("Disc needs a discount factor")
            object.__setattr__(self, "lam", as_rational(self.lam))
        elif self.lam is not None:
            raise ValueError(f"{tag} takes no discount factor")

    @classmethod
    def disc(cls, lam) -> "ValueFunction":
        return cls("disc", as_rational(lam))

    @property
    def finite(self) -> bool:
        return self.tag in FINITE_TAGS

    @property
    def display(self) -> str:
        return TAG_NAMES[self.tag]

    def __str__(self):
        if self.tag == "disc":
            return f"disc {fmt(self.lam)}"
        return self.tag


LAST = ValueFunction("last")
MAX = ValueFunction("max")
SUM = ValueFunction("sum")
SUP = ValueFunction("sup")
LIMSUP = ValueFunction("limsup")
LIMINF = ValueFunction("liminf")
LIMAVG = ValueFunction("limavg")


class Transition(NamedTuple):
    src: int
    sym: str
    dst: int
    weight: Fraction


@dataclass(frozen=True)
class WeightedAutomaton:
    """``A = (Q, q_I, Sigma, delta, gamma)`` with a value-function tag.

    States are ``0 .. n_states-1``.  Transitions are stored as a canonical
    sorted tuple of weighted quadruples; exact duplicates are dropped, but two
    quadruples differing only in weight are both kept (the sup over runs picks
    the larger one).  ``meta`` carries provenance and never takes part in
    equality.
    """

    name: str
    alphabet: tuple[str, ...]
    n_states: int
    initial: int
    transitions: tuple[Transition, ...]
    valuefn: ValueFunction
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise AutomatonError("empty alphabet")
        if len(set(alphabet)) != len(alphabet):
            raise AutomatonError("repeated alphabet symbol")
        for sym in alphabet:
            if not sym or any(c.isspace() for c in sym) or sym == "|" or sym.startswith("#"):
                raise AutomatonError(f"bad symbol {sym!r}")
        if self.n_states < 1:
            raise AutomatonError("an automaton needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise AutomatonError(f"initial state {self.initial} out of range")
        order = {s: i for i, s in enumerate(alphabet)}
        trans = set()
        for t in self.transitions:
            src, sym, dst, w = t
            if sym not in order:
                raise AutomatonError(f"symbol {sym!r} not in alphabet")
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise AutomatonError(f"transition {t!r} uses an unknown state")
            trans.add(Transition(int(src), sym, int(dst), as_rational(w)))
        canon = tuple(sorted(trans, key=lambda t: (t.src, order[t.sym], t.dst, t.weight)))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", canon)

    @property
    def states(self) -> range:
        return range(self.n_states)

    @cached_property
    def out(self) -> dict[tuple[int, str], tuple[Transition, ...]]:
        table = defaultdict(list)
        for t in self.transitions:
            table[t.src, t.sym].append(t)
        return {k: tuple(v) for k, v in table.items()}

    def successors(self, q: int, sym: str) -> tuple[Transition, ...]:
        return self.out.get((q, sym), ())

    @cached_property
    def missing(self) -> tuple[tuple[int, str], ...]:
        return tuple((q, s) for q in self.states for s in self.alphabet if (q, s) not in self.out)

    @cached_property
    def deterministic(self) -> bool:
        return not self.missing and all(len(v) == 1 for v in self.out.values())

    def replace(self, **changes) -> "WeightedAutomaton":
        fields = dict(
            name=self.name,
            alphabet=self.alphabet,
            n_states=self.n_states,
            initial=self.initial,
            transitions=self.transitions,
            valuefn=self.valuefn,
            meta=dict(self.meta),
        )
        fields.update(changes)
        return WeightedAutomaton(**fields)

    def map_weights(self, fn) -> "WeightedAutomaton":
        return self.replace(transitions=[t._replace(weight=fn(t.weight)) for t in self.transitions])

    def __str__(self):
        return f"{self.name} ({self.valuefn.display}, {self.n_states} states, {len(self.transitions)} transitions)"


def automaton(name, alphabet, n_states, initial, transitions, valuefn, **meta) -> WeightedAutomaton:
    """Shorthand constructor accepting plain tuples ``(src, sym, dst, weight)``."""
    return WeightedAutomaton(
        name=name,
        alphabet=tuple(alphabet),
        n_states=n_states,
        initial=initial,
        transitions=tuple(Transition(s, a, d, as_rational(w)) for s, a, d, w in transitions),
        valuefn=valuefn,
        meta=meta,
    )


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word ``prefix . period^omega``."""

    prefix: tuple[str, ...]
    period: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("the period of a lasso word must be nonempty")

    def __len__(self):
        return len(self.prefix) + len(self.period)

    def symbol(self, i: int) -> str:
        p = len(self.prefix)
        return self.prefix[i] if i < p else self.period[i - p]

    def next_position(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def unroll(self, n: int) -> tuple[str, ...]:
        """First ``n`` letters of the infinite word."""
        out, i = [], 0
        for _ in range(n):
            out.append(self.symbol(i))
            i = self.next_position(i)
        return tuple(out)

    def __str__(self):
        return " ".join(self.prefix + ("|",) + self.period)


@dataclass(frozen=True)
class FiniteWord:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("finite words must be nonempty")

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return " ".join(self.symbols)


@dataclass
class ValidationReport:
    missing: list[tuple[int, str]]
    deterministic: bool
    lambda_violation: str | None
    unreachable: list[int]

    @property
    def ok(self) -> bool:
        return not self.missing and self.lambda_violation is None

    def lines(self) -> list[str]:
        out = [f"missing transition for state {q} on {s!r}" for q, s in self.missing]
        if self.lambda_violation:
            out.append(self.lambda_violation)
        out.append("deterministic" if self.deterministic else "nondeterministic")
        if self.unreachable:
            out.append("unreachable states: " + " ".join(map(str, self.unreachable)))
        return out


def reachable_states(aut: WeightedAutomaton) -> list[int]:
    seen = {aut.initial}
    stack = [aut.initial]
    while stack:
        q = stack.pop()
        for sym in aut.alphabet:
            for t in aut.successors(q, sym):
                if t.dst not in seen:
                    seen.add(t.dst)
                    stack.append(t.dst)
    return sorted(seen)


def validate(aut: WeightedAutomaton) -> ValidationReport:
    lam_msg = None
    if aut.valuefn.tag == "disc" and not 0 < aut.valuefn.lam < 1:
        lam_msg = f"discount factor {fmt(aut.valuefn.lam)} outside (0, 1)"
    reach = set(reachable_states(aut))
    return ValidationReport(
        missing=list(aut.missing),
        deterministic=aut.deterministic,
        lambda_violation=lam_msg,
        unreachable=[q for q in aut.states if q not in reach],
    )


def require_valid(aut: WeightedAutomaton) -> None:
    report = validate(aut)
    if not report.ok:
        raise AutomatonError(f"invalid automaton {aut.name}: " + "; ".join(report.lines()[:3]))


def is_deterministic(aut: WeightedAutomaton) -> bool:
    if aut.missing:
        raise AutomatonError(f"automaton {aut.name} is not total")
    return aut.deterministic


def weight_set(aut: WeightedAutomaton) -> list[Fraction]:
    return sorted({t.weight for t in aut.transitions})


def normalize(aut: WeightedAutomaton) -> WeightedAutomaton:
    """Keep only the heaviest of several weights on the same ``(q, sym, q')``."""
    best: dict[tuple[int, str, int], Fraction] = {}
    for t in aut.transitions:
        key = (t.src, t.sym, t.dst)
        if key not in best or t.weight > best[key]:
            best[key] = t.weight
    return aut.replace(transitions=[Transition(*k, w) for k, w in best.items()])


def shift(aut: WeightedAutomaton, c) -> WeightedAutomaton:
    """Automaton for ``c + L``.

    Sum and Disc count the first weight exactly once, so only a fresh copy of
    the initial state gets ``c`` added to its outgoing weights; every other
    class adds ``c`` to all weights.
    """
    c = as_rational(c)
    require_valid(aut)
    if aut.valuefn.tag not in ("sum", "disc"):
        return aut.map_weights(lambda w: w + c)
    fresh = aut.n_states
    copies = [
        Transition(fresh, t.sym, t.dst, t.weight + c)
        for t in aut.transitions
        if t.src == aut.initial
    ]
    return aut.replace(
        n_states=aut.n_states + 1,
        initial=fresh,
        transitions=aut.transitions + tuple(copies),
    )


def scale(aut: WeightedAutomaton, c) -> WeightedAutomaton:
    c = as_rational(c)
    if c < 0:
        raise ValueError("scale factor must be nonnegative")
    require_valid(aut)
    return aut.map_weights(lambda w: w * c)


def negate(aut: WeightedAutomaton) -> WeightedAutomaton:
    return aut.map_weights(lambda w: -w)


class CapExceeded(AutomatonError):
    """A construction exceeded its configured state budget."""


def explore(name, alphabet, start, step, valuefn, max_states=None, **meta) -> WeightedAutomaton:
    """Build the reachable part of an automaton given by a successor function.

    ``step(key, sym)`` yields ``(key', weight)`` pairs; keys are numbered in
    breadth-first discovery order, ``start`` becoming state 0.
    """
    index = {start: 0}
    order = [start]
    trans = []
    k = 0
    while k < len(order):
        key = order[k]
        for sym in alphabet:
            for nxt, w in step(key, sym):
                j = index.get(nxt)
                if j is None:
                    j = index[nxt] = len(order)
                    order.append(nxt)
                    if max_states is not None and len(order) > max_states:
                        raise CapExceeded(f"{name}: more than {max_states} states")
                trans.append(Transition(k, sym, j, w))
        k += 1
    meta.setdefault("keys", order)
    return WeightedAutomaton(
        name=name,
        alphabet=tuple(alphabet),
        n_states=len(order),
        initial=0,
        transitions=tuple(trans),
        valuefn=valuefn,
        meta=meta,
    )
