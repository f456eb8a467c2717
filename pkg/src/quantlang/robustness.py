"""Weight perturbations, robustness bounds and the 0/1 reduction for LimAvg."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    AutomatonError,
    LassoWord,
    Transition,
    ValueFunction,
    WeightedAutomaton,
    as_rational,
    automaton,
    require_valid,
)
from .cutpoint import cutpoint_member
from .evaluate import eval_lasso

PERTURB_DENOMINATOR = 64


@dataclass(frozen=True)
class Perturbation:
    epsilon: Fraction
    seed: int
    deltas: tuple[Fraction, ...]


def perturb(aut: WeightedAutomaton, epsilon, seed: int, denominator: int = PERTURB_DENOMINATOR) -> WeightedAutomaton:
    """An epsilon-approximation: each weight moves by ``epsilon * k / denominator``
    with ``|k| <= denominator`` drawn from ``Random(seed)``."""
    epsilon = as_rational(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    require_valid(aut)
    rng = random.Random(seed)
    deltas = tuple(epsilon * Fraction(rng.randint(-denominator, denominator), denominator) for _ in aut.transitions)
    out = aut.replace(
        transitions=[t._replace(weight=t.weight + d) for t, d in zip(aut.transitions, deltas)],
        meta={"perturbation": Perturbation(epsilon, seed, deltas)},
    )
    return out


def robustness_bound(valuefn: ValueFunction, epsilon) -> Fraction:
    """Largest possible change of any word's value under an epsilon-approximation."""
    epsilon = as_rational(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if valuefn.finite:
        raise AutomatonError(f"no uniform robustness bound for {valuefn.display}")
    if valuefn.tag == "disc":
        return epsilon / (1 - valuefn.lam)
    return epsilon


def skeleton(aut: WeightedAutomaton):
    return aut.alphabet, aut.n_states, aut.initial, frozenset((t.src, t.sym, t.dst) for t in aut.transitions)


def check_robustness(a: WeightedAutomaton, b: WeightedAutomaton, words) -> Fraction:
    """Largest ``|L_A(w) - L_B(w)|`` over the sample."""
    if skeleton(a) != skeleton(b) or a.valuefn != b.valuefn:
        raise AutomatonError("the automata do not share a skeleton")
    worst = Fraction(0)
    for w in words:
        worst = max(worst, abs(eval_lasso(a, w).value - eval_lasso(b, w).value))
    return worst


@dataclass
class StabilityReport:
    """Sampled check only: ``stable`` means no violation was found."""

    stable: bool
    checked: int
    counterexample: LassoWord | None = None
    values: tuple[Fraction, Fraction] | None = None

    def __bool__(self):
        return self.stable


def check_cutpoint_stability(aut: WeightedAutomaton, eta, epsilon, seed: int, words) -> StabilityReport:
    eta = as_rational(eta)
    other = perturb(aut, epsilon, seed)
    count = 0
    for w in words:
        count += 1
        if cutpoint_member(aut, w, eta) != cutpoint_member(other, w, eta):
            vals = (eval_lasso(aut, w).value, eval_lasso(other, w).value)
            return StabilityReport(False, count, w, vals)
    return StabilityReport(True, count)


@dataclass(frozen=True)
class BooleanizationCertificate:
    n_a: int
    states: dict = field(hash=False)  # (q, i) -> new index


def booleanize_limavg(aut: WeightedAutomaton) -> WeightedAutomaton:
    """Equivalent LimAvg automaton with weights 0 and 1 only.

    States are pairs ``(q, i)`` where ``i / n_A`` is the fractional part of
    the weight accumulated so far; a weight 1 is paid out whenever it
    reaches 1.  Pair ``(q, i)`` gets index ``q * n_A + i``.
    """
    require_valid(aut)
    if aut.valuefn.tag != "limavg":
        raise AutomatonError("booleanization applies to LimAvg automata")
    for t in aut.transitions:
        if not 0 <= t.weight <= 1:
            raise AutomatonError(f"weight {t.weight} outside [0, 1]")
    n_a = math.lcm(*(t.weight.denominator for t in aut.transitions))

    def idx(q, i):
        return q * n_a + i

    trans = []
    for t in aut.transitions:
        step = int(t.weight * n_a)
        for i in range(n_a):
            if i + step >= n_a:
                trans.append(Transition(idx(t.src, i), t.sym, idx(t.dst, i + step - n_a), Fraction(1)))
            else:
                trans.append(Transition(idx(t.src, i), t.sym, idx(t.dst, i + step), Fraction(0)))
    cert = BooleanizationCertificate(n_a, {(q, i): idx(q, i) for q in aut.states for i in range(n_a)})
    return aut.replace(
        n_states=aut.n_states * n_a,
        initial=idx(aut.initial, 0),
        transitions=trans,
        meta={"construction": "remainder tracking", "citation": "Thm 6", "certificate": cert},
    )


def boolean_disc_gap_witness(lam):
    """One-state Disc automaton (a-loop ``(1+lam)/2``, b-loop 0) and two words
    with their exact values."""
    lam = as_rational(lam)
    if not 0 < lam < 1:
        raise ValueError("the discount factor must lie in (0, 1)")
    half = (1 + lam) / 2
    aut = automaton("gap", ("a", "b"), 1, 0, [(0, "a", 0, half), (0, "b", 0, 0)], ValueFunction.disc(lam))
    words = [
        (LassoWord(("a",), ("b",)), half),
        (LassoWord((), ("a",)), half / (1 - lam)),
    ]
    return aut, words
