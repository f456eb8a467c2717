"""Small named automata with known values, used by tests and the CLI."""
from __future__ import annotations

from fractions import Fraction

from .core import LIMAVG, LassoWord, ValueFunction, WeightedAutomaton, automaton, scale
from .evaluate import value
from .robustness import boolean_disc_gap_witness

AB = ("a", "b")

# bank example: symbols say which bank turns good (g) or bad (b)
BANK_ALPHABET = ("g1g2", "g1b2", "b1g2", "b1b2")
BANK_LAMBDA = Fraction(9, 10)
BANK_REWARDS = {1: (Fraction(8), Fraction(2)), 2: (Fraction(6), Fraction(4))}


def counter(symbol: str = "a", valuefn: ValueFunction = LIMAVG, name: str | None = None) -> WeightedAutomaton:
    """One state; weight 1 on ``symbol``, 0 on the other letter of ``{a, b}``."""
    return automaton(
        name or f"L_{symbol}",
        AB,
        1,
        0,
        [(0, s, 0, 1 if s == symbol else 0) for s in AB],
        valuefn,
    )


def l_a() -> WeightedAutomaton:
    return counter("a")


def l_b() -> WeightedAutomaton:
    return counter("b")


def disc_witness(lam=Fraction(2, 3)) -> WeightedAutomaton:
    return boolean_disc_gap_witness(lam)[0].replace(name="witness")


def equal_blocks(k: int) -> LassoWord:
    """``(a^k b^k)^omega``."""
    return LassoWord((), ("a",) * k + ("b",) * k)


def pointwise_min(auts, word) -> Fraction:
    """``min`` of the languages at ``word`` (no automaton exists for it in general)."""
    return min(value(a, word) for a in auts)


def bank(i: int, lam=BANK_LAMBDA) -> WeightedAutomaton:
    """Bank ``i`` for 100 dollars: state 0 good, 1 bad, starting good.

    The reward of the current state is paid on every step, then the
    ``i``-th component of the symbol picks the next state.
    """
    good, bad = BANK_REWARDS[i]
    trans = []
    for sym in BANK_ALPHABET:
        nxt = 0 if sym[2 * (i - 1)] == "g" else 1
        trans.append((0, sym, nxt, good))
        trans.append((1, sym, nxt, bad))
    return automaton(f"A{i}", BANK_ALPHABET, 2, 0, trans, ValueFunction.disc(lam))


def half_bank(i: int, lam=BANK_LAMBDA) -> WeightedAutomaton:
    """Bank ``i`` for 50 dollars."""
    return scale(bank(i, lam), Fraction(1, 2)).replace(name=f"C{i}")


def split_investment(lam=BANK_LAMBDA) -> WeightedAutomaton:
    from .closure import op_sum

    return op_sum(half_bank(1, lam), half_bank(2, lam)).replace(name="C")


def all_fixtures() -> dict[str, WeightedAutomaton]:
    return {
        "witness": disc_witness(),
        "l_a": l_a(),
        "l_b": l_b(),
        "bank1": bank(1),
        "bank2": bank(2),
        "split": split_investment(),
    }
