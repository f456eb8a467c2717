"""Seeded random automata and words for differential testing."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .core import FiniteWord, LassoWord, Transition, ValueFunction, WeightedAutomaton

DEFAULT_WEIGHTS = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))


def random_automaton(
    rng: random.Random,
    valuefn: ValueFunction,
    n_states: int = 3,
    alphabet=("a", "b"),
    weights=DEFAULT_WEIGHTS,
    deterministic: bool = False,
    max_branch: int = 2,
    name: str = "R",
) -> WeightedAutomaton:
    """Total automaton; nondeterministic ones get 1..max_branch successors per (q, sym)."""
    trans = []
    for q in range(n_states):
        for s in alphabet:
            k = 1 if deterministic else rng.randint(1, max_branch)
            for dst in rng.sample(range(n_states), min(k, n_states)):
                trans.append(Transition(q, s, dst, Fraction(rng.choice(weights))))
    return WeightedAutomaton(name, tuple(alphabet), n_states, 0, tuple(trans), valuefn)


def random_lasso(rng: random.Random, alphabet=("a", "b"), max_len: int = 8) -> LassoWord:
    total = rng.randint(1, max_len)
    period_len = rng.randint(1, total)
    letters = [rng.choice(alphabet) for _ in range(total)]
    return LassoWord(letters[: total - period_len], letters[total - period_len:])


def random_finite(rng: random.Random, alphabet=("a", "b"), max_len: int = 6) -> FiniteWord:
    return FiniteWord([rng.choice(alphabet) for _ in range(rng.randint(1, max_len))])


def all_lassos(alphabet=("a", "b"), max_len: int = 5):
    """Every lasso ``u.v^omega`` with ``|u| + |v| <= max_len``."""
    for total in range(1, max_len + 1):
        for period_len in range(1, total + 1):
            for letters in itertools.product(alphabet, repeat=total):
                yield LassoWord(letters[: total - period_len], letters[total - period_len:])


def all_finite(alphabet=("a", "b"), max_len: int = 4):
    for n in range(1, max_len + 1):
        for letters in itertools.product(alphabet, repeat=n):
            yield FiniteWord(letters)
