"""Small builders shared by the tests."""
from quantlang.core import ValueFunction, automaton


def one_state(valuefn, **weights):
    return automaton("one", tuple(weights), 1, 0, [(0, s, 0, w) for s, w in weights.items()], valuefn)


def disc(lam):
    return ValueFunction.disc(lam)
