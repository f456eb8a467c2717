import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantlang.core import INFINITE_TAGS, LIMAVG, LIMSUP, SUM, AutomatonError, LassoWord, ValueFunction
from quantlang.evaluate import value
from quantlang.randgen import all_lassos, random_automaton, random_lasso
from quantlang.robustness import (
    boolean_disc_gap_witness,
    booleanize_limavg,
    check_cutpoint_stability,
    check_robustness,
    perturb,
    robustness_bound,
)
from quantlang.suites import isolated_threshold
from quantlang.textio import serialize
from tests.helpers import disc, one_state
from tests.strategies import automata

SHORT = list(all_lassos(max_len=4))


def test_zero_perturbation_is_identity(a_counter):
    assert serialize(perturb(a_counter, 0, 3)) == serialize(a_counter)


@given(automata(), st.sampled_from([F(1, 10), F(1, 3), F(1)]), st.integers(0, 10**6))
def test_perturb_stays_within_epsilon(a, eps, seed):
    b = perturb(a, eps, seed)
    assert len(b.transitions) == len(a.transitions)
    for s, t in zip(a.transitions, b.transitions):
        assert (s.src, s.sym, s.dst) == (t.src, t.sym, t.dst)
        assert abs(s.weight - t.weight) <= eps


def test_perturb_is_reproducible(a_counter):
    assert serialize(perturb(a_counter, F(1, 4), 11)) == serialize(perturb(a_counter, F(1, 4), 11))
    assert perturb(a_counter, F(1, 4), 11).meta["perturbation"].seed == 11


def test_perturb_rejects_negative_epsilon(a_counter):
    with pytest.raises(ValueError):
        perturb(a_counter, -1, 0)


def test_bounds():
    assert robustness_bound(LIMAVG, F(1, 10)) == F(1, 10)
    assert robustness_bound(disc(F(1, 2)), F(1, 10)) == F(1, 5)
    assert robustness_bound(LIMSUP, 0) == 0
    with pytest.raises(AutomatonError):
        robustness_bound(SUM, F(1, 10))


def test_self_deviation_is_zero(a_counter):
    assert check_robustness(a_counter, a_counter, SHORT) == 0


def test_skeleton_mismatch_rejected(a_counter):
    with pytest.raises(AutomatonError):
        check_robustness(a_counter, one_state(LIMAVG, a=1), SHORT)


@pytest.mark.parametrize("tag", INFINITE_TAGS)
@settings(max_examples=25)
@given(seed=st.integers(0, 10**6))
def test_deviation_within_bound(tag, seed):
    rng = random.Random(seed)
    vf = ValueFunction.disc(rng.choice([F(1, 2), F(2, 3)])) if tag == "disc" else ValueFunction(tag)
    a = random_automaton(rng, vf, rng.randint(1, 3), deterministic=rng.random() < 0.5)
    eps = F(1, 4)
    b = perturb(a, eps, rng.randrange(1000))
    assert check_robustness(a, b, [random_lasso(rng) for _ in range(15)]) <= robustness_bound(vf, eps)


def test_disc_bound_is_attained():
    lam, eps = F(1, 2), F(1, 8)
    a = one_state(disc(lam), a=F(1, 2))
    b = a.map_weights(lambda w: w + eps)
    assert check_robustness(a, b, [LassoWord((), ("a",))]) == robustness_bound(a.valuefn, eps)


def test_stability_isolated(a_counter):
    # values lie in [0, 1]; eta = 2 keeps margin 1 > eps
    assert check_cutpoint_stability(a_counter, 2, F(1, 2), 0, SHORT)
    assert check_cutpoint_stability(a_counter, F(1, 2), 0, 0, SHORT)


def test_stability_counterexample():
    a = one_state(LIMAVG, a=F(1, 2), b=F(1, 2))
    for seed in range(20):
        report = check_cutpoint_stability(a, F(1, 2), F(1, 4), seed, SHORT)
        if not report:
            x, y = report.values
            assert (x >= F(1, 2)) != (y >= F(1, 2))
            assert report.counterexample is not None
            return
    pytest.fail("no seed moved a weight below the threshold")


@settings(max_examples=30)
@given(automata(tags=("limavg",), deterministic=True), st.integers(0, 10**6))
def test_stability_with_margin(a, seed):
    rng = random.Random(seed)
    eta = isolated_threshold(rng, a)
    from quantlang.cutpoint import limavg_isolation_check

    margin = limavg_isolation_check(a, eta).margin
    words = [random_lasso(rng) for _ in range(20)]
    assert check_cutpoint_stability(a, eta, margin / 2, seed, words)


def test_booleanize_integral_is_isomorphic(a_counter):
    b = booleanize_limavg(a_counter)
    assert b.meta["certificate"].n_a == 1
    assert serialize(b.replace(meta={})) == serialize(a_counter)


def test_booleanize_thirds():
    a = one_state(LIMAVG, a=F(2, 3), b=F(1, 3))
    b = booleanize_limavg(a)
    assert b.meta["certificate"].n_a == 3 and b.n_states == 3
    assert value(b, LassoWord((), ("a", "b"))) == F(1, 2)
    assert {t.weight for t in b.transitions} <= {0, 1}


@settings(max_examples=40)
@given(automata(tags=("limavg",), weights=(F(0), F(1, 4), F(1, 2), F(3, 4), F(1)), max_states=3))
def test_booleanize_preserves_values(a):
    b = booleanize_limavg(a)
    n_a = b.meta["certificate"].n_a
    assert b.n_states == a.n_states * n_a
    assert {t.weight for t in b.transitions} <= {0, 1}
    assert b.deterministic == a.deterministic
    for w in SHORT[:40]:
        assert value(b, w) == value(a, w)


@settings(max_examples=30)
@given(automata(tags=("limavg",), deterministic=True, weights=(F(0), F(1, 3), F(1, 2), F(1))),
       st.lists(st.sampled_from("ab"), min_size=1, max_size=12))
def test_booleanize_prefix_drift(a, word):
    # average weight of a length-n prefix moves by less than 1/n
    b = booleanize_limavg(a)
    qa, qb, sa, sb = a.initial, b.initial, F(0), F(0)
    for n, s in enumerate(word, 1):
        (ta,), (tb,) = a.successors(qa, s), b.successors(qb, s)
        qa, qb, sa, sb = ta.dst, tb.dst, sa + ta.weight, sb + tb.weight
        assert abs(sa / n - sb / n) < F(1, n)


def test_booleanize_rejects_bad_input(a_counter):
    with pytest.raises(AutomatonError):
        booleanize_limavg(one_state(LIMAVG, a=2))
    with pytest.raises(AutomatonError):
        booleanize_limavg(one_state(LIMSUP, a=1))


def test_gap_witness():
    aut, words = boolean_disc_gap_witness(F(2, 3))
    assert [v for _, v in words] == [F(5, 6), F(5, 2)]
    for w, v in words:
        assert value(aut, w) == v
    # a 0/1 Disc automaton has all values within [0, 1/(1 - lam)]
    assert 1 / (1 - aut.valuefn.lam) == 3
    with pytest.raises(ValueError):
        boolean_disc_gap_witness(1)
