"""Seeded property suites.  Trial ``k`` of suite ``s`` with seed ``S`` draws
everything from ``Random(f"{s}:{S}:{k}")``, so any failure replays alone."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import closure
from .buchi import buchi_member
from .core import INFINITE_TAGS, ValueFunction, automaton, fmt
from .cutpoint import (
    cutpoint_member,
    extract_dbw_limavg,
    extract_nbw_disc,
    limavg_scc_intervals,
)
from .evaluate import eval_lasso, value
from .oracle import oracle_eval
from .randgen import DEFAULT_WEIGHTS, random_automaton, random_finite, random_lasso
from .robustness import check_robustness, perturb, robustness_bound
from .textio import serialize

SUITES = ("closure", "robustness", "oracle", "cutpoint")
DISC_LAMBDAS = (Fraction(1, 2), Fraction(2, 3), Fraction(1, 3))
EPSILONS = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))

POINTWISE = {
    "max": max,
    "min": min,
    "sum": lambda x, y: x + y,
}


@dataclass
class Failure:
    trial: int
    message: str
    inputs: list[str] = field(default_factory=list)
    word: str | None = None
    expected: Fraction | None = None
    actual: Fraction | None = None

    def text(self) -> str:
        out = [f"trial {self.trial}: {self.message}"]
        if self.word is not None:
            out.append(f"  word: {self.word}")
        if self.expected is not None:
            out.append(f"  expected {fmt(self.expected)}, got {fmt(self.actual)}")
        for src in self.inputs:
            out += ["  " + line for line in src.splitlines()]
        return "\n".join(out)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    results: list[bool] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        return [f"TRIAL {k} {'PASS' if r else 'FAIL'}" for k, r in enumerate(self.results)]

    def text(self) -> str:
        head = (
            f"suite {self.suite} seed {self.seed}: {self.trials} trials, "
            f"{len(self.failures)} failures, {self.seconds:.2f}s"
        )
        return "\n".join([head] + [f.text() for f in self.failures] + self.lines())


class TrialFailed(AssertionError):
    def __init__(self, failure: Failure):
        super().__init__(failure.message)
        self.failure = failure


def trial_rng(suite: str, seed: int, k: int) -> random.Random:
    return random.Random(f"{suite}:{seed}:{k}")


def _valuefn(tag: str, rng: random.Random) -> ValueFunction:
    if tag == "disc":
        return ValueFunction.disc(rng.choice(DISC_LAMBDAS))
    return ValueFunction(tag)


def _word(rng, aut, max_len=8):
    if aut.valuefn.finite:
        return random_finite(rng, aut.alphabet)
    return random_lasso(rng, aut.alphabet, max_len)


# --- closure ----------------------------------------------------------------

EXPONENTIAL = {
    ("limsup", True, "min"),
    ("limsup", True, "sum"),
    ("limsup", False, "comp"),
    ("liminf", True, "max"),
    ("liminf", True, "sum"),
    ("liminf", False, "sum"),
}


def closed_cells():
    return sorted(
        ((cls, op) for cls, op, v in closure.closure_cells() if v.closed),
        key=lambda c: (c[0].tag, c[0].deterministic, c[1]),
    )


def cell_shape(cls, op):
    """``(max_states, weights)`` for random operands of a table cell."""
    if (cls.tag, cls.deterministic, op) in EXPONENTIAL:
        return 3, (Fraction(0), Fraction(1))
    return 5, DEFAULT_WEIGHTS


def random_operands(rng, cls, op, n_states=None, weights=None):
    max_states, default_weights = cell_shape(cls, op)
    weights = weights or default_weights
    vf = _valuefn(cls.tag, rng)
    alphabet = ("a", "b", "c")[: rng.randint(1, 3)]
    auts = []
    for name in ("A", "B")[: 1 if op == "comp" else 2]:
        n = n_states or rng.randint(1, max_states)
        auts.append(random_automaton(rng, vf, n, alphabet, weights, cls.deterministic, name=name))
    return auts


def check_cell(rng, cls, op, auts, n_words=20, trial=0):
    """Raise :class:`TrialFailed` unless the pointwise law holds on ``n_words`` words."""
    result = closure.apply_op(op, *auts, deterministic=cls.deterministic)
    if cls.deterministic and not result.deterministic:
        raise TrialFailed(Failure(trial, f"{cls} {op}: result is not deterministic", [serialize(a) for a in auts]))
    for _ in range(n_words):
        w = _word(rng, auts[0])
        vals = [value(a, w) for a in auts]
        expected = 1 - vals[0] if op == "comp" else POINTWISE[op](*vals)
        actual = value(result, w)
        if actual != expected:
            raise TrialFailed(
                Failure(trial, f"{cls} {op}: pointwise law violated", [serialize(a) for a in auts], str(w), expected, actual)
            )
    return result


def closure_trial(k: int, rng: random.Random) -> None:
    cells = closed_cells()
    cls, op = cells[k % len(cells)]
    check_cell(rng, cls, op, random_operands(rng, cls, op), trial=k)


# --- robustness ---------------------------------------------------------------


def robustness_trial(k: int, rng: random.Random) -> None:
    tag = INFINITE_TAGS[k % len(INFINITE_TAGS)]
    vf = _valuefn(tag, rng)
    a = random_automaton(rng, vf, rng.randint(1, 4), deterministic=rng.random() < 0.5)
    eps = rng.choice(EPSILONS)
    seed = rng.randrange(1 << 30)
    b = perturb(a, eps, seed)
    words = [random_lasso(rng) for _ in range(20)]
    observed = check_robustness(a, b, words)
    bound = robustness_bound(vf, eps)
    if observed > bound:
        raise TrialFailed(Failure(k, f"deviation {fmt(observed)} exceeds {fmt(bound)} (seed {seed})", [serialize(a)]))


# --- oracle -------------------------------------------------------------------


def oracle_trial(k: int, rng: random.Random) -> None:
    tag = INFINITE_TAGS[k % len(INFINITE_TAGS)]
    a = random_automaton(rng, _valuefn(tag, rng), rng.randint(1, 4), deterministic=rng.random() < 0.3)
    for _ in range(10):
        w = random_lasso(rng)
        res = eval_lasso(a, w)
        expected = oracle_eval(a, w)
        if res.value != expected:
            raise TrialFailed(Failure(k, "evaluator disagrees with oracle", [serialize(a)], str(w), expected, res.value))
        if res.replay(a.valuefn) != res.value:
            raise TrialFailed(Failure(k, "witness replay differs", [serialize(a)], str(w), res.value, res.replay(a.valuefn)))


# --- cut-point -----------------------------------------------------------------


def isolated_threshold(rng, aut):
    """A threshold outside every reachable SCC interval (or None)."""
    ivs = [iv for iv in limavg_scc_intervals(aut) if iv.reachable]
    points = sorted({iv.m for iv in ivs} | {iv.M for iv in ivs})
    gaps = [points[0] - 1] + [(x + y) / 2 for x, y in zip(points, points[1:])] + [points[-1] + 1]
    gaps = [g for g in gaps if not any(g in iv for iv in ivs)]
    return rng.choice(gaps) if gaps else None


def separated_disc(rng, lam=Fraction(1, 2), n_states=3, alphabet=("a", "b")):
    """Disc automaton whose values fall in ``[0, 1/8]`` or ``[1, 9/8]``.

    The initial state has no incoming edges, pays 0 or 1 once, and every
    later weight is 0 or 1/8, so ``eta = 1/2`` is isolated with margin 1/4.
    """
    body = random_automaton(rng, ValueFunction.disc(lam), n_states, alphabet, (Fraction(0), Fraction(1, 8)))
    trans = [(t.src + 1, t.sym, t.dst + 1, t.weight) for t in body.transitions]
    for s in alphabet:
        for dst in rng.sample(range(1, n_states + 1), rng.randint(1, 2)):
            trans.append((0, s, dst, rng.choice((0, 1))))
    return automaton("D", alphabet, n_states + 1, 0, trans, body.valuefn)


def cutpoint_trial(k: int, rng: random.Random) -> None:
    if k % 2 == 0:
        a = random_automaton(rng, ValueFunction("limavg"), rng.randint(1, 4), deterministic=True)
        eta = isolated_threshold(rng, a)
        dbw = extract_dbw_limavg(a, eta)
        for _ in range(20):
            w = random_lasso(rng)
            if buchi_member(dbw, w) != cutpoint_member(a, w, eta):
                raise TrialFailed(Failure(k, f"DBW disagrees at eta {fmt(eta)}", [serialize(a)], str(w)))
    else:
        a = separated_disc(rng, rng.choice((Fraction(1, 2), Fraction(1, 3))))
        eta, eps = Fraction(1, 2), Fraction(1, 4)
        nbw = extract_nbw_disc(a, eta, eps)
        for _ in range(20):
            w = random_lasso(rng)
            if buchi_member(nbw, w) != cutpoint_member(a, w, eta):
                raise TrialFailed(Failure(k, "unfolding disagrees", [serialize(a)], str(w)))


TRIALS = {
    "closure": closure_trial,
    "robustness": robustness_trial,
    "oracle": oracle_trial,
    "cutpoint": cutpoint_trial,
}


def run_trial(suite: str, seed: int, k: int) -> Failure | None:
    try:
        TRIALS[suite](k, trial_rng(suite, seed, k))
    except TrialFailed as exc:
        return exc.failure
    except Exception as exc:  # a crash is a failure too, reported with its cause
        return Failure(k, f"{type(exc).__name__}: {exc}")
    return None


def run_suite(suite: str, trials: int, seed: int = 0, progress=None) -> SuiteReport:
    if suite not in TRIALS:
        raise KeyError(suite)
    report = SuiteReport(suite, seed, trials)
    start = time.perf_counter()
    for k in range(trials):
        failure = run_trial(suite, seed, k)
        report.results.append(failure is None)
        if failure:
            report.failures.append(failure)
        if progress:
            progress(k, failure)
    report.seconds = time.perf_counter() - start
    return report
