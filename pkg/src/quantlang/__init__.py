"""Exact weighted automata for quantitative languages over finite and lasso words."""
from .buchi import buchi_member, complement_nbw, determinize_liminf, is_buchi, threshold_nbw
from .closure import (
    AutomatonClass,
    ClosedUnderOpViolation,
    ClosureVerdict,
    closure_table,
    complement,
    op_max,
    op_min,
    op_sum,
)
from .core import (
    LAST,
    LIMAVG,
    LIMINF,
    LIMSUP,
    MAX,
    SUM,
    SUP,
    AutomatonError,
    FiniteWord,
    LassoWord,
    Rational,
    Transition,
    ValueFunction,
    WeightedAutomaton,
    automaton,
    is_deterministic,
    normalize,
    scale,
    shift,
    validate,
    weight_set,
)
from .cutpoint import (
    IsolationViolated,
    NotIsolated,
    cutpoint_member,
    extract_dbw_limavg,
    extract_nbw_disc,
    limavg_isolation_check,
    limavg_scc_intervals,
)
from .evaluate import EvalResult, build_product, eval_finite, eval_lasso, evaluate, value
from .graphs import disc_policy_iteration, max_cycle_mean, min_cycle_mean
from .oracle import oracle_eval
from .robustness import (
    boolean_disc_gap_witness,
    booleanize_limavg,
    check_cutpoint_stability,
    check_robustness,
    perturb,
    robustness_bound,
)
from .textio import parse_automaton, parse_word, serialize, to_dot

