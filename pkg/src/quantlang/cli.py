"""Command-line interface.

Exit codes: 0 ok, 1 usage (or a failing ``check`` suite), 2 class not
closed under the operation, 3 parse or file error, 4 violated precondition
(including failed isolation).
"""
from __future__ import annotations

import argparse
import sys

from . import closure
from .buchi import buchi_member, determinize_liminf
from .core import AutomatonError, LassoWord, require_valid, scale, shift, validate
from .cutpoint import extract_dbw_limavg, extract_nbw_disc
from .evaluate import evaluate
from .robustness import booleanize_limavg
from .suites import SUITES, run_suite
from .textio import ParseError, load, parse_rational, parse_word, serialize, to_dot

EXIT_OK, EXIT_USAGE, EXIT_NOT_CLOSED, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3, 4
# a suite with failures shares the generic nonzero code
EXIT_SUITE_FAILED = EXIT_USAGE


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _rational(text):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(aut, out, note=True):
    text = serialize(aut)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if note and "construction" in aut.meta:
        parts = [aut.meta["construction"]]
        if aut.meta.get("cost"):
            parts.append(aut.meta["cost"])
        if aut.meta.get("citation"):
            parts.append(aut.meta["citation"])
        stream = sys.stdout if out else sys.stderr
        print("construction: " + "; ".join(parts) + f"; {aut.n_states} states", file=stream)


def _word_for(aut, text):
    word = parse_word(text, aut.alphabet)
    if aut.valuefn.finite == isinstance(word, LassoWord):
        kind = "a finite word" if aut.valuefn.finite else "a lasso word (use '|')"
        raise AutomatonError(f"{aut.valuefn.display} automata need {kind}")
    return word


def cmd_eval(args):
    aut = load(args.automaton)
    require_valid(aut)
    res = evaluate(aut, _word_for(aut, args.word))
    print(res.value)
    print(res.describe())


def cmd_compose(args):
    a1, a2 = load(args.left), load(args.right)
    det = False if args.nondet else None
    _emit(closure.apply_op(args.op, a1, a2, deterministic=det), args.output)


def cmd_complement(args):
    aut = load(args.automaton)
    _emit(closure.complement(aut, deterministic=False if args.nondet else None), args.output)


def cmd_shift(args):
    _emit(shift(load(args.automaton), args.by), args.output)


def cmd_scale(args):
    _emit(scale(load(args.automaton), args.by), args.output)


def cmd_determinize(args):
    aut = load(args.automaton)
    if aut.valuefn.tag != "liminf":
        raise AutomatonError("determinize expects a LimInf automaton")
    out = determinize_liminf(aut, cap=args.cap).replace(name=aut.name)
    _emit(out, args.output)


def cmd_booleanize(args):
    _emit(booleanize_limavg(load(args.automaton)), args.output)


def cmd_cutpoint(args):
    aut = load(args.automaton)
    if aut.valuefn.tag == "disc":
        if args.epsilon is None:
            raise AutomatonError("Disc cut-points need --epsilon")
        out = extract_nbw_disc(aut, args.eta, args.epsilon)
    elif aut.valuefn.tag == "limavg":
        out = extract_dbw_limavg(aut, args.eta)
    else:
        raise AutomatonError("cut-point extraction needs a deterministic LimAvg or a Disc automaton")
    _emit(out, args.output)


def cmd_member(args):
    aut = load(args.automaton)
    word = parse_word(args.word, aut.alphabet)
    if not isinstance(word, LassoWord):
        raise AutomatonError("membership needs a lasso word (use '|')")
    print("true" if buchi_member(aut, word) else "false")


def cmd_validate(args):
    report = validate(load(args.automaton))
    print("\n".join(report.lines()))
    if not report.ok:
        return EXIT_PRECONDITION


def cmd_dot(args):
    aut = load(args.automaton)
    require_valid(aut)
    sys.stdout.write(to_dot(aut))


def cmd_check(args):
    if args.trials < 0:
        raise UsageError("--trials must be nonnegative")
    report = run_suite(args.suite, args.trials, args.seed)
    print(report.text())
    return EXIT_OK if report.ok else EXIT_SUITE_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quantlang", description="Exact weighted automata over finite and lasso words.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", help="value of a word")
    s.add_argument("automaton")
    s.add_argument("--word", required=True, help="space-separated symbols; '|' starts the period")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("compose", help="max, min or sum of two automata")
    s.add_argument("--op", required=True, choices=("max", "min", "sum"))
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("-o", "--output")
    s.add_argument("--nondet", action="store_true", help="treat deterministic inputs as nondeterministic")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("complement", help="automaton for 1 - L")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.add_argument("--nondet", action="store_true", help="treat a deterministic input as nondeterministic")
    s.set_defaults(func=cmd_complement)

    for name, func, doc in (("shift", cmd_shift, "c + L"), ("scale", cmd_scale, "c * L, c >= 0")):
        s = sub.add_parser(name, help=doc)
        s.add_argument("automaton")
        s.add_argument("--by", required=True, type=_rational)
        s.add_argument("-o", "--output")
        s.set_defaults(func=func)

    s = sub.add_parser("determinize", help="deterministic LimInf automaton")
    s.add_argument("automaton")
    s.add_argument("--cap", type=int, default=8, help="largest input state count")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_determinize)

    s = sub.add_parser("booleanize", help="0/1 weights for LimAvg automata with weights in [0, 1]")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_booleanize)

    s = sub.add_parser("cutpoint", help="Büchi automaton for L >= eta")
    s.add_argument("automaton")
    s.add_argument("--eta", required=True, type=_rational)
    s.add_argument("--epsilon", type=_rational)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_cutpoint)

    s = sub.add_parser("member", help="Büchi membership of a lasso word")
    s.add_argument("automaton")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("validate", help="totality, determinism and reachability report")
    s.add_argument("automaton")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("dot", help="Graphviz output")
    s.add_argument("automaton")
    s.set_defaults(func=cmd_dot)

    s = sub.add_parser("check", help="run a seeded property suite")
    s.add_argument("--suite", required=True, choices=SUITES)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        return args.func(args) or EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except closure.ClosedUnderOpViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CLOSED
    except (AutomatonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
