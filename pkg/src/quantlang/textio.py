"""Line-oriented automaton files, word literals and DOT export.

A file looks like::

    automaton counter
    semantics limavg
    alphabet a b
    states 1
    initial 0
    trans 0 a 0 1/1
    trans 0 b 0 0/1

``semantics disc 2/3`` carries the discount factor.  ``#`` starts a comment.
Serialization is canonical, so ``serialize(parse(text)) == text`` for any
canonical ``text``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import (
    AutomatonError,
    FiniteWord,
    LassoWord,
    Transition,
    ValueFunction,
    WeightedAutomaton,
    fmt,
)

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(AutomatonError):
    def __init__(self, message, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def parse_rational(text: str, line: int | None = None) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(f"not a rational {text!r} (write p/q)", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line) from None


def _int(text, line):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"not an integer {text!r}", line) from None


def parse_automaton(text: str) -> WeightedAutomaton:
    header: dict[str, tuple[int, list[str]]] = {}
    trans = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "trans":
            if len(rest) != 4:
                raise ParseError("expected: trans <src> <sym> <dst> <p/q>", lineno)
            src, sym, dst, w = rest
            trans.append((lineno, _int(src, lineno), sym, _int(dst, lineno), parse_rational(w, lineno)))
        elif key in ("automaton", "semantics", "alphabet", "states", "initial"):
            if key in header:
                raise ParseError(f"repeated {key!r}", lineno)
            if not rest:
                raise ParseError(f"{key!r} needs an argument", lineno)
            header[key] = (lineno, rest)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    for key in ("automaton", "semantics", "alphabet", "states", "initial"):
        if key not in header:
            raise ParseError(f"missing {key!r} line")

    lineno, args = header["automaton"]
    if len(args) != 1:
        raise ParseError("automaton names are a single token", lineno)
    name = args[0]
    lineno, args = header["semantics"]
    try:
        if args[0].lower() == "disc":
            if len(args) != 2:
                raise ParseError("expected: semantics disc <p/q>", lineno)
            valuefn = ValueFunction.disc(parse_rational(args[1], lineno))
        else:
            if len(args) != 1:
                raise ParseError("only disc takes a parameter", lineno)
            valuefn = ValueFunction(args[0])
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), lineno) from None
    alphabet = tuple(header["alphabet"][1])
    lineno, args = header["states"]
    n_states = _int(args[0], lineno)
    lineno, args = header["initial"]
    initial = _int(args[0], lineno)
    for lineno, src, sym, dst, _ in trans:
        if sym not in alphabet:
            raise ParseError(f"symbol {sym!r} not in the alphabet", lineno)
        if not (0 <= src < n_states and 0 <= dst < n_states):
            raise ParseError("state index out of range", lineno)
    try:
        return WeightedAutomaton(
            name=name,
            alphabet=alphabet,
            n_states=n_states,
            initial=initial,
            transitions=tuple(Transition(s, a, d, w) for _, s, a, d, w in trans),
            valuefn=valuefn,
        )
    except AutomatonError as exc:
        raise ParseError(str(exc)) from None


def serialize(aut: WeightedAutomaton) -> str:
    name = re.sub(r"\s+", "_", aut.name) or "A"
    lines = [
        f"automaton {name}",
        f"semantics {aut.valuefn}",
        "alphabet " + " ".join(aut.alphabet),
        f"states {aut.n_states}",
        f"initial {aut.initial}",
    ]
    lines += [f"trans {t.src} {t.sym} {t.dst} {fmt(t.weight)}" for t in aut.transitions]
    return "\n".join(lines) + "\n"


def load(path) -> WeightedAutomaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())


def dump(aut: WeightedAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(aut))


def parse_word(text: str, alphabet=None):
    """``"a b | c"`` is the lasso ``ab(c)^omega``; without ``|`` the word is finite."""
    tokens = text.split()
    if alphabet is not None:
        for tok in tokens:
            if tok != "|" and tok not in alphabet:
                raise ParseError(f"symbol {tok!r} not in the alphabet")
    bars = tokens.count("|")
    if bars > 1:
        raise ParseError("at most one '|' is allowed")
    if bars == 1:
        k = tokens.index("|")
        if k == len(tokens) - 1:
            raise ParseError("the period after '|' must be nonempty")
        return LassoWord(tokens[:k], tokens[k + 1:])
    if not tokens:
        raise ParseError("empty word")
    return FiniteWord(tokens)


def format_word(word) -> str:
    return str(word)


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(aut: WeightedAutomaton) -> str:
    """Graphviz digraph; weight-1 edges of a 0/1 LimSup automaton are drawn doubled."""
    buchi = aut.valuefn.tag == "limsup" and all(t.weight in (0, 1) for t in aut.transitions)
    out = [f"digraph {_dot_id(aut.name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for q in aut.states:
        extra = ", penwidth=2, xlabel=\"init\"" if q == aut.initial else ""
        out.append(f'  {q} [label="{q}"{extra}];')
    for t in aut.transitions:
        style = ', color="black:black"' if buchi and t.weight == 1 else ""
        out.append(f"  {t.src} -> {t.dst} [label={_dot_id(f'{t.sym} / {fmt(t.weight)}')}{style}];")
    out.append("}")
    return "\n".join(out) + "\n"
