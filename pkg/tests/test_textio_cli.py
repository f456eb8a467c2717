import re
from fractions import Fraction as F
from pathlib import Path

import pytest

from quantlang.buchi import buchi_member
from quantlang.cli import main
from quantlang.core import LIMAVG, SUM, FiniteWord, LassoWord
from quantlang.evaluate import value
from quantlang.fixtures import all_fixtures, bank, counter, split_investment
from quantlang.randgen import all_lassos, random_automaton
from quantlang.textio import ParseError, load, parse_automaton, parse_rational, parse_word, serialize, to_dot
from tests.helpers import disc, one_state

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FILES = sorted(FIXTURES.glob("*.qa"))
SHORT = list(all_lassos(max_len=4))


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    text = path.read_text(encoding="utf-8")
    aut = parse_automaton(text)
    assert serialize(aut) == text
    assert serialize(parse_automaton(serialize(aut))) == text


@pytest.mark.parametrize("name", sorted(all_fixtures()))
def test_fixture_files_are_current(name):
    assert (FIXTURES / f"{name}.qa").read_text(encoding="utf-8") == serialize(all_fixtures()[name])


def test_count_a_file():
    assert load(FIXTURES / "count_a.qa") == counter("a", SUM, "count_a")


def test_bank_values():
    gg = LassoWord((), ("g1g2",))
    assert value(bank(1), gg) == 80
    assert value(bank(2), gg) == 60
    assert value(split_investment(), gg) == 70
    bb = LassoWord((), ("b1b2",))
    # the first step pays the good reward, then every step the bad one
    assert value(bank(1), bb) == 8 + F(9, 10) * 2 * 10


def test_canonical_order_and_integers():
    text = "automaton x\nsemantics sum\nalphabet a b\nstates 1\ninitial 0\ntrans 0 b 0 2\ntrans 0 a 0 -1/2  # c\n"
    out = serialize(parse_automaton(text))
    assert out.splitlines()[-2:] == ["trans 0 a 0 -1/2", "trans 0 b 0 2/1"]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "automaton x\nsemantics sum\nalphabet a\nstates 1\ninitial 0\ntrans 0 a 0 0.5\n",
        "automaton x\nsemantics sum\nalphabet a\nstates 1\ninitial 0\ntrans 0 a 0 1/0\n",
        "automaton x\nsemantics sum\nalphabet a\nstates 1\ninitial 0\ntrans 0 b 0 1\n",
        "automaton x\nsemantics sum\nalphabet a\nstates 1\ninitial 0\ntrans 0 a 3 1\n",
        "automaton x\nsemantics bogus\nalphabet a\nstates 1\ninitial 0\n",
        "automaton x\nsemantics disc\nalphabet a\nstates 1\ninitial 0\n",
        "automaton x\nautomaton y\n",
        "frobnicate\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_automaton(text)


def test_bad_discount_parses_but_fails_validation(capsys, tmp_path):
    path = tmp_path / "d.qa"
    path.write_text("automaton x\nsemantics disc 3/2\nalphabet a\nstates 1\ninitial 0\ntrans 0 a 0 1\n")
    assert not load(path).valuefn.lam < 1
    code, out, _ = run(capsys, "validate", path)
    assert code == 4 and "3/2" in out
    assert run(capsys, "eval", path, "--word", "| a")[0] == 4


def test_parse_error_line_number():
    with pytest.raises(ParseError) as info:
        parse_automaton("automaton x\nsemantics sum\nalphabet a\nstates 1\ninitial 0\ntrans 0 a 0 x\n")
    assert info.value.line == 6


def test_rationals():
    assert parse_rational("-3/6") == F(-1, 2)
    assert parse_rational("4") == 4
    for bad in ("1.5", "1/-2", "a", "1e3"):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_word_literals():
    assert parse_word("a b | c") == LassoWord(("a", "b"), ("c",))
    assert parse_word("| a b") == LassoWord((), ("a", "b"))
    assert parse_word("a a b") == FiniteWord(("a", "a", "b"))
    for bad in ("a |", "| a | b", "", "z"):
        with pytest.raises(ParseError):
            parse_word(bad, ("a", "b"))


DOT_EDGE = re.compile(r'^  \d+ -> \d+ \[label="[^"]* / -?\d+/\d+"(, color="black:black")?\];$')
DOT_NODE = re.compile(r'^  \d+ \[label="\d+"(, penwidth=2, xlabel="init")?\];$')


def _check_dot(text):
    lines = text.splitlines()
    assert re.match(r'^digraph "[^"]*" \{$', lines[0]) and lines[-1] == "}"
    body = lines[3:-1]
    assert all(DOT_EDGE.match(x) or DOT_NODE.match(x) for x in body)
    return sum(1 for x in body if "->" in x), sum(1 for x in body if "->" not in x)


def test_dot_single_state():
    edges, nodes = _check_dot(to_dot(counter("a")))
    assert (edges, nodes) == (2, 1)


@pytest.mark.parametrize("seed", range(5))
def test_dot_edge_count(seed):
    import random

    a = random_automaton(random.Random(seed), LIMAVG, 4)
    edges, nodes = _check_dot(to_dot(a))
    assert edges == len(a.transitions) and nodes == a.n_states


def test_dot_doubles_buchi_edges():
    from quantlang.core import LIMSUP

    text = to_dot(one_state(LIMSUP, a=1, b=0))
    assert text.count("black:black") == 1


# --- command line -------------------------------------------------------------


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "eval", FIXTURES / "witness.qa", "--word", "| a")
    assert code == 0 and out.splitlines()[0] == "5/2"
    code, out, _ = run(capsys, "eval", FIXTURES / "l_a.qa", "--word", "| a b")
    assert out.splitlines()[0] == "1/2"
    code, out, _ = run(capsys, "eval", FIXTURES / "count_a.qa", "--word", "a a b")
    assert code == 0 and out.splitlines()[0] == "2"


def test_eval_errors(capsys, tmp_path):
    assert run(capsys, "eval", FIXTURES / "l_a.qa", "--word", "a b")[0] == 4
    assert run(capsys, "eval", FIXTURES / "l_a.qa", "--word", "| z")[0] == 3
    assert run(capsys, "eval", tmp_path / "missing.qa", "--word", "| a")[0] == 3
    bad = tmp_path / "bad.qa"
    bad.write_text("automaton x\n")
    assert run(capsys, "eval", bad, "--word", "| a")[0] == 3
    assert run(capsys, "eval", FIXTURES / "l_a.qa")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_compose_max_nlsup(capsys, tmp_path):
    import random

    from quantlang.core import LIMSUP

    rng = random.Random(1)
    a, b = (random_automaton(rng, LIMSUP, 3, name=n) for n in "AB")
    pa, pb, out = tmp_path / "a.qa", tmp_path / "b.qa", tmp_path / "m.qa"
    pa.write_text(serialize(a))
    pb.write_text(serialize(b))
    code, stdout, _ = run(capsys, "compose", "--op", "max", pa, pb, "--nondet", "-o", out)
    assert code == 0 and "construction:" in stdout
    m = load(out)
    for w in SHORT:
        assert value(m, w) == max(value(a, w), value(b, w))


def test_compose_min_limavg_not_closed(capsys):
    code, _, err = run(capsys, "compose", "--op", "min", FIXTURES / "l_a.qa", FIXTURES / "l_b.qa")
    assert code == 2 and "Thm 17" in err


def test_compose_sum_limavg_not_closed(capsys):
    code, _, err = run(capsys, "compose", "--op", "sum", FIXTURES / "l_a.qa", FIXTURES / "l_b.qa")
    assert code == 2 and "Thm 29" in err


def test_double_complement_ddisc(capsys, tmp_path):
    once, twice = tmp_path / "c1.qa", tmp_path / "c2.qa"
    assert run(capsys, "complement", FIXTURES / "witness.qa", "-o", once)[0] == 0
    assert run(capsys, "complement", once, "-o", twice)[0] == 0
    assert twice.read_text() == (FIXTURES / "witness.qa").read_text()


def test_shift_scale(capsys, tmp_path):
    out = tmp_path / "s.qa"
    assert run(capsys, "scale", FIXTURES / "l_a.qa", "--by", "3/2", "-o", out)[0] == 0
    assert value(load(out), LassoWord((), ("a",))) == F(3, 2)
    assert run(capsys, "shift", out, "--by", "-1", "-o", out)[0] == 0
    assert value(load(out), LassoWord((), ("a",))) == F(1, 2)
    assert run(capsys, "scale", FIXTURES / "l_a.qa", "--by", "-1")[0] == 4
    assert run(capsys, "scale", FIXTURES / "l_a.qa", "--by", "0.5")[0] == 1


def test_determinize_and_booleanize(capsys, tmp_path):
    from quantlang.core import LIMINF

    src = tmp_path / "inf.qa"
    src.write_text(serialize(counter("a", LIMINF)))
    out = tmp_path / "d.qa"
    assert run(capsys, "determinize", src, "-o", out)[0] == 0
    assert load(out).deterministic
    assert run(capsys, "determinize", FIXTURES / "l_a.qa")[0] == 4
    assert run(capsys, "booleanize", FIXTURES / "l_a.qa", "-o", out)[0] == 0
    assert run(capsys, "booleanize", FIXTURES / "bank1.qa")[0] == 4


def test_cutpoint_and_member(capsys, tmp_path):
    out = tmp_path / "dbw.qa"
    assert run(capsys, "cutpoint", FIXTURES / "l_a.qa", "--eta", "2", "-o", out)[0] == 0
    dbw = load(out)
    assert dbw.valuefn.tag == "limsup" and {t.weight for t in dbw.transitions} <= {0, 1}
    assert not any(buchi_member(dbw, w) for w in SHORT)
    code, _, err = run(capsys, "cutpoint", FIXTURES / "l_a.qa", "--eta", "1/2")
    assert code == 4 and err
    assert run(capsys, "cutpoint", FIXTURES / "witness.qa", "--eta", "3")[0] == 4
    assert run(capsys, "cutpoint", FIXTURES / "witness.qa", "--eta", "3", "--epsilon", "1/4", "-o", out)[0] == 0
    code, out_text, _ = run(capsys, "member", out, "--word", "| a")
    assert code == 0 and out_text.strip() == "false"
    assert run(capsys, "cutpoint", FIXTURES / "witness.qa", "--eta", "5/6", "--epsilon", "1/100")[0] == 4


def test_member_agrees_with_eval(capsys, tmp_path):
    src, out = tmp_path / "chain.qa", tmp_path / "dbw.qa"
    from quantlang.core import automaton

    chain = automaton("chain", "ab", 2, 0, [(0, "a", 0, F(1, 2)), (0, "b", 1, 0), (1, "a", 1, 1), (1, "b", 1, 1)], LIMAVG)
    src.write_text(serialize(chain))
    assert run(capsys, "cutpoint", src, "--eta", "3/4", "-o", out)[0] == 0
    for w in SHORT:
        literal = " ".join(w.prefix) + " | " + " ".join(w.period)
        code, stdout, _ = run(capsys, "member", out, "--word", literal)
        assert code == 0
        assert (stdout.strip() == "true") == (value(chain, w) >= F(3, 4))


def test_validate_and_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", FIXTURES / "bank1.qa")
    assert code == 0 and out
    partial = tmp_path / "p.qa"
    partial.write_text("automaton p\nsemantics sum\nalphabet a b\nstates 1\ninitial 0\ntrans 0 a 0 1\n")
    assert run(capsys, "validate", partial)[0] == 4
    code, out, _ = run(capsys, "dot", FIXTURES / "l_a.qa")
    assert code == 0 and out == to_dot(load(FIXTURES / "l_a.qa"))
    assert run(capsys, "dot", partial)[0] == 4
    bad = tmp_path / "bad.qa"
    bad.write_text("nonsense\n")
    assert run(capsys, "dot", bad)[0] == 3


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--suite", "oracle", "--trials", "0")
    assert code == 0 and "0 failures" in out and "TRIAL" not in out
    code, out, _ = run(capsys, "check", "--suite", "cutpoint", "--trials", "4", "--seed", "3")
    assert code == 0
    assert [x for x in out.splitlines() if x.startswith("TRIAL")] == [f"TRIAL {k} PASS" for k in range(4)]
    assert run(capsys, "check", "--suite", "nope")[0] == 1
    assert run(capsys, "check", "--suite", "oracle", "--trials", "-1")[0] == 1


def test_check_failure_exit_code(capsys, monkeypatch):
    from quantlang import suites
    from quantlang.suites import Failure, TrialFailed

    def broken(k, rng):
        raise TrialFailed(Failure(k, "injected"))

    monkeypatch.setitem(suites.TRIALS, "oracle", broken)
    code, out, _ = run(capsys, "check", "--suite", "oracle", "--trials", "2")
    assert code == 1 and "TRIAL 1 FAIL" in out and "injected" in out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "quantlang", "eval", str(FIXTURES / "witness.qa"), "--word", "a | b"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "5/6"


def test_disc_fixture_one_state():
    assert load(FIXTURES / "witness.qa").valuefn == disc(F(2, 3))
