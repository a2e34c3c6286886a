from pathlib import Path

import pytest

from uctt.cli import EXHAUSTED, FAIL, OK, USAGE, main
from uctt.corpus import generate
from uctt.syntax import (
    UctSyntaxError, UctTypeError, UnknownSymbol, parse, parse_goal, print_term,
)
from uctt.terms import IMP, PI, SIGMA, logic_op, spine

DEMOS = Path(__file__).resolve().parent.parent / "demos"
NTF = str(DEMOS / "ntf.uctt")
LAWS = str(DEMOS / "laws.uctt")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_ntf_parses_to_three_clauses():
    src = parse(Path(NTF).read_text())
    assert len(src.clauses) == 3


def test_quantifier_abbreviation():
    sig = parse("type a i. type q i -> i -> o.").signature
    g = parse_goal("sigma y\\ pi z\\ q y z", sig)
    assert logic_op(g) is SIGMA
    inner = spine(g)[1][0].body
    assert logic_op(inner) is PI


def test_clause_sugar():
    src = parse("type p, q, r o. p :- q, r.")
    (d,) = src.clauses
    assert logic_op(d) is IMP
    assert d == parse_goal("(q , r) => p", src.signature)
    # the & synonym
    assert parse_goal("q & r", src.signature) == parse_goal("q , r", src.signature)


def test_parse_errors_carry_positions():
    with pytest.raises(UctSyntaxError, match="2:6"):
        parse("type p o.\np :- .\n")
    with pytest.raises(UnknownSymbol, match="2:1"):
        parse("type p o.\nzz.\n")
    with pytest.raises(UctTypeError):
        parse("type p o.\ntype f o -> o.\nf f.\n")


def test_print_parse_round_trip_on_corpus():
    for pair in generate(300, 51):
        sig, _, g = pair.load()
        assert parse_goal(print_term(g), sig) == g


def test_solve_exit_codes(capsys):
    code, out = run(capsys, "solve", NTF, "-g", "f p")
    assert code == OK and out.splitlines()[-1] == "yes."
    code, out = run(capsys, "solve", NTF, "-g", "f (p , p)")
    assert code == FAIL and out.splitlines()[-1] == "no."
    code, out = run(capsys, "solve", NTF, "-g", "f q", "--system", "resy")
    assert code == FAIL


def test_solve_exhausted(tmp_path, capsys):
    f = tmp_path / "loop.uctt"
    f.write_text("type p o. type a i. p :- (sigma x:i\\ (pi y:i\\ p)).\n?- p.\n")
    code, out = run(capsys, "solve", str(f), "--depth", "6")
    assert code == EXHAUSTED and "bounds exhausted" in out


def test_solve_answers_and_trace(tmp_path, capsys):
    f = tmp_path / "q.uctt"
    f.write_text("type a, b i. type q i -> i -> o. q a b. q b b.\n?- q X b.\n")
    code, out = run(capsys, "solve", str(f), "--max-solutions", "2", "--trace")
    assert code == OK
    lines = out.splitlines()
    assert lines[0] == "?- q X b."
    assert "X = a" in lines and "X = b" in lines
    assert any(line.startswith("0  start") for line in lines)


def test_usage_errors(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.uctt")]) == USAGE
    bad = tmp_path / "bad.uctt"
    bad.write_text("type p o.\np :- .\n")
    assert main(["solve", str(bad), "-g", "p"]) == USAGE
    assert main(["solve", NTF]) == USAGE  # no query
    assert main(["solve", NTF, "-g", "f p", "--depth", "0"]) == USAGE
    assert main(["frobnicate"]) == USAGE
    capsys.readouterr()


def test_tk_and_ictt(capsys):
    code, out = run(capsys, "tk", NTF, "-g", "f p")
    assert code == OK and "ifix = top" in out
    code, out = run(capsys, "tk", NTF, "-g", "f q")
    assert code == FAIL and "ifix = bot" in out
    code, out = run(capsys, "ictt", NTF, "-g", "f p")
    assert code == OK and '(ax "[0]' in out
    code, out = run(capsys, "ictt", LAWS, "-g", "(p => q) ; (q => p)")
    assert code == FAIL and "not provable." in out


def test_member(tmp_path, capsys):
    f = tmp_path / "q.uctt"
    f.write_text("type a, b i. type q i -> i -> o. q a a.\n")
    code, out = run(capsys, "member", str(f), "-g", "q Y a", "-s", "Y=a")
    assert code == OK and " in I_s" in out
    code, out = run(capsys, "member", str(f), "-g", "q Y a", "-s", "Y=b")
    assert code == FAIL and "not in" in out
    assert main(["member", str(f), "-g", "q Y a", "-s", "Z=a"]) == USAGE
    assert main(["member", str(f), "-g", "q Y a", "-s", "Ya"]) == USAGE
    capsys.readouterr()


def test_compare(capsys):
    code, out = run(capsys, "compare", LAWS, "--depth", "8", "--fuel", "8")
    assert code == OK
    assert out.splitlines()[-1].endswith("0 disagree, 0 undecided")


def test_compare_corpus_file(tmp_path, capsys):
    from uctt.corpus import CORPUS_HEADER

    pairs = [p for p in generate(40, 52) if not p.clauses]
    f = tmp_path / "corpus.uctt"
    f.write_text(CORPUS_HEADER + "".join(f"?- {p.goal}.\n" for p in pairs))
    code, out = run(capsys, "compare", str(f))
    assert code == OK and " 0 disagree" in out
