import json
import shlex
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from qborel import cli
from qborel.algebra import CB, UB, UQ, AlgebraElement, AlgebraMismatch, render, ubn
from qborel.cli import ParseError, evaluate, main, parse, to_sexpr
from qborel.coeff import qpow
from qborel.report import SuiteReport

from conftest import ALGEBRAS, elements

FIXTURES = sorted((Path(__file__).parent / "fixtures").glob("*.txt"))


def M(alg, *k, c=1):
    return AlgebraElement.monomial(alg, k, c)


def run(capsys, cmd):
    rc = main(shlex.split(cmd))
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestParse:
    @pytest.mark.parametrize(
        "src,sexpr",
        [
            ("X*g + 2", "(+ (* X g) 2)"),
            ("g^-1 X^2", "(* g^-1 X^2)"),
            ("q^-1 * X g", "(* (* q^-1 X) g)"),
            ("-X", "(- X)"),
            ("(1+q)X", "(* (+ 1 q) X)"),
            ("2/3*X", "(* (/ 2 3) X)"),
            ("X - g*2", "(- X (* g 2))"),
        ],
    )
    def test_trees(self, src, sexpr):
        assert to_sexpr(parse(src)) == sexpr

    @pytest.mark.parametrize(
        "src,pos,fragment",
        [
            ("X^(1/2)", 4, "integer"),
            ("X q", 2, "coefficient position"),
            ("X / X", 4, "scalar"),
            ("X^2^3", 3, "chained"),
            ("", 0, "empty"),
            ("X +", 3, "end of input"),
            ("(X", 2, "')'"),
            ("X $", 2, "unexpected character"),
        ],
    )
    def test_errors(self, src, pos, fragment):
        with pytest.raises(ParseError) as info:
            parse(src)
        assert info.value.position == pos
        assert fragment in str(info.value)

    def test_q_rejected_outside_quantum(self):
        with pytest.raises(ParseError):
            parse("q*X", UB)


class TestEvaluate:
    def test_examples(self):
        assert evaluate("g*X", UQ) == M(UQ, 1, 1, c=qpow(-1))
        assert evaluate("H*X", UB) == M(UB, 1, 1) + M(UB, 1, 0)
        assert evaluate("x0*x1", ubn(2)) == M(ubn(2), 0, 1) + M(ubn(2), 1, 1)

    def test_scalars(self):
        assert evaluate("(1+q) X / 2", UQ) == M(UQ, 1, 0, c=(1 + qpow(1)) / 2)
        assert evaluate("3", CB) == AlgebraElement.one(CB).scale(3)

    def test_unknown_generator(self):
        with pytest.raises((AlgebraMismatch, ParseError, KeyError)):
            evaluate("H", UQ)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
    @given(data=st.data())
    def test_render_round_trip(self, alg, data):
        a = data.draw(elements(alg, max_terms=4, max_deg=4))
        assert evaluate(render(a), alg) == a


class TestCommands:
    @pytest.mark.parametrize("path", FIXTURES, ids=[p.stem for p in FIXTURES])
    def test_golden(self, capsys, path):
        first, _, expected = path.read_text().partition("\n")
        rc, out, _ = run(capsys, first.removeprefix("$ qborel "))
        assert rc == 0
        assert out == expected

    def test_json_schema(self, capsys):
        rc, out, _ = run(capsys, "mul --json g X")
        assert rc == 0
        assert json.loads(out)["result"] == "q^-1 * X g"

    def test_verify_json(self, capsys):
        rc, out, _ = run(capsys, "verify corollary-2dim --degree 2 --json")
        data = json.loads(out)
        assert rc == 0
        assert data["schema"] == 1 and data["pass"] is True and data["checked"] > 0
        assert all({"id", "anchor", "checked", "pass", "failures"} <= set(r) for r in data["relations"])

    def test_verify_relations_family(self, capsys):
        rc, out, _ = run(capsys, "verify relations --family dual_classical --n 3 --degree 2 --json")
        assert rc == 0 and json.loads(out)["pass"] is True

    def test_kappa_verify(self, capsys):
        rc, out, _ = run(capsys, "kappa --n 2 --verify --degree 2")
        assert rc == 0 and json.loads(out)["pass"] is True

    def test_failure_exit_code(self, capsys, monkeypatch):
        def failing(name, **params):
            rep = SuiteReport(name, params)
            rep.entry("x", "always wrong").record("case", 1, 2)
            return rep

        monkeypatch.setattr(cli, "run_suite", failing)
        rc, out, _ = run(capsys, "verify hopf-axioms")
        assert rc == 1

    @pytest.mark.parametrize(
        "cmd",
        ["verify nonexistent", "mul X^(1/2)", "mul --algebra U q", "classify", "adl --algebra U H", "frobnicate", "d --calculus q --n 1 g"],
    )
    def test_usage_errors(self, capsys, cmd):
        rc, out, err = run(capsys, cmd)
        assert rc == 2
        assert out == ""

    def test_parse_error_reports_offset(self, capsys):
        rc, _, err = run(capsys, "mul X^(1/2)")
        assert "offset 4" in err
