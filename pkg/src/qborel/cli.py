"""Command line front end: expression parser, commands and verification runner.

Grammar (``^`` binds tighter than ``*`` and ``/``, which bind tighter than
``+`` and ``-``; juxtaposition is multiplication)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/" | <juxtaposition>) unary)*
    unary  := "-" unary | power
    power  := atom ("^" int)?
    int    := "-"? DIGITS | "(" "-"? DIGITS ")"
    atom   := DIGITS | NAME | "(" expr ")"

Names are ``X g H q x0..x9 p1..p9``.  ``q`` is a scalar and may only appear
in coefficient position: a factor containing ``q`` cannot follow an algebra
generator in a product.  The right operand of ``/`` must be a non-zero scalar.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .algebra import (
    CB,
    UB,
    UQ,
    AlgebraElement,
    AlgebraId,
    AlgebraMismatch,
    antipode,
    cbn,
    coproduct,
    render,
    render_tensor,
    ubn,
)
from .calculus import (
    InvalidDescriptor,
    build,
    d,
    derivation,
    derivation_closed_form,
    derivation_oracle,
)
from .coeff import RatFunc, as_ratfunc, is_zero, qpow, render_scalar
from .duality import CLASSICAL, Q_SELFDUAL, adjoint_coaction_direct, kappa_pairing, pair_any
from .report import SCHEMA
from .suites import SUITES, UnknownSuite, run_suite

__all__ = ["ParseError", "Expr", "parse", "eval_expr", "run_suite", "UnknownSuite", "main"]


class ParseError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at offset {position}: {message}")
        self.position = position
        self.message = message


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


Expr = Union[Num, Sym, Neg, BinOp, Pow]


def _is_scalar(e: Expr) -> bool:
    if isinstance(e, Num):
        return True
    if isinstance(e, Sym):
        return e.name == "q"
    if isinstance(e, Neg):
        return _is_scalar(e.arg)
    if isinstance(e, Pow):
        return _is_scalar(e.base)
    return _is_scalar(e.left) and _is_scalar(e.right)


def _has_q(e: Expr) -> bool:
    if isinstance(e, Sym):
        return e.name == "q"
    if isinstance(e, Num):
        return False
    if isinstance(e, Neg):
        return _has_q(e.arg)
    if isinstance(e, Pow):
        return _has_q(e.base)
    return _has_q(e.left) or _has_q(e.right)


def to_sexpr(e: Expr) -> str:
    """Debug form, e.g. ``(+ (* X g) 2)``."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Neg):
        return f"(- {to_sexpr(e.arg)})"
    if isinstance(e, Pow):
        return f"{to_sexpr(e.base)}^{e.exp}"
    return f"({e.op} {to_sexpr(e.left)} {to_sexpr(e.right)})"


# ---------------------------------------------------------------------------
# tokenizer and parser

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[xp]\d|[XgHq])|(?P<op>[-+*/^()]))")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            at = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(at, f"unexpected character {src[at]!r}")
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, algebra: Optional[AlgebraId]):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.algebra = algebra

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        t = self.take()
        if t[1] != text:
            raise ParseError(t[2], f"expected {text!r}, found {t[1] or 'end of input'!r}")
        return t

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(t[2], f"unexpected {t[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def _starts_factor(self) -> bool:
        kind, text, _ = self.peek()
        return kind in ("num", "name") or text == "("

    def term(self) -> Expr:
        e = self.unary()
        seen_gen = not _is_scalar(e)
        while True:
            kind, text, pos = self.peek()
            if text in ("*", "/"):
                self.take()
                op = text
                pos = self.peek()[2]
            elif self._starts_factor():
                op = "*"
            else:
                return e
            rhs = self.unary()
            if op == "/" and not _is_scalar(rhs):
                raise ParseError(pos, "division is only by a scalar")
            if seen_gen and _has_q(rhs):
                raise ParseError(pos, "q is a scalar and may only appear in coefficient position")
            seen_gen = seen_gen or not _is_scalar(rhs)
            e = BinOp(op, e, rhs)

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            base = Pow(base, self.exponent())
        if self.peek()[1] == "^":
            raise ParseError(self.peek()[2], "chained exponents are not allowed")
        return base

    def exponent(self) -> int:
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, text, pos = self.take()
        if kind != "num":
            raise ParseError(pos, "exponents must be integer literals")
        if paren:
            t = self.peek()
            if t[1] != ")":
                raise ParseError(t[2], "exponents must be integer literals")
            self.take()
        return sign * int(text)

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(Fraction(int(text)))
        if kind == "name":
            if text == "q" and self.algebra is not None and not self.algebra.quantum:
                raise ParseError(pos, f"q is not a scalar of {self.algebra}")
            return Sym(text, pos)
        if text == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(pos, f"unexpected {text or 'end of input'!r}")


def parse(src: str, algebra: Optional[AlgebraId] = None) -> Expr:
    """Parse ``src``; errors carry the byte offset of the offending token."""
    if not src or not src.strip():
        raise ParseError(0, "empty expression")
    return _Parser(src, algebra).parse()


# ---------------------------------------------------------------------------
# evaluation

Value = Union[Fraction, RatFunc, AlgebraElement]


def _as_element(v: Value, alg: AlgebraId) -> AlgebraElement:
    if isinstance(v, AlgebraElement):
        return v
    return AlgebraElement.one(alg).scale(v)


def eval_expr(e: Expr, algebra: AlgebraId) -> AlgebraElement:
    """Evaluate bottom-up; products are normal ordered as they are formed."""
    return _as_element(_eval(e, algebra), algebra)


def _eval(e: Expr, alg: AlgebraId) -> Value:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        if e.name == "q":
            if not alg.quantum:
                raise AlgebraMismatch(f"q is not a scalar of {alg}")
            return qpow(1)
        gens = alg.generators()
        if e.name not in gens:
            raise AlgebraMismatch(f"{e.name} is not a generator of {alg}")
        return AlgebraElement.monomial(alg, gens[e.name])
    if isinstance(e, Neg):
        v = _eval(e.arg, alg)
        return v.scale(-1) if isinstance(v, AlgebraElement) else -v
    if isinstance(e, Pow):
        v = _eval(e.base, alg)
        if isinstance(v, AlgebraElement):
            try:
                return v ** e.exp
            except ValueError as exc:
                raise AlgebraMismatch(str(exc)) from None
        if e.exp < 0 and is_zero(v):
            raise ZeroDivisionError("zero to a negative power")
        return v ** e.exp
    left, right = _eval(e.left, alg), _eval(e.right, alg)
    if e.op == "/":
        if is_zero(right):
            raise ZeroDivisionError("division by zero")
        inv = (1 / right) if isinstance(right, Fraction) else as_ratfunc(1) / right
        return left.scale(inv) if isinstance(left, AlgebraElement) else left * inv
    if e.op == "*":
        if isinstance(left, AlgebraElement) and isinstance(right, AlgebraElement):
            return left * right
        if isinstance(left, AlgebraElement):
            return left.scale(right)
        if isinstance(right, AlgebraElement):
            return right.scale(left)
        return left * right
    if isinstance(left, AlgebraElement) or isinstance(right, AlgebraElement):
        a, b = _as_element(left, alg), _as_element(right, alg)
        return a + b if e.op == "+" else a - b
    if isinstance(left, RatFunc) or isinstance(right, RatFunc):
        left, right = as_ratfunc(left), as_ratfunc(right)
    return left + right if e.op == "+" else left - right


def evaluate(src: str, algebra: AlgebraId) -> AlgebraElement:
    return eval_expr(parse(src, algebra), algebra)


# ---------------------------------------------------------------------------
# argument handling

_ALGEBRAS = {
    "Uq": "Uq_bplus",
    "Uq_bplus": "Uq_bplus",
    "U": "U_bplus",
    "U_bplus": "U_bplus",
    "C": "C_Bplus",
    "C_Bplus": "C_Bplus",
    "Ubn": "U_bnplus",
    "U_bnplus": "U_bnplus",
    "Cbn": "C_Bnplus",
    "C_Bnplus": "C_Bnplus",
}


class UsageError(ValueError):
    pass


def _algebra(name: str, n: Optional[int]) -> AlgebraId:
    tag = _ALGEBRAS.get(name)
    if tag is None:
        raise UsageError(f"unknown algebra {name!r}; choose from {', '.join(sorted(_ALGEBRAS))}")
    if tag == "U_bnplus":
        return ubn(n or 2)
    if tag == "C_Bnplus":
        return cbn(n or 2)
    return {"Uq_bplus": UQ, "U_bplus": UB, "C_Bplus": CB}[tag]


def _parse_set(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--set expects a comma list of integers, got {text!r}") from None
    if not vals:
        raise UsageError("--set is empty")
    return vals


def _calculus(args):
    fam = args.calculus
    I = _parse_set(args.set)
    if fam == "q":
        if I is not None and len(I) > 1:
            return build("q_set", I)
        return build("q", I[0] if I else (args.n or 2))
    if fam == "classical":
        return build("classical_CBp", I or {1, args.n or 2})
    if fam == "dual_classical":
        return build("dual_classical", args.n or 2)
    if fam == "nat_bp":
        return build("nat_bp")
    if fam == "kappa":
        return build("kappa", args.n or 2)
    raise UsageError(f"unknown calculus {fam!r}")


def _pairing_for_algebra(alg: AlgebraId):
    if alg == UQ:
        return Q_SELFDUAL, UQ
    if alg == UB:
        return CLASSICAL, CB
    if alg.tag == "U_bnplus":
        return kappa_pairing(alg.n), cbn(alg.n)
    raise UsageError("pair: --algebra must name the first slot (Uq, U or Ubn)")


def _label(text: str):
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    return int(text)


# suite id -> {cli flag: keyword}
_SUITE_FLAGS = {
    "hopf-axioms": {"degree": "degree"},
    "appendix": {"degree": "max_n"},
    "classification": {"degree": "total"},
    "thm-qcalc-relations": {"n": "ns", "degree": "D"},
    "corollary-2dim": {"degree": "D"},
    "classical": {"n": "ns", "degree": "D"},
    "dual-classical": {"n": "ns", "degree": "D"},
    "kappa": {"n": "ns", "degree": "D"},
    "negative-controls": {"degree": "D"},
    "relations": {"family": "family", "n": "n", "set": "I", "degree": "D"},
}


def _suite_params(name: str, args) -> dict:
    params = {}
    for flag, kw in _SUITE_FLAGS.get(name, {}).items():
        v = getattr(args, flag, None)
        if v is None:
            continue
        if kw == "ns":
            v = [v]
        elif kw == "I":
            v = _parse_set(v)
        params[kw] = v
    return params


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(dict({"schema": SCHEMA}, **payload), indent=2, sort_keys=False))
    else:
        print(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="Uq", help="Uq, U, C, Ubn or Cbn (default Uq)")
    common.add_argument("--n", type=int, help="rank for U(b_{n+}), C(B_{n+}), q(n) and related families")
    common.add_argument("--set", help="comma list of positive integers, e.g. 2,3")
    common.add_argument("--degree", type=int, help="degree bound")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="qborel", description="Exact computations with bicovariant calculi on U_q(b+) and relatives.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("mul", parents=[common], help="normal-ordered product of expressions")
    s.add_argument("exprs", nargs="+")
    for name, hlp in (("coproduct", "coproduct of an expression"), ("antipode", "antipode of an expression"), ("adl", "left adjoint coaction on U_q(b+)")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("expr")
    s = sub.add_parser("pair", parents=[common], help="<a, b>; --algebra names the first slot")
    s.add_argument("left")
    s.add_argument("right")
    for name, hlp in (("d", "exterior derivative in a calculus"), ("derive", "partial derivatives in a calculus")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("expr")
        s.add_argument("--calculus", default="q", choices=["q", "classical", "dual_classical", "nat_bp", "kappa"])
        if name == "derive":
            s.add_argument("--label", help="basis label, e.g. 0 or 2,1 (default: all)")
    s = sub.add_parser("classify", parents=[common], help="closure data for the crossed submodule M(1, I)")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", help=", ".join(SUITES))
    s.add_argument("--family", help="calculus family for the relations suite: q, q_set, classical_CBp, dual_classical, nat_bp, kappa")
    s = sub.add_parser("kappa", parents=[common], help="kappa-Minkowski checks")
    s.add_argument("--verify", action="store_true", help="run relations and invariance checks")
    return p


def _cmd(args) -> int:
    cmd = args.command
    if cmd in ("verify", "kappa"):
        if cmd == "kappa":
            from .kappa import verify_kappa

            n = args.n or 2
            if not args.verify:
                c = build("kappa", n)
                _emit(args, {"command": "kappa", "n": n, "dim": c.dim}, f"kappa calculus on U(b_{n}+): dim {c.dim}")
                return 0
            rep = verify_kappa(n, args.degree or 4)
            print(json.dumps(rep.to_dict(), indent=2))
            return 0 if rep.passed else 1
        rep = run_suite(args.suite, **_suite_params(args.suite, args))
        if args.json:
            print(json.dumps(rep.to_dict(), indent=2))
        else:
            print(rep.summary())
        return 0 if rep.passed else 1
    if cmd == "classify":
        return _classify(args)
    alg = _algebra(args.algebra, args.n)
    if cmd == "mul":
        out = evaluate(args.exprs[0], alg)
        for src in args.exprs[1:]:
            out = out * evaluate(src, alg)
        _emit(args, {"command": cmd, "algebra": str(alg), "result": render(out)}, render(out))
        return 0
    if cmd in ("coproduct", "antipode", "adl"):
        a = evaluate(args.expr, alg)
        if cmd == "antipode":
            text = render(antipode(a))
        elif cmd == "coproduct":
            text = render_tensor(coproduct(a))
        else:
            if alg != UQ:
                raise UsageError("adl is implemented on U_q(b+)")
            text = render_tensor(adjoint_coaction_direct(a))
        _emit(args, {"command": cmd, "algebra": str(alg), "input": render(a), "result": text}, text)
        return 0
    if cmd == "pair":
        pid, other = _pairing_for_algebra(alg)
        a, b = evaluate(args.left, alg), evaluate(args.right, other)
        text = render_scalar(pair_any(pid, a, b))
        _emit(args, {"command": cmd, "pairing": pid.tag, "result": text}, text)
        return 0
    if cmd in ("d", "derive"):
        c = _calculus(args)
        a = evaluate(args.expr, c.algebra)
        if cmd == "d":
            text = str(d(a, c))
            _emit(args, {"command": cmd, "calculus": repr(c), "input": render(a), "result": text}, text)
            return 0
        labels = [_label(args.label)] if args.label else list(c.labels)
        rows = {}
        for lab in labels:
            red = derivation(c, lab, a)
            row = {"reduction": render(red), "oracle": render(derivation_oracle(c.tangent_basis[c.index(lab)], a))}
            try:
                row["closed_form"] = render(derivation_closed_form(c, lab, a))
            except InvalidDescriptor:
                pass
            rows[str(lab)] = row
        ok = all(len(set(r.values())) == 1 for r in rows.values())
        text = "\n".join(f"partial_{k}: {r['reduction']}" + ("" if len(set(r.values())) == 1 else f"  MISMATCH {r}") for k, r in rows.items())
        _emit(args, {"command": cmd, "calculus": repr(c), "input": render(a), "pass": ok, "result": rows}, text)
        return 0 if ok else 1
    raise UsageError(f"unknown command {cmd}")


def _classify(args) -> int:
    from .submod import (
        ClassificationPair,
        canonical_crossed_submodule_q,
        canonical_tangent_space_q,
        classical_limit_ideal,
        closure,
        default_truncation,
    )

    I = _parse_set(args.set)
    if I is None:
        raise UsageError("classify needs --set")
    alg = _algebra(args.algebra, args.n)
    trunc = default_truncation(I, alg)
    if alg in (UQ, CB):
        M = closure(canonical_crossed_submodule_q(ClassificationPair(I=I, algebra=alg)), "crossed", trunc, algebra=alg)
    elif alg == UB:
        M = closure(classical_limit_ideal(I), "ideal", trunc, algebra=alg)
    else:
        raise UsageError("classify works on Uq, C or U")
    info = {
        "command": "classify",
        "algebra": str(alg),
        "I": sorted(I),
        "truncation": [trunc.max_xdeg, trunc.lo, trunc.hi],
        "codim": M.codim(),
        "in_ker_eps": M.in_kernel(),
        "warnings": M.warnings,
    }
    if alg == UQ and 1 not in I:
        L = closure(canonical_tangent_space_q(I), "tangent_q", trunc, kernel_only=True, algebra=UQ)
        info["tangent_dim"] = L.dim
    text = "\n".join(f"{k}: {v}" for k, v in info.items() if k != "command")
    _emit(args, info, text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _cmd(args)
    except ParseError as exc:
        print(f"parse error {exc}", file=sys.stderr)
    except (UsageError, UnknownSuite, AlgebraMismatch, InvalidDescriptor, ValueError, ZeroDivisionError) as exc:
        msg = f"unknown suite {exc.args[0]!r}; choose from {', '.join(SUITES)}" if isinstance(exc, UnknownSuite) else str(exc)
        print(f"error: {msg}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
