"""Exact scalars: Laurent polynomials and rational functions in ``q`` over Q.

Rationals are :class:`fractions.Fraction`.  A :class:`QPolynomial` is a
Laurent polynomial stored densely from its lowest exponent; a
:class:`RatFunc` is a reduced quotient with a monic denominator whose lowest
exponent is zero, so equality of rational functions is structural.

The q-combinatorial helpers (:func:`qint`, :func:`qfact`, :func:`qbinom`) and
the evaluation :func:`eval_q1` live here as well.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple, Union

__all__ = [
    "EvaluationPole",
    "QPolynomial",
    "RatFunc",
    "Q",
    "ONE",
    "ZERO",
    "qpow",
    "qint",
    "qfact",
    "qbinom",
    "eval_q1",
    "as_ratfunc",
    "is_zero",
    "verify_qbinom_identity",
    "render_scalar",
]

Scalar = Union[int, Fraction, "RatFunc"]


class EvaluationPole(ArithmeticError):
    """Raised when a rational function has a pole at the evaluation point."""


def _norm(c):
    # Integral coefficients are stored as int: int arithmetic is far cheaper.
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _strip(coeffs: Iterable[Fraction], low: int) -> Tuple[int, Tuple[Fraction, ...]]:
    cs = [_norm(c) for c in coeffs]
    start = 0
    while start < len(cs) and cs[start] == 0:
        start += 1
    end = len(cs)
    while end > start and cs[end - 1] == 0:
        end -= 1
    if start == end:
        return 0, ()
    return low + start, tuple(cs[start:end])


class QPolynomial:
    """Laurent polynomial in q with rational coefficients.

    ``low`` is the exponent of ``coeffs[0]``; neither end coefficient is zero
    and the zero polynomial has empty ``coeffs``.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        self.low, self.coeffs = _strip((c if type(c) in (int, Fraction) else Fraction(c) for c in coeffs), low)
        self._hash = None

    @classmethod
    def _raw(cls, low: int, coeffs: Tuple[Fraction, ...]) -> "QPolynomial":
        p = object.__new__(cls)
        p.low, p.coeffs = low, coeffs
        p._hash = None
        return p

    @classmethod
    def from_dict(cls, terms: Dict[int, object]) -> "QPolynomial":
        terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def constant(cls, c) -> "QPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, e: int, c=1) -> "QPolynomial":
        return cls([c], e)

    def coefficients(self) -> Dict[int, Fraction]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.low == 0)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def degree(self) -> int:
        return self.high if self.coeffs else -1

    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, QPolynomial):
            return self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == QPolynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __neg__(self):
        return QPolynomial._raw(self.low, tuple(-c for c in self.coeffs))

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.low - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.low - lo + i] += c
        low, cs = _strip(out, lo)
        return QPolynomial._raw(low, cs)

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        if not self.coeffs or not other.coeffs:
            return QPolynomial._raw(0, ())
        a, b = self.coeffs, other.coeffs
        if len(b) == 1:
            c = b[0]
            return QPolynomial._raw(self.low + other.low, tuple(_norm(x * c) for x in a))
        if len(a) == 1:
            c = a[0]
            return QPolynomial._raw(self.low + other.low, tuple(_norm(c * x) for x in b))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPolynomial._raw(self.low + other.low, tuple(_norm(c) for c in out))

    def scale(self, c) -> "QPolynomial":
        if c == 0:
            return QPolynomial._raw(0, ())
        return QPolynomial._raw(self.low, tuple(_norm(x * c) for x in self.coeffs))

    def shift(self, k: int) -> "QPolynomial":
        return QPolynomial._raw(self.low + k, self.coeffs)

    def evaluate(self, x) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * Fraction(x) ** self.low

    def compose_scale(self, m: int) -> "QPolynomial":
        """Return p(q^m)."""
        if m == 0:
            return QPolynomial.constant(self.evaluate(1))
        return QPolynomial.from_dict({e * m: c for e, c in self.coefficients().items()})

    def __repr__(self):
        return f"QPolynomial({render_poly(self)!r})"

    __str__ = lambda self: render_poly(self)


def _divmod_dense(a: list, b: list) -> Tuple[list, list]:
    """Divide ordinary polynomials given as ascending coefficient lists."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) <= db:
        return [], a
    quot = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = Fraction(a[k + db]) / lead
        quot[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _gcd_dense(a: list, b: list) -> list:
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    lead = a[-1]
    return [Fraction(c) / lead for c in a]


def _poly_gcd(p: QPolynomial, r: QPolynomial) -> QPolynomial:
    # Laurent units q^k are dropped: the gcd is an ordinary monic polynomial
    # with nonzero constant term.
    g = _gcd_dense(list(p.coeffs), list(r.coeffs))
    return QPolynomial(g)


def _exact_div(p: QPolynomial, d: QPolynomial) -> QPolynomial:
    quot, rem = _divmod_dense(list(p.coeffs), list(d.coeffs))
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return QPolynomial(quot, p.low - d.low)


class RatFunc:
    """Element of Q(q) in canonical form.

    The denominator is monic with lowest exponent zero and coprime to the
    numerator, so two equal rational functions have identical fields.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, QPolynomial) else QPolynomial.constant(num)
        den = den if isinstance(den, QPolynomial) else QPolynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = self._normalize(num, den)
        self._hash = None

    @staticmethod
    def _normalize(num: QPolynomial, den: QPolynomial):
        if num.is_zero():
            return num, QPolynomial.constant(1)
        num = num.shift(-den.low)
        den = den.shift(-den.low)
        if len(den.coeffs) > 1:
            g = _poly_gcd(num, den)
            if len(g.coeffs) > 1:
                num = _exact_div(num, g)
                den = _exact_div(den, g)
        lead = den.leading()
        if lead != 1:
            num = num.scale(Fraction(1) / lead)
            den = den.scale(Fraction(1) / lead)
        return num, den

    @classmethod
    def _raw(cls, num: QPolynomial, den: QPolynomial) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den = num, den
        r._hash = None
        return r

    @classmethod
    def poly(cls, p: QPolynomial) -> "RatFunc":
        return cls._raw(p, _ONE_POLY)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_rational(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.evaluate(1) if self.num.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_rational() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_rational())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other):
        other = as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            if self.den.is_constant():
                return RatFunc._raw(self.num + other.num, self.den)
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc._raw(self.num * other.num, _ONE_POLY)
        if other.num.is_monomial() and other.den.is_constant():
            return RatFunc._raw(self.num * other.num, self.den)
        if self.num.is_monomial() and self.den.is_constant():
            return RatFunc._raw(self.num * other.num, other.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_ratfunc(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def subs_qpow(self, m: int) -> "RatFunc":
        """Substitute q -> q^m."""
        return RatFunc(self.num.compose_scale(m), self.den.compose_scale(m))

    def __repr__(self):
        return f"RatFunc({render_scalar(self)!r})"

    def __str__(self):
        return render_scalar(self)


_ONE_POLY = QPolynomial.constant(1)
ZERO = RatFunc._raw(QPolynomial(), _ONE_POLY)
ONE = RatFunc._raw(_ONE_POLY, _ONE_POLY)
Q = RatFunc._raw(QPolynomial.monomial(1), _ONE_POLY)


def as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        if x == 0:
            return ZERO
        return RatFunc._raw(QPolynomial.constant(x), _ONE_POLY)
    if isinstance(x, QPolynomial):
        return RatFunc(x)
    return NotImplemented


def is_zero(x) -> bool:
    return x == 0 if not isinstance(x, RatFunc) else x.num.is_zero()


@lru_cache(maxsize=None)
def qpow(k: int) -> RatFunc:
    """q^k as a RatFunc."""
    return RatFunc._raw(QPolynomial.monomial(k), _ONE_POLY)


@lru_cache(maxsize=None)
def qint(n: int) -> RatFunc:
    if n < 0:
        raise ValueError("qint needs n >= 0")
    return RatFunc.poly(QPolynomial([1] * n))


@lru_cache(maxsize=None)
def qfact(n: int) -> RatFunc:
    if n < 0:
        raise ValueError("qfact needs n >= 0")
    out = ONE
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, m: int) -> RatFunc:
    if n < 0 or m < 0 or m > n:
        raise ValueError(f"qbinom({n}, {m}) outside 0 <= m <= n")
    # Pascal recurrence keeps everything polynomial.
    if m == 0 or m == n:
        return ONE
    return qbinom(n - 1, m - 1) + qpow(m) * qbinom(n - 1, m)


def eval_q1(r) -> Fraction:
    """Evaluate at q = 1 after reduction."""
    if isinstance(r, (int, Fraction)):
        return Fraction(r)
    d = r.den.evaluate(1)
    if d == 0:
        raise EvaluationPole(f"{r} has a pole at q=1")
    return r.num.evaluate(1) / d


def verify_qbinom_identity(n: int) -> bool:
    """Check sum_i qbinom(n,i) q^(i(i+1)/2) x^i == prod_j (1 + q^j x).

    Polynomials in x are lists of RatFunc coefficients.
    """
    lhs = [qbinom(n, i) * qpow(i * (i + 1) // 2) for i in range(n + 1)]
    rhs = [ONE]
    for j in range(1, n + 1):
        nxt = [ZERO] * (len(rhs) + 1)
        for i, c in enumerate(rhs):
            nxt[i] = nxt[i] + c
            nxt[i + 1] = nxt[i + 1] + c * qpow(j)
        rhs = nxt
    return lhs == rhs


def _render_rational(c: Fraction) -> str:
    return str(c)


def render_poly(p: QPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in sorted(p.coefficients().items()):
        mag = abs(c)
        if e == 0:
            body = _render_rational(mag)
        else:
            var = "q" if e == 1 else f"q^{e}"
            body = var if mag == 1 else f"{_render_rational(mag)}*{var}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def render_scalar(x) -> str:
    """Canonical text of a scalar: ascending powers of q, caret exponents."""
    if isinstance(x, (int, Fraction)):
        return _render_rational(Fraction(x))
    if x.den.is_constant():
        return render_poly(x.num)
    num = render_poly(x.num)
    if len(x.num.coeffs) > 1:
        num = f"({num})"
    return f"{num}/({render_poly(x.den)})"
