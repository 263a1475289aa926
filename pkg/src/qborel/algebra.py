"""Normal-ordered bases and Hopf structure of the Borel-type algebras.

Five families are supported:

``Uq_bplus``
    U_q(b+) = C_q(B+), generators X, g, g^-1 with X g = q g X.  Basis
    X^n g^m stored as ``(n, m)``.
``C_Bplus``
    The q = 1 specialisation, commutative.  Same basis and key layout.
``U_bplus``
    U(b+) with [H, X] = X.  Basis X^n H^m stored as ``(n, m)``.
``U_bnplus(n)``
    U(b_{n+}) with [x0, xi] = xi, [xi, xj] = 0.  Basis
    x_{n-1}^{m_{n-1}} ... x_1^{m_1} x_0^{m_0} stored as ``(m_0, ..., m_{n-1})``.
``C_Bnplus(n)``
    Commutative with g, g^-1, p_1..p_{n-1}.  Basis p^r g^s stored as
    ``(s, r_1, ..., r_{n-1})``.

Elements are immutable mappings from basis keys to coefficients.  U_q(b+)
coefficients are :class:`~qborel.coeff.RatFunc`; all other families use
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .coeff import RatFunc, as_ratfunc, eval_q1, is_zero, qbinom, qpow, render_scalar

Monomial = Tuple[int, ...]


class AlgebraMismatch(TypeError):
    """Operands live in different algebras."""


@dataclass(frozen=True)
class AlgebraId:
    tag: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown algebra tag {self.tag!r}")
        if self.tag in ("U_bnplus", "C_Bnplus"):
            if self.n is None or self.n < 2:
                raise ValueError(f"{self.tag} needs n >= 2")
        elif self.n is not None:
            raise ValueError(f"{self.tag} takes no n")

    @property
    def quantum(self) -> bool:
        return self.tag == "Uq_bplus"

    @property
    def nkeys(self) -> int:
        return self.n if self.n is not None else 2

    def scalar(self, c):
        """Coerce ``c`` into this algebra's coefficient field."""
        if self.quantum:
            return as_ratfunc(c)
        if isinstance(c, RatFunc):
            if not c.is_rational():
                raise TypeError(f"{c} is not a rational number; {self} is defined over Q")
            return c.to_rational()
        return Fraction(c)

    def generators(self) -> Dict[str, Monomial]:
        t = self.tag
        if t in ("Uq_bplus", "C_Bplus"):
            return {"X": (1, 0), "g": (0, 1)}
        if t == "U_bplus":
            return {"X": (1, 0), "H": (0, 1)}
        if t == "U_bnplus":
            return {f"x{i}": _unit_vec(self.n, i) for i in range(self.n)}
        gens = {"g": _unit_vec(self.n, 0)}
        gens.update({f"p{i}": _unit_vec(self.n, i) for i in range(1, self.n)})
        return gens

    def invertible(self) -> Tuple[str, ...]:
        return ("g",) if self.tag in ("Uq_bplus", "C_Bplus", "C_Bnplus") else ()

    def __str__(self):
        return self.tag if self.n is None else f"{self.tag}({self.n})"


_TAGS = ("Uq_bplus", "U_bplus", "C_Bplus", "U_bnplus", "C_Bnplus")

UQ = AlgebraId("Uq_bplus")
UB = AlgebraId("U_bplus")
CB = AlgebraId("C_Bplus")


def ubn(n: int) -> AlgebraId:
    return AlgebraId("U_bnplus", n)


def cbn(n: int) -> AlgebraId:
    return AlgebraId("C_Bnplus", n)


def _unit_vec(n: int, i: int) -> Monomial:
    return tuple(1 if j == i else 0 for j in range(n))


def identity_monomial(alg: AlgebraId) -> Monomial:
    return (0,) * alg.nkeys


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# monomial level structure maps


@lru_cache(maxsize=None)
def _mono_mul(alg: AlgebraId, a: Monomial, b: Monomial) -> Tuple[Tuple[Monomial, object], ...]:
    t = alg.tag
    if t == "Uq_bplus":
        # g^m X^n = q^{-mn} X^n g^m
        return (((a[0] + b[0], a[1] + b[1]), qpow(-a[1] * b[0])),)
    if t in ("C_Bplus", "C_Bnplus"):
        return ((_add(a, b), Fraction(1)),)
    if t == "U_bplus":
        # H^m X^c = X^c (H + c)^m
        c, m = b[0], a[1]
        out = []
        for j in range(m + 1):
            coef = comb(m, j) * c ** (m - j)
            if coef:
                out.append(((a[0] + c, j + b[1]), Fraction(coef)))
        return tuple(out)
    # U_bnplus: x_0^m x^k = x^k (x_0 + |k|)^m
    shift = sum(b[1:])
    m = a[0]
    rest = tuple(x + y for x, y in zip(a[1:], b[1:]))
    out = []
    for j in range(m + 1):
        coef = comb(m, j) * shift ** (m - j)
        if coef:
            out.append(((j + b[0],) + rest, Fraction(coef)))
    return tuple(out)


@lru_cache(maxsize=None)
def _mono_coproduct(alg: AlgebraId, a: Monomial) -> Tuple[Tuple[Tuple[Monomial, Monomial], object], ...]:
    t = alg.tag
    out = []
    if t == "Uq_bplus":
        n, k = a
        for r in range(n + 1):
            out.append((((n - r, k + r), (r, k)), qbinom(n, r) * qpow(-r * (n - r))))
    elif t == "C_Bplus":
        n, k = a
        for r in range(n + 1):
            out.append((((n - r, k + r), (r, k)), Fraction(comb(n, r))))
    elif t in ("U_bplus", "U_bnplus"):
        # every generator is primitive
        for split in iproduct(*(range(e + 1) for e in a)):
            coef = 1
            for e, i in zip(a, split):
                coef *= comb(e, i)
            out.append(((tuple(split), tuple(e - i for e, i in zip(a, split))), Fraction(coef)))
    else:
        s, r = a[0], a[1:]
        # Delta p_i = p_i (x) 1 + g (x) p_i,  Delta g = g (x) g
        for split in iproduct(*(range(e + 1) for e in r)):
            coef = 1
            for e, i in zip(r, split):
                coef *= comb(e, i)
            left = (s + sum(split),) + tuple(e - i for e, i in zip(r, split))
            right = (s,) + tuple(split)
            out.append(((left, right), Fraction(coef)))
    return tuple(out)


def _mono_counit(alg: AlgebraId, a: Monomial):
    t = alg.tag
    if t in ("Uq_bplus", "C_Bplus"):
        v = 1 if a[0] == 0 else 0
    elif t == "C_Bnplus":
        v = 1 if not any(a[1:]) else 0
    else:
        v = 1 if not any(a) else 0
    return alg.scalar(v)


def _generator_word(alg: AlgebraId, a: Monomial) -> List[Monomial]:
    """The monomial written as a product of generators (and g^-1) in storage order."""
    t = alg.tag
    n = alg.nkeys
    word: List[Monomial] = []
    if t in ("Uq_bplus", "C_Bplus"):
        word += [(1, 0)] * a[0]
        word += [(0, 1 if a[1] > 0 else -1)] * abs(a[1])
    elif t == "U_bplus":
        word += [(1, 0)] * a[0] + [(0, 1)] * a[1]
    elif t == "U_bnplus":
        for i in range(n - 1, 0, -1):
            word += [_unit_vec(n, i)] * a[i]
        word += [_unit_vec(n, 0)] * a[0]
    else:
        for i in range(1, n):
            word += [_unit_vec(n, i)] * a[i]
        step = _unit_vec(n, 0) if a[0] > 0 else tuple(-x for x in _unit_vec(n, 0))
        word += [step] * abs(a[0])
    return word


def _generator_antipode(alg: AlgebraId, gen: Monomial) -> "AlgebraElement":
    t = alg.tag
    if t in ("Uq_bplus", "C_Bplus"):
        if gen == (1, 0):
            return AlgebraElement(alg, {(1, -1): -1}) if t == "C_Bplus" else AlgebraElement(alg, {(1, -1): -qpow(1)})
        return AlgebraElement(alg, {(0, -gen[1]): 1})
    if t in ("U_bplus", "U_bnplus"):
        return AlgebraElement(alg, {gen: -1})
    if gen[0] != 0:
        return AlgebraElement(alg, {(-gen[0],) + gen[1:]: 1})
    # S p_i = -g^-1 p_i
    return AlgebraElement(alg, {(-1,) + gen[1:]: -1})


# ---------------------------------------------------------------------------
# elements


class AlgebraElement:
    """Finite linear combination of normal-ordered basis monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraId, terms: Optional[Mapping[Monomial, object]] = None):
        self.algebra = algebra
        clean: Dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != algebra.nkeys:
                    raise ValueError(f"monomial {m} does not belong to {algebra}")
                c = algebra.scalar(c)
                if not is_zero(c):
                    clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def _trusted(cls, algebra: AlgebraId, terms: Dict[Monomial, object]) -> "AlgebraElement":
        e = object.__new__(cls)
        e.algebra = algebra
        e.terms = terms
        return e

    @classmethod
    def monomial(cls, algebra: AlgebraId, m: Sequence[int], c=1) -> "AlgebraElement":
        return cls(algebra, {tuple(m): c})

    @classmethod
    def one(cls, algebra: AlgebraId) -> "AlgebraElement":
        return cls(algebra, {identity_monomial(algebra): 1})

    @classmethod
    def zero(cls, algebra: AlgebraId) -> "AlgebraElement":
        return cls(algebra)

    @classmethod
    def gen(cls, algebra: AlgebraId, name: str, power: int = 1) -> "AlgebraElement":
        gens = algebra.generators()
        if name not in gens:
            raise KeyError(f"{name!r} is not a generator of {algebra}")
        if power < 0 and name not in algebra.invertible():
            raise ValueError(f"{name} is not invertible in {algebra}")
        base = cls.monomial(algebra, gens[name])
        if power < 0:
            return _inverse_power(algebra, gens[name], -power)
        out = cls.one(algebra)
        for _ in range(power):
            out = out * base
        return out

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra == other.algebra and self.terms == other.terms
        if isinstance(other, (int, Fraction, RatFunc)):
            return self == AlgebraElement.one(self.algebra).scale(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            other = AlgebraElement.one(self.algebra).scale(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
        return AlgebraElement._trusted(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._trusted(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        c = self.algebra.scalar(c)
        if is_zero(c):
            return AlgebraElement.zero(self.algebra)
        return AlgebraElement._trusted(self.algebra, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self._inverse() ** (-k)
        out = AlgebraElement.one(self.algebra)
        for _ in range(k):
            out = out * self
        return out

    def _inverse(self) -> "AlgebraElement":
        """Inverse of c * g^s; anything else is not a unit."""
        gpos = {"Uq_bplus": 1, "C_Bplus": 1, "C_Bnplus": 0}.get(self.algebra.tag)
        if gpos is None or len(self.terms) != 1:
            raise ValueError(f"{render(self)} is not invertible in {self.algebra}")
        (m, c), = self.terms.items()
        if any(e for i, e in enumerate(m) if i != gpos):
            raise ValueError(f"{render(self)} is not invertible in {self.algebra}")
        return AlgebraElement.monomial(self.algebra, tuple(-e for e in m), self.algebra.scalar(1) / c)

    def coefficient(self, m: Sequence[int]):
        return self.terms.get(tuple(m), self.algebra.scalar(0))

    def items(self) -> Iterator[Tuple[Monomial, object]]:
        return iter(sorted(self.terms.items()))

    def map_coefficients(self, fn: Callable, algebra: Optional[AlgebraId] = None) -> "AlgebraElement":
        return AlgebraElement(algebra or self.algebra, {m: fn(c) for m, c in self.terms.items()})

    def __repr__(self):
        return f"<{self.algebra}: {render(self)}>"

    def __str__(self):
        return render(self)


def _inverse_power(alg: AlgebraId, gen: Monomial, k: int) -> AlgebraElement:
    return AlgebraElement.monomial(alg, tuple(-k * x for x in gen))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Normal-ordered product."""
    a._check(b)
    alg = a.algebra
    out: Dict[Monomial, object] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            cab = ca * cb
            for m, c in _mono_mul(alg, ma, mb):
                v = out.get(m)
                add = cab * c
                out[m] = add if v is None else v + add
    return AlgebraElement._trusted(alg, {m: c for m, c in out.items() if not is_zero(c)})


class TensorElement:
    """Linear combination of k-fold tensors of basis monomials of one algebra."""

    __slots__ = ("algebra", "terms", "arity")

    def __init__(self, algebra: AlgebraId, terms: Optional[Mapping[Tuple[Monomial, ...], object]] = None, arity: int = 2):
        self.algebra = algebra
        self.arity = arity
        clean = {}
        if terms:
            for k, c in terms.items():
                if len(k) != arity:
                    raise ValueError("tensor key has wrong arity")
                c = algebra.scalar(c)
                if not is_zero(c):
                    clean[tuple(tuple(m) for m in k)] = c
        self.terms = clean

    @classmethod
    def _trusted(cls, algebra, terms, arity=2):
        t = object.__new__(cls)
        t.algebra, t.terms, t.arity = algebra, terms, arity
        return t

    @classmethod
    def pure(cls, *legs: AlgebraElement) -> "TensorElement":
        alg = legs[0].algebra
        out = {(): alg.scalar(1)}
        for leg in legs:
            if leg.algebra != alg:
                raise AlgebraMismatch("tensor legs in different algebras")
            nxt = {}
            for k, c in out.items():
                for m, d in leg.terms.items():
                    nxt[k + (m,)] = c * d
            out = nxt
        return cls(alg, out, arity=len(legs))

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.algebra == other.algebra and self.arity == other.arity and self.terms == other.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if other.algebra != self.algebra or other.arity != self.arity:
            raise AlgebraMismatch("tensor mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return TensorElement._trusted(self.algebra, out, self.arity)

    def __neg__(self):
        return TensorElement._trusted(self.algebra, {k: -c for k, c in self.terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = self.algebra.scalar(c)
        return TensorElement(self.algebra, {k: v * c for k, v in self.terms.items()}, self.arity)

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        """Componentwise product (no braiding)."""
        if other.algebra != self.algebra or other.arity != self.arity:
            raise AlgebraMismatch("tensor mismatch")
        alg = self.algebra
        out: Dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                partial = [((), ca * cb)]
                for ma, mb in zip(ka, kb):
                    partial = [(k + (m,), c * d) for k, c in partial for m, d in _mono_mul(alg, ma, mb)]
                for k, c in partial:
                    v = out.get(k)
                    out[k] = c if v is None else v + c
        return TensorElement._trusted(alg, {k: c for k, c in out.items() if not is_zero(c)}, self.arity)

    def is_zero(self) -> bool:
        return not self.terms

    def leg_map(self, i: int, fn: Callable[[AlgebraElement], "TensorElement | AlgebraElement"]) -> "TensorElement":
        """Apply a linear map to leg ``i``; a tensor-valued map splices in its legs."""
        alg = self.algebra
        out: Dict = {}
        new_arity = None
        for k, c in self.terms.items():
            img = fn(AlgebraElement.monomial(alg, k[i]))
            if isinstance(img, AlgebraElement):
                pieces = {(m,): v for m, v in img.terms.items()}
                width = 1
            else:
                pieces, width = img.terms, img.arity
            new_arity = self.arity - 1 + width
            for sub, v in pieces.items():
                key = k[:i] + sub + k[i + 1:]
                w = out.get(key)
                out[key] = c * v if w is None else w + c * v
        if new_arity is None:
            new_arity = self.arity
        return TensorElement._trusted(alg, {k: c for k, c in out.items() if not is_zero(c)}, new_arity)

    def contract(self, fn: Callable[[Tuple[Monomial, ...]], Tuple[Tuple[Monomial, object], ...]]) -> AlgebraElement:
        out = AlgebraElement.zero(self.algebra)
        for k, c in self.terms.items():
            out = out + AlgebraElement(self.algebra, dict(fn(k))).scale(c)
        return out

    def right_legs(self) -> Dict[Tuple[Monomial, ...], AlgebraElement]:
        """Group by all legs but the last; return the last-leg element for each."""
        groups: Dict = {}
        for k, c in self.terms.items():
            groups.setdefault(k[:-1], {})[k[-1]] = c
        return {k: AlgebraElement._trusted(self.algebra, v) for k, v in groups.items()}

    def __repr__(self):
        return f"<{self.algebra} tensor: {render_tensor(self)}>"

    __str__ = lambda self: render_tensor(self)


# ---------------------------------------------------------------------------
# Hopf structure


def coproduct(a: AlgebraElement) -> TensorElement:
    alg = a.algebra
    out: Dict = {}
    for m, c in a.terms.items():
        for k, v in _mono_coproduct(alg, m):
            w = out.get(k)
            out[k] = c * v if w is None else w + c * v
    return TensorElement._trusted(alg, {k: c for k, c in out.items() if not is_zero(c)}, 2)


def coproduct_by_generators(a: AlgebraElement) -> TensorElement:
    """Delta computed multiplicatively from the generator coproducts."""
    alg = a.algebra
    total = TensorElement(alg, {}, 2)
    for m, c in a.terms.items():
        t = TensorElement.pure(AlgebraElement.one(alg), AlgebraElement.one(alg))
        for gen in _generator_word(alg, m):
            t = t * TensorElement(alg, dict(_generator_coproduct(alg, gen)), 2)
        total = total + t.scale(c)
    return total


def _generator_coproduct(alg: AlgebraId, gen: Monomial):
    one = identity_monomial(alg)
    t = alg.tag
    if t in ("Uq_bplus", "C_Bplus"):
        if gen == (1, 0):
            return [(((1, 0), one), 1), (((0, 1), (1, 0)), 1)]
        return [((gen, gen), 1)]
    if t in ("U_bplus", "U_bnplus"):
        return [((gen, one), 1), ((one, gen), 1)]
    if gen[0] != 0:
        return [((gen, gen), 1)]
    g = _unit_vec(alg.n, 0)
    return [((gen, one), 1), ((g, gen), 1)]


def counit(a: AlgebraElement):
    alg = a.algebra
    total = alg.scalar(0)
    for m, c in a.terms.items():
        e = _mono_counit(alg, m)
        if not is_zero(e):
            total = total + c * e
    return total


@lru_cache(maxsize=None)
def _mono_antipode(alg: AlgebraId, m: Monomial) -> AlgebraElement:
    out = AlgebraElement.one(alg)
    for gen in _generator_word(alg, m):
        out = _generator_antipode(alg, gen) * out
    return out


def antipode(a: AlgebraElement) -> AlgebraElement:
    out = AlgebraElement.zero(a.algebra)
    for m, c in a.terms.items():
        out = out + _mono_antipode(a.algebra, m).scale(c)
    return out


def normal_order(word: Iterable, algebra: AlgebraId) -> AlgebraElement:
    """Normal-order a word.

    ``word`` is a sequence of generator names, ``(name, power)`` pairs or
    integer scalars; the product is taken left to right.
    """
    out = AlgebraElement.one(algebra)
    for item in word:
        if isinstance(item, (int, Fraction, RatFunc)):
            out = out.scale(item)
            continue
        if isinstance(item, str):
            name, power = item, 1
        else:
            name, power = item
        out = out * AlgebraElement.gen(algebra, name, power)
    return out


def counit_projection(a: AlgebraElement) -> AlgebraElement:
    """x - eps(x) 1."""
    e = counit(a)
    if is_zero(e):
        return a
    return a - AlgebraElement.one(a.algebra).scale(e)


def xdegree(alg: AlgebraId, m: Monomial) -> int:
    """Degree in the non-group-like generators (X, or x_i / p_i with i >= 1)."""
    if alg.tag in ("Uq_bplus", "C_Bplus", "U_bplus"):
        return m[0]
    return sum(m[1:])


def total_degree(alg: AlgebraId, m: Monomial) -> int:
    if alg.tag in ("Uq_bplus", "C_Bplus"):
        return m[0] + abs(m[1])
    if alg.tag == "C_Bnplus":
        return abs(m[0]) + sum(m[1:])
    return sum(m)


# ---------------------------------------------------------------------------
# classical specialisation and commuting symbols


def specialize_q1(a: AlgebraElement) -> AlgebraElement:
    """U_q(b+) element with q -> 1, read in C(B+)."""
    if a.algebra != UQ:
        raise AlgebraMismatch("specialize_q1 expects a U_q(b+) element")
    return AlgebraElement(CB, {m: eval_q1(c) for m, c in a.terms.items()})


def lift(a: AlgebraElement) -> AlgebraElement:
    """Embed a C(B+) element into U_q(b+) on the same basis."""
    if a.algebra != CB:
        raise AlgebraMismatch("lift expects a C(B+) element")
    return AlgebraElement(UQ, {m: as_ratfunc(c) for m, c in a.terms.items()})


# A commuting polynomial is a dict keyed like the algebra's monomials.
CommPoly = Dict[Monomial, object]

#: factor orders accepted by :func:`from_commutative`; letters name generators
ORDERINGS = {
    "Uq_bplus": ("Xg", "gX"),
    "C_Bplus": ("Xg", "gX"),
    "U_bplus": ("XH", "HX"),
    "U_bnplus": ("storage",),
    "C_Bnplus": ("storage",),
}


def _ordered_product(alg: AlgebraId, m: Monomial, order: str) -> AlgebraElement:
    if order in ("Xg", "XH", "storage"):
        return AlgebraElement.monomial(alg, m)
    # group-like / Cartan letter first
    first = AlgebraElement.monomial(alg, (0, m[1]))
    second = AlgebraElement.monomial(alg, (m[0], 0))
    return first * second


def from_commutative(alg: AlgebraId, f: CommPoly, order: str = "storage") -> AlgebraElement:
    """The normal-ordering map :f: for the given factor order."""
    if order == "storage":
        order = ORDERINGS[alg.tag][0]
    if order not in ORDERINGS[alg.tag]:
        raise ValueError(f"ordering {order!r} not available for {alg}")
    out = AlgebraElement.zero(alg)
    for m, c in f.items():
        out = out + _ordered_product(alg, m, order).scale(c)
    return out


def to_commutative(a: AlgebraElement, order: str = "storage") -> CommPoly:
    """Inverse of :func:`from_commutative`."""
    alg = a.algebra
    rest = a
    f: CommPoly = {}
    guard = 0
    while not rest.is_zero():
        guard += 1
        if guard > 10000:
            raise RuntimeError("normal ordering inversion did not terminate")
        m = max(rest.terms, key=lambda k: (total_degree(alg, k), k))
        c = rest.terms[m]
        img = _ordered_product(alg, m, order if order != "storage" else ORDERINGS[alg.tag][0])
        lead = img.terms[m]
        coef = c * (Fraction(1, lead) if isinstance(lead, int) else 1 / lead)
        f[m] = f.get(m, alg.scalar(0)) + coef
        rest = rest - img.scale(coef)
    return {m: c for m, c in f.items() if not is_zero(c)}


# ---------------------------------------------------------------------------
# rendering


def render_monomial(alg: AlgebraId, m: Monomial) -> str:
    def power(name, e):
        if e == 0:
            return None
        return name if e == 1 else f"{name}^{e}"

    t = alg.tag
    if t in ("Uq_bplus", "C_Bplus"):
        parts = [power("X", m[0]), power("g", m[1])]
    elif t == "U_bplus":
        parts = [power("X", m[0]), power("H", m[1])]
    elif t == "U_bnplus":
        parts = [power(f"x{i}", m[i]) for i in range(alg.n - 1, 0, -1)] + [power("x0", m[0])]
    else:
        parts = [power(f"p{i}", m[i]) for i in range(alg.n - 1, 0, -1)] + [power("g", m[0])]
    parts = [p for p in parts if p]
    return " ".join(parts) if parts else "1"


def _render_coeff(c) -> Tuple[str, bool]:
    """Return (text, negative) for a coefficient in front of a monomial."""
    s = render_scalar(c)
    simple = " " not in s and "(" not in s
    if simple and s.startswith("-"):
        return s[1:], True
    if simple:
        return s, False
    return f"({s})", False


def _join(chunks: List[Tuple[str, bool]]) -> str:
    if not chunks:
        return "0"
    out = ""
    for i, (body, neg) in enumerate(chunks):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _term(c, mono: str) -> Tuple[str, bool]:
    coef, neg = _render_coeff(c)
    if mono == "1":
        return coef, neg
    if coef == "1":
        return mono, neg
    return f"{coef} * {mono}", neg


def render(a: AlgebraElement) -> str:
    """Canonical text: terms sorted by basis key, e.g. ``q^-1 * X^2 g^2``."""
    chunks = [_term(c, render_monomial(a.algebra, m)) for m, c in sorted(a.terms.items())]
    return _join(chunks)


def render_tensor(t: TensorElement) -> str:
    chunks = []
    for k, c in sorted(t.terms.items()):
        legs = " (x) ".join(f"[{render_monomial(t.algebra, m)}]" for m in k)
        chunks.append(_term(c, legs))
    return _join(chunks)
