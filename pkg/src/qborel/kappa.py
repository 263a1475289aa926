"""kappa-Minkowski space U(b_{n+}): natural calculus, coregular actions and
translation invariance of the normal-ordered Lebesgue integral.

Integration is defined on the commutative side: ``int :f: = int f d^n x``.
The normal-ordering map is only a vector-space isomorphism, so
:func:`gaussian_integral` never looks at the algebra product.  Functions are
polynomials times the fixed weight exp(-sum x_mu^2), where every integral is
an exact rational multiple of a power of sqrt(pi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .algebra import AlgebraElement, Monomial, cbn, from_commutative, render, ubn
from .calculus import (
    CalculusDescriptor,
    GammaElement,
    InvalidDescriptor,
    build,
    d,
    derivation,
    eta,
)
from .duality import coregular_action, kappa_pairing
from .report import SuiteReport

__all__ = [
    "SqrtPiScalar",
    "GaussianPoly",
    "build_kappa_calculus",
    "d_kappa",
    "gaussian_integral",
    "shifted_gaussian_integral",
    "invariance_check",
    "kappa_pairing_duality_check",
    "pullback_check",
    "verify_kappa",
]

Poly = Dict[Tuple[int, ...], Fraction]


@dataclass(frozen=True)
class SqrtPiScalar:
    """coeff * sqrt(pi)^power; the zero element has power 0."""

    coeff: Fraction
    power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.power < 0:
            raise ValueError("power of sqrt(pi) must be >= 0")
        if self.coeff == 0:
            object.__setattr__(self, "power", 0)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __add__(self, other: "SqrtPiScalar") -> "SqrtPiScalar":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.power != other.power:
            raise ValueError("cannot add different powers of sqrt(pi) exactly")
        return SqrtPiScalar(self.coeff + other.coeff, self.power)

    def __neg__(self):
        return SqrtPiScalar(-self.coeff, self.power)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SqrtPiScalar):
            return SqrtPiScalar(self.coeff * other.coeff, self.power + other.power)
        return SqrtPiScalar(self.coeff * Fraction(other), self.power)

    __rmul__ = __mul__

    def __str__(self):
        if self.is_zero():
            return "0"
        root = "sqrt(pi)" if self.power == 1 else f"sqrt(pi)^{self.power}"
        if self.power == 0:
            return str(self.coeff)
        return root if self.coeff == 1 else f"{self.coeff}*{root}"


ZERO_PI = SqrtPiScalar(0)


@dataclass(frozen=True)
class GaussianPoly:
    """poly(x_0, ..., x_{n-1}) * exp(-sum x_mu^2) with the weight implicit."""

    n: int
    poly: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    def __init__(self, n: int, poly: Mapping[Tuple[int, ...], object]):
        if n < 1:
            raise ValueError("need at least one variable")
        clean = {}
        for m, c in poly.items():
            m = tuple(m)
            if len(m) != n or any(e < 0 for e in m):
                raise ValueError(f"exponent {m} does not fit {n} variables")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "poly", tuple(sorted((m, c) for m, c in clean.items() if c)))

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "GaussianPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    def terms(self) -> Poly:
        return dict(self.poly)

    def derivative(self, mu: int) -> "GaussianPoly":
        """d/dx_mu of poly * weight, as a new GaussianPoly (product rule)."""
        out: Dict[Tuple[int, ...], Fraction] = {}
        for m, c in self.poly:
            if m[mu]:
                mm = list(m)
                mm[mu] -= 1
                out[tuple(mm)] = out.get(tuple(mm), Fraction(0)) + c * m[mu]
            mm = list(m)
            mm[mu] += 1
            out[tuple(mm)] = out.get(tuple(mm), Fraction(0)) - 2 * c
        return GaussianPoly(self.n, out)


def _moment(k: int) -> Fraction:
    """int x^k exp(-x^2) dx / sqrt(pi)."""
    if k % 2:
        return Fraction(0)
    out = Fraction(1)
    for j in range(1, k, 2):
        out *= j
    return out / 2 ** (k // 2)


def gaussian_integral(f: GaussianPoly) -> SqrtPiScalar:
    """int_{R^n} poly * exp(-sum x^2), exactly."""
    total = Fraction(0)
    for m, c in f.poly:
        v = c
        for e in m:
            v *= _moment(e)
            if not v:
                break
        total += v
    return SqrtPiScalar(total, f.n)


def _shifted_moments(a: Fraction, kmax: int):
    """I_k = int x^k exp(-(x + a)^2) dx / sqrt(pi) for k = 0..kmax.

    Integration by parts against d/dx exp(-(x+a)^2) = -2(x+a) exp(-(x+a)^2)
    gives I_(k+1) = (k/2) I_(k-1) - a I_k, started from I_0 = 1.
    """
    out = [Fraction(1)]
    prev = Fraction(0)
    for k in range(kmax):
        nxt = Fraction(k, 2) * prev - a * out[k]
        prev = out[k]
        out.append(nxt)
    return out


def shifted_gaussian_integral(f: GaussianPoly, a=1) -> SqrtPiScalar:
    """int (T_(a, x_0) (poly * weight)), i.e. poly and weight both shifted in x_0."""
    a = Fraction(a)
    top = max((m[0] for m, _ in f.poly), default=0)
    shifted: Dict[Tuple[int, ...], Fraction] = {}
    # expand poly(x_0 + a, ...) in powers of x_0
    for m, c in f.poly:
        for j in range(m[0] + 1):
            mm = (j,) + m[1:]
            shifted[mm] = shifted.get(mm, Fraction(0)) + c * comb(m[0], j) * a ** (m[0] - j)
    mom = _shifted_moments(a, top)
    total = Fraction(0)
    for m, c in shifted.items():
        v = c * mom[m[0]]
        for e in m[1:]:
            v *= _moment(e)
        total += v
    return SqrtPiScalar(total, f.n)


def build_kappa_calculus(n: int) -> CalculusDescriptor:
    if not isinstance(n, int) or n < 2:
        raise InvalidDescriptor("kappa calculus needs n >= 2")
    return build("kappa", n)


def d_kappa(f: Mapping[Monomial, object], n: int) -> GammaElement:
    """sum_mu dx_mu :df/dx_mu: for a commuting polynomial f in x_0..x_{n-1}."""
    c = build_kappa_calculus(n)
    alg = c.algebra
    out = GammaElement(c)
    for mu in range(n):
        part: Dict[Monomial, object] = {}
        for m, v in f.items():
            if m[mu]:
                mm = list(m)
                mm[mu] -= 1
                part[tuple(mm)] = part.get(tuple(mm), Fraction(0)) + Fraction(v) * m[mu]
        if part:
            out = out + eta(c, mu, from_commutative(alg, part))
    return out


def invariance_check(f: GaussianPoly, n: Optional[int] = None, report: Optional[SuiteReport] = None) -> SuiteReport:
    """Translation invariance of the integral on poly * weight.

    (i) int d/dx_mu (poly * weight) = 0 for every mu;
    (ii) int T_(1,x_0)(poly * weight) = int poly * weight, the shifted side
    computed by the integration-by-parts recurrence (no substitution).
    """
    n = f.n if n is None else n
    if n != f.n:
        raise ValueError(f"GaussianPoly has {f.n} variables, expected {n}")
    rep = report or SuiteReport("kappa-invariance", {"n": n})
    label = str(dict(f.poly))
    try:
        inf = rep.get("infinitesimal")
    except KeyError:
        inf = rep.entry("infinitesimal", "translation invariance: int :df/dx_mu: = 0")
    for mu in range(n):
        inf.record(f"mu={mu}, poly={label}", ZERO_PI, gaussian_integral(f.derivative(mu)))
    try:
        fin = rep.get("integer-shift")
    except KeyError:
        fin = rep.entry("integer-shift", "translation invariance: int :T_(1,x_0) f - f: = 0")
    fin.record(f"poly={label}", gaussian_integral(f), shifted_gaussian_integral(f, 1))
    return rep


def _commuting_monomials(n: int, D: int):
    return list(iproduct(range(D + 1), repeat=n))


def kappa_pairing_duality_check(n: int, D: int) -> SuiteReport:
    """Coregular action from the pairing against the closed forms.

    p_i |> :f: = :df/dx_i:, g |> :f: = :T_(1,x_0) f:, and the calculus
    derivations partial_i coincide with the p_i actions (partial_0 with
    d/dx_0, the action of the informal generator p_0).
    """
    c = build_kappa_calculus(n)
    alg, dual, pid = ubn(n), cbn(n), kappa_pairing(n)
    rep = SuiteReport("kappa-pairing", {"n": n, "D": D})
    e_p = rep.entry("p-action", "coregular action: p_i |> :f: = :df/dx_i:")
    e_g = rep.entry("g-action", "coregular action: g |> :f: = :T_(1,x_0) f:")
    e_d = rep.entry("derivations", "derivations of the natural calculus are the translation actions")
    g = AlgebraElement.gen(dual, "g")
    for m in _commuting_monomials(n, D):
        a = from_commutative(alg, {m: 1})
        for i in range(1, n):
            p = AlgebraElement.gen(dual, f"p{i}")
            want = from_commutative(alg, _partial({m: Fraction(1)}, i))
            got = coregular_action(pid, p, a)
            e_p.record(f"p{i} |> {render(a)}", render(want), render(got))
            e_d.record(f"partial_{i}({render(a)})", render(got), render(derivation(c, i, a)))
        shifted = _shift_x0({m: Fraction(1)}, 1)
        e_g.record(f"g |> {render(a)}", render(from_commutative(alg, shifted)), render(coregular_action(pid, g, a)))
        e_d.record(f"partial_0({render(a)})", render(from_commutative(alg, _partial({m: Fraction(1)}, 0))), render(derivation(c, 0, a)))
    return rep


def _partial(f: Poly, mu: int) -> Poly:
    out: Poly = {}
    for m, c in f.items():
        if m[mu]:
            mm = list(m)
            mm[mu] -= 1
            out[tuple(mm)] = out.get(tuple(mm), Fraction(0)) + c * m[mu]
    return out


def _shift_x0(f: Poly, a: int) -> Poly:
    out: Poly = {}
    for m, c in f.items():
        for j in range(m[0] + 1):
            mm = (j,) + tuple(m[1:])
            out[mm] = out.get(mm, Fraction(0)) + c * comb(m[0], j) * a ** (m[0] - j)
    return {m: c for m, c in out.items() if c}


def pullback_check(n: int, D: int = 4) -> SuiteReport:
    """Along x_0 -> H, x_i -> X the kappa calculus restricts to the natural one on U(b+).

    For every i >= 1 and every X^a H^b with a + b <= D, the image under the
    embedding has the same d, with dx_0 <-> dH and dx_i <-> dX.
    """
    from .algebra import UB

    kc = build_kappa_calculus(n)
    nat = build("nat_bp")
    alg = ubn(n)
    rep = SuiteReport("kappa-pullback", {"n": n, "D": D})
    entry = rep.entry("pullback", "embedding U(b+) -> U(b_{n+}), x_0 -> H, x_i -> X, carries nat_bp to kappa")
    ideal_entry = rep.entry("ideal", "preimage of the kappa ideal is the nat_bp ideal")

    def embed(a: AlgebraElement, i: int) -> AlgebraElement:
        out: Dict[Monomial, object] = {}
        for (x, h), v in a.terms.items():
            key = [h] + [0] * (n - 1)
            key[i] += x
            out[tuple(key)] = v
        return AlgebraElement(alg, out)

    for i in range(1, n):
        for x in range(D + 1):
            for h in range(D + 1 - x):
                a = AlgebraElement.monomial(UB, (x, h))
                ia = embed(a, i)
                ideal_entry.record(f"i={i}, {render(a)}", nat.ideal.contains(a), kc.ideal.contains(ia))
                got = d(ia, kc)
                dn = d(a, nat)
                want = eta(kc, 0, embed(dn.component(0), i)) + eta(kc, i, embed(dn.component(1), i))
                entry.record(f"i={i}, d({render(a)})", want, got)
    return rep


def verify_kappa(n: int, D: int = 4, integral_degree: int = 4, pairing_degree: Optional[int] = None) -> SuiteReport:
    """Relations, Leibniz, pairing duality and integral invariance for one n."""
    from .calculus import verify_relations

    c = build_kappa_calculus(n)
    rep = verify_relations(c, D, leibniz_degree=D)
    rep.suite = f"kappa({n})"
    rep.extend(kappa_pairing_duality_check(n, pairing_degree if pairing_degree is not None else min(D, 2)))
    inv = SuiteReport("kappa-invariance", {"n": n})
    for m in _commuting_monomials(n, integral_degree):
        invariance_check(GaussianPoly.monomial(m), n, inv)
    rep.extend(inv)
    if n == 2:
        rep.extend(pullback_check(2, D))
    return rep


