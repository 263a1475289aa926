"""Pairings, adjoint (co)actions and coregular actions.

Slot convention for :func:`pair`: slot 1 holds the enveloping-type element
(U_q(b+), U(b+) or U(b_{n+})), slot 2 the function-type element (U_q(b+),
C(B+) or C(B_{n+})).  With this orientation all three pairings satisfy

    <a b, x> = <a (x) b, Delta x>      <a, x y> = <Delta a, x (x) y>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Mapping, Optional, Union

from .algebra import (
    CB,
    UB,
    UQ,
    AlgebraElement,
    AlgebraMismatch,
    Monomial,
    TensorElement,
    antipode,
    cbn,
    coproduct,
    ubn,
)
from .coeff import ONE, ZERO, is_zero, qbinom, qfact, qpow

__all__ = [
    "PairingId",
    "Q_SELFDUAL",
    "CLASSICAL",
    "kappa_pairing",
    "pair",
    "pair_any",
    "pair_tensor",
    "adjoint_coaction_direct",
    "adjoint_coaction_closed",
    "adjoint_action_uq",
    "adjoint_action_classical",
    "adjoint_action_brute",
    "coregular_action",
    "tangent_action_on_L",
]


@dataclass(frozen=True)
class PairingId:
    tag: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.tag not in ("q_selfdual", "classical", "kappa"):
            raise ValueError(f"unknown pairing {self.tag!r}")
        if self.tag == "kappa" and (self.n is None or self.n < 2):
            raise ValueError("kappa pairing needs n >= 2")

    @property
    def slots(self):
        if self.tag == "q_selfdual":
            return UQ, UQ
        if self.tag == "classical":
            return UB, CB
        return ubn(self.n), cbn(self.n)


Q_SELFDUAL = PairingId("q_selfdual")
CLASSICAL = PairingId("classical")


def kappa_pairing(n: int) -> PairingId:
    return PairingId("kappa", n)


def _pair_mono(pid: PairingId, a: Monomial, b: Monomial):
    if pid.tag == "q_selfdual":
        (n, m), (r, s) = a, b
        if n != r:
            return ZERO
        return qfact(n) * qpow(-n * (n - 1) // 2 - m * s)
    if pid.tag == "classical":
        (n, m), (r, s) = a, b
        if n != r:
            return Fraction(0)
        return Fraction(factorial(n) * s ** m)
    # kappa: <x^m x0^k, p^r g^s> = delta_{m,r} prod m_i! s^k
    if a[1:] != b[1:]:
        return Fraction(0)
    out = Fraction(b[0] ** a[0])
    for e in a[1:]:
        out *= factorial(e)
    return out


def pair(pid: PairingId, a: AlgebraElement, b: AlgebraElement):
    """Bilinear pairing <a, b> with a in slot 1 and b in slot 2."""
    s1, s2 = pid.slots
    if a.algebra != s1 or b.algebra != s2:
        raise AlgebraMismatch(f"pairing {pid.tag} expects ({s1}, {s2}), got ({a.algebra}, {b.algebra})")
    total = s1.scalar(0)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            v = _pair_mono(pid, ma, mb)
            if not is_zero(v):
                total = total + ca * cb * v
    return total


def pair_any(pid: PairingId, a: AlgebraElement, b: AlgebraElement):
    """Pair two elements in whichever slot order their algebras allow."""
    s1, s2 = pid.slots
    if a.algebra == s1 and b.algebra == s2:
        return pair(pid, a, b)
    return pair(pid, b, a)


def pair_tensor(pid: PairingId, t: TensorElement, u: TensorElement):
    """<a (x) b, x (x) y> = <a, x><b, y>, legs matched in order."""
    total = pid.slots[0].scalar(0)
    for ka, ca in t.terms.items():
        for kb, cb in u.terms.items():
            v = ca * cb
            for ma, mb in zip(ka, kb):
                v = v * pair_any(pid, AlgebraElement.monomial(t.algebra, ma), AlgebraElement.monomial(u.algebra, mb))
                if is_zero(v):
                    break
            total = total + v
    return total


def adjoint_coaction_direct(v: AlgebraElement) -> TensorElement:
    """Ad_L(v) = v1 S(v3) (x) v2 from the iterated coproduct."""
    alg = v.algebra
    out = TensorElement(alg, {}, 2)
    for (m1, m2), c in coproduct(v).terms.items():
        for (m2a, m2b), d in coproduct(AlgebraElement.monomial(alg, m2)).terms.items():
            left = AlgebraElement.monomial(alg, m1) * antipode(AlgebraElement.monomial(alg, m2b))
            out = out + TensorElement.pure(left, AlgebraElement.monomial(alg, m2a)).scale(c * d)
    return out


def adjoint_coaction_closed(n: int, P: Union[AlgebraElement, Mapping[int, object]]) -> TensorElement:
    """Closed form of Ad_L(X^n P(g)) on U_q(b+).

    sum_t qbinom(n,t) g^t X^(n-t) (x) X^t P(g) prod_{u=1}^{n-t} (1 - q^(u-n) g)
    """
    if isinstance(P, AlgebraElement):
        if P.algebra != UQ or any(m[0] for m in P.terms):
            raise ValueError("P must be a Laurent polynomial in g")
        poly = P
    else:
        poly = AlgebraElement(UQ, {(0, k): c for k, c in P.items()})
    g = AlgebraElement.monomial(UQ, (0, 1))
    one = AlgebraElement.one(UQ)
    out = TensorElement(UQ, {}, 2)
    for t in range(n + 1):
        left = AlgebraElement.monomial(UQ, (0, t)) * AlgebraElement.monomial(UQ, (n - t, 0))
        right = AlgebraElement.monomial(UQ, (t, 0)) * poly
        for u in range(1, n - t + 1):
            right = right * (one - g.scale(qpow(u - n)))
        out = out + TensorElement.pure(left, right).scale(qbinom(n, t))
    return out


def adjoint_action_uq(h: str, v: AlgebraElement) -> AlgebraElement:
    """Left adjoint action of a generator of U_q(b+) (``"X"``, ``"g"``, ``"g^-1"``)."""
    if v.algebra != UQ:
        raise AlgebraMismatch("adjoint_action_uq acts on U_q(b+)")
    out: Dict[Monomial, object] = {}
    for (n, k), c in v.terms.items():
        if h == "g":
            out[(n, k)] = c * qpow(-n)
        elif h == "g^-1":
            out[(n, k)] = c * qpow(n)
        elif h == "X":
            out[(n + 1, k)] = c * (ONE - qpow(-(n + k)))
        else:
            raise ValueError(f"unknown generator {h!r}")
    return AlgebraElement(UQ, out)


def adjoint_action_classical(h: str, v: AlgebraElement) -> AlgebraElement:
    """Left adjoint action of ``"X"`` or ``"H"`` on U(b+)."""
    if v.algebra != UB:
        raise AlgebraMismatch("adjoint_action_classical acts on U(b+)")
    H = AlgebraElement.monomial(UB, (0, 1))
    one = AlgebraElement.one(UB)
    out = AlgebraElement.zero(UB)
    for (n, m), c in v.terms.items():
        if h == "H":
            out = out + AlgebraElement.monomial(UB, (n, m), c * n)
        elif h == "X":
            diff = H ** m - (H + one) ** m
            out = out + (AlgebraElement.monomial(UB, (n + 1, 0)) * diff).scale(c)
        else:
            raise ValueError(f"unknown generator {h!r}")
    return out


def adjoint_action_brute(h: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """h1 v S(h2)."""
    alg = h.algebra
    out = AlgebraElement.zero(alg)
    for (m1, m2), c in coproduct(h).terms.items():
        out = out + (AlgebraElement.monomial(alg, m1) * v * antipode(AlgebraElement.monomial(alg, m2))).scale(c)
    return out


def coregular_action(pid: PairingId, h: AlgebraElement, a: AlgebraElement) -> AlgebraElement:
    """h |> a = a1 <a2, h>."""
    alg = a.algebra
    if h.algebra not in pid.slots or alg not in pid.slots:
        raise AlgebraMismatch(f"coregular action outside pairing {pid.tag}")
    out: Dict[Monomial, object] = {}
    for (m1, m2), c in coproduct(a).terms.items():
        v = pair_any(pid, AlgebraElement.monomial(alg, m2), h)
        if not is_zero(v):
            w = out.get(m1)
            out[m1] = c * v if w is None else w + c * v
    return AlgebraElement(alg, out)


def tangent_action_on_L(pid: PairingId, a: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """a |> x = <x1, a> x2 (no projection to ker epsilon)."""
    alg = x.algebra
    if a.algebra not in pid.slots or alg not in pid.slots:
        raise AlgebraMismatch(f"tangent action outside pairing {pid.tag}")
    out: Dict[Monomial, object] = {}
    for (m1, m2), c in coproduct(x).terms.items():
        v = pair_any(pid, AlgebraElement.monomial(alg, m1), a)
        if not is_zero(v):
            w = out.get(m2)
            out[m2] = c * v if w is None else w + c * v
    return AlgebraElement(alg, out)
