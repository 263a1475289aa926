"""Graded subspaces of truncated algebras, operator closures and the
canonical generators of the classified submodules.

Everything infinite-dimensional is studied inside a :class:`Truncation`: a
bound on the X-type degree and a window for the second exponent (powers of g,
of H, or of x0).  Closures discard operator outputs that leave the window.
When a discarded output cannot be accounted for by a g-shift of something
already in the space, a :class:`BoundaryWarning` is recorded and any
codimension read off the result is not trustworthy.
"""

from __future__ import annotations

import warnings as _warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    CB,
    UB,
    UQ,
    AlgebraElement,
    AlgebraId,
    AlgebraMismatch,
    Monomial,
    coproduct,
    counit,
    identity_monomial,
    xdegree,
)
from .coeff import is_zero, qpow
from .duality import (
    PairingId,
    adjoint_action_classical,
    adjoint_action_uq,
    adjoint_coaction_closed,
    adjoint_coaction_direct,
    pair_any,
)
from .linalg import Echelon, Vector, axpy, inverse, kernel

__all__ = [
    "TruncationError",
    "BoundaryWarning",
    "Truncation",
    "GradedSubspace",
    "ClassificationPair",
    "DualClassificationPair",
    "default_truncation",
    "span",
    "closure",
    "intersect",
    "canonical_crossed_submodule_q",
    "canonical_tangent_space_q",
    "canonical_ideal_classical",
    "classical_limit_ideal",
    "annihilator_check",
    "subcomodule_check_CBp",
    "FAMILIES",
]


class TruncationError(ValueError):
    """Element or operand does not fit the stated truncation."""


class BoundaryWarning(UserWarning):
    """A closure may be incomplete because outputs left the truncation."""


@dataclass(frozen=True)
class Truncation:
    """Finite window: X-type degree <= ``max_xdeg`` and second exponent in [lo, hi].

    The second exponent is the power of g (U_q(b+), C(B+)), of H (U(b+)) or of
    x0 (U(b_{n+})).  For U(b_{n+}) ``max_xdeg`` bounds the total degree in
    x_1..x_{n-1}.
    """

    max_xdeg: int
    lo: int
    hi: int

    def __post_init__(self):
        if self.max_xdeg < 0 or self.lo > self.hi:
            raise ValueError(f"bad truncation {self}")

    def contains(self, alg: AlgebraId, m: Monomial) -> bool:
        second = m[1] if alg.tag in ("Uq_bplus", "C_Bplus", "U_bplus") else m[0]
        return xdegree(alg, m) <= self.max_xdeg and self.lo <= second <= self.hi

    def monomials(self, alg: AlgebraId) -> List[Monomial]:
        if alg.tag in ("Uq_bplus", "C_Bplus", "U_bplus"):
            return [(n, s) for n in range(self.max_xdeg + 1) for s in range(self.lo, self.hi + 1)]
        if alg.tag == "U_bnplus":
            out = []
            for rest in iproduct(range(self.max_xdeg + 1), repeat=alg.n - 1):
                if sum(rest) <= self.max_xdeg:
                    out.extend((s,) + rest for s in range(self.lo, self.hi + 1))
            return out
        raise TruncationError(f"no truncation model for {alg}")

    def dim(self, alg: AlgebraId) -> int:
        return len(self.monomials(alg))


def default_truncation(I: Iterable[int], algebra: AlgebraId = UQ) -> Truncation:
    s = sum(I)
    if algebra.tag in ("U_bplus", "U_bnplus"):
        return Truncation(s + 2, 0, s + 2)
    return Truncation(s + 2, -s - 2, s + 2)


def _grade(grading: str, alg: AlgebraId, m: Monomial):
    if grading == "xdeg":
        return m[1:] if alg.tag == "U_bnplus" else m[0]
    if grading == "total":
        return m[0] + m[1]
    return 0


class GradedSubspace:
    """Subspace of a truncated algebra, one echelon block per grade."""

    def __init__(self, algebra: AlgebraId, truncation: Truncation, grading: str = "xdeg"):
        self.algebra = algebra
        self.truncation = truncation
        self.grading = grading
        self.blocks: Dict[object, Echelon] = {}
        self.warnings: List[str] = []

    def _split(self, v: Vector) -> Dict[object, Vector]:
        parts: Dict[object, Vector] = {}
        for m, c in v.items():
            if not self.truncation.contains(self.algebra, m):
                raise TruncationError(f"monomial {m} outside {self.truncation}")
            parts.setdefault(_grade(self.grading, self.algebra, m), {})[m] = c
        return parts

    def _vec(self, a) -> Vector:
        if isinstance(a, AlgebraElement):
            if a.algebra != self.algebra:
                raise AlgebraMismatch(f"{a.algebra} vs {self.algebra}")
            return dict(a.terms)
        return dict(a)

    def add(self, a) -> List[Vector]:
        """Insert the graded components of ``a``; return the ones that were new."""
        new = []
        for key, part in self._split(self._vec(a)).items():
            block = self.blocks.setdefault(key, Echelon())
            if block.insert(part)[0]:
                new.append(part)
        return new

    def reduce(self, a) -> Vector:
        """Canonical remainder of ``a`` modulo the space."""
        out: Vector = {}
        for key, part in self._split(self._vec(a)).items():
            block = self.blocks.get(key)
            out.update(block.reduce(part)[0] if block else part)
        return out

    def contains(self, a) -> bool:
        try:
            return not self.reduce(a)
        except TruncationError:
            return False

    @property
    def dim(self) -> int:
        return sum(len(b) for b in self.blocks.values())

    def codim(self) -> int:
        return self.truncation.dim(self.algebra) - self.dim

    def codim_in_kernel(self) -> int:
        """Codimension inside ker(epsilon) intersected with the truncation."""
        return self.codim() - 1

    def basis(self) -> List[AlgebraElement]:
        return [AlgebraElement(self.algebra, r) for b in self.blocks.values() for r in b.basis()]

    def block_dims(self) -> Dict[object, int]:
        return {k: len(b) for k, b in sorted(self.blocks.items()) if len(b)}

    def copy(self) -> "GradedSubspace":
        s = GradedSubspace(self.algebra, self.truncation, self.grading)
        s.blocks = {k: b.copy() for k, b in self.blocks.items()}
        s.warnings = list(self.warnings)
        return s

    def issubset(self, other: "GradedSubspace") -> bool:
        return all(other.contains(b) for b in self.basis())

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.truncation == other.truncation
            and self.dim == other.dim
            and self.issubset(other)
        )

    def in_kernel(self) -> bool:
        return all(is_zero(counit(b)) for b in self.basis())

    def __repr__(self):
        return f"GradedSubspace({self.algebra}, {self.truncation}, dim={self.dim}, warnings={len(self.warnings)})"


def span(gens: Iterable, algebra: AlgebraId, truncation: Truncation, grading: str = "none") -> GradedSubspace:
    s = GradedSubspace(algebra, truncation, grading)
    for a in gens:
        s.add(a)
    return s


# ---------------------------------------------------------------------------
# operator families


@lru_cache(maxsize=None)
def _adl_legs(alg: AlgebraId, m: Monomial) -> Tuple[Tuple[Monomial, Tuple[Tuple[Monomial, object], ...]], ...]:
    """Right legs of Ad_L(m) grouped by left-leg basis monomial."""
    if alg == UQ:
        t = adjoint_coaction_closed(m[0], {m[1]: 1})
    else:
        t = adjoint_coaction_direct(AlgebraElement.monomial(alg, m))
    groups: Dict[Monomial, Dict[Monomial, object]] = {}
    for (l, r), c in t.terms.items():
        groups.setdefault(l, {})[r] = c
    return tuple((l, tuple(v.items())) for l, v in groups.items())


@lru_cache(maxsize=None)
def _coproduct_legs(alg: AlgebraId, m: Monomial):
    groups: Dict[Monomial, Dict[Monomial, object]] = {}
    for (l, r), c in coproduct(AlgebraElement.monomial(alg, m)).terms.items():
        groups.setdefault(l, {})[r] = c
    return tuple((l, tuple(v.items())) for l, v in groups.items())


def _legs(table_fn, alg: AlgebraId, v: Vector) -> List[Vector]:
    groups: Dict[Monomial, Vector] = {}
    for m, c in v.items():
        for l, right in table_fn(alg, m):
            g = groups.setdefault(l, {})
            for r, d in right:
                x = g.get(r)
                x = c * d if x is None else x + c * d
                if is_zero(x):
                    g.pop(r, None)
                else:
                    g[r] = x
    return [g for g in groups.values() if g]


def _left_mul(alg: AlgebraId, gen: Monomial, v: Vector) -> Vector:
    return dict((AlgebraElement.monomial(alg, gen) * AlgebraElement(alg, v)).terms)


def _project_kernel(alg: AlgebraId, v: Vector) -> Vector:
    e = counit(AlgebraElement(alg, v))
    if is_zero(e):
        return v
    out = dict(v)
    one = identity_monomial(alg)
    x = out.get(one, alg.scalar(0)) - e
    if is_zero(x):
        out.pop(one, None)
    else:
        out[one] = x
    return out


def _ops_crossed(alg, v, kernel_only):
    out = [_left_mul(alg, (1, 0), v), _left_mul(alg, (0, 1), v), _left_mul(alg, (0, -1), v)]
    out += _legs(_adl_legs, alg, v)
    return out


def _ops_ideal(alg, v, kernel_only):
    return [_left_mul(alg, gen, v) for gen in alg.generators().values()]


def _ops_tangent_q(alg, v, kernel_only):
    e = AlgebraElement(alg, v)
    outs = [dict(adjoint_action_uq(h, e).terms) for h in ("X", "g", "g^-1")]
    outs += _legs(_coproduct_legs, alg, v)
    if kernel_only:
        outs = [_project_kernel(alg, w) for w in outs]
    return outs


def _ops_tangent_classical(alg, v, kernel_only):
    e = AlgebraElement(alg, v)
    outs = [dict(adjoint_action_classical(h, e).terms) for h in ("X", "H")]
    outs += _legs(_coproduct_legs, alg, v)
    if kernel_only:
        outs = [_project_kernel(alg, w) for w in outs]
    return outs


#: operator family id -> (algebras, operator function, whether g-shifts resolve boundary losses)
FAMILIES: Dict[str, Tuple[Tuple[str, ...], Callable, bool]] = {
    "crossed": (("Uq_bplus", "C_Bplus"), _ops_crossed, True),
    "ideal": (("U_bplus", "U_bnplus", "Uq_bplus", "C_Bplus"), _ops_ideal, True),
    "tangent_q": (("Uq_bplus",), _ops_tangent_q, False),
    "tangent_classical": (("U_bplus",), _ops_tangent_classical, False),
}


def _gshifts(alg: AlgebraId, v: Vector, trunc: Truncation) -> Iterable[Vector]:
    """All g-power left multiples of ``v`` that fit in the window."""
    if alg.tag not in ("Uq_bplus", "C_Bplus"):
        return []
    lo = min(m[1] for m in v)
    hi = max(m[1] for m in v)
    out = []
    for j in range(trunc.lo - lo, trunc.hi - hi + 1):
        out.append(_left_mul(alg, (0, j), v))
    return out


def _homogeneous(grading: str, alg: AlgebraId, vs: List[Vector]) -> bool:
    return all(len({_grade(grading, alg, m) for m in v}) <= 1 for v in vs)


def closure(
    gens: Sequence,
    ops: str,
    trunc: Truncation,
    kernel_only: bool = False,
    grading: Optional[str] = None,
    algebra: Optional[AlgebraId] = None,
) -> GradedSubspace:
    """Least subspace of the truncation containing ``gens`` and stable under ``ops``.

    ``ops`` is one of :data:`FAMILIES`.  Outputs leaving the truncation are
    discarded; unexplained losses are listed in ``result.warnings``.
    """
    gens = list(gens)
    alg = algebra or (gens[0].algebra if gens else None)
    if alg is None:
        raise ValueError("closure of an empty list needs an explicit algebra")
    gens = [g for g in gens if not g.is_zero()]
    tags, opfn, shift_resolves = FAMILIES[ops]
    if alg.tag not in tags:
        raise AlgebraMismatch(f"operator family {ops} does not act on {alg}")
    vecs = [dict(g.terms) for g in gens]
    for v in vecs:
        for m in v:
            if not trunc.contains(alg, m):
                raise TruncationError(f"generator term {m} outside {trunc}")
    if grading is None:
        grading = "xdeg"
        # the crossed and tangent families separate X-degrees themselves; a
        # left ideal with inhomogeneous generators does not
        if ops == "ideal" and not _homogeneous("xdeg", alg, vecs):
            grading = "none"
    space = GradedSubspace(alg, trunc, grading)
    queue = deque()
    for v in vecs:
        queue.extend(space.add(v))
    lost: List[Vector] = []
    while queue:
        v = queue.popleft()
        for w in opfn(alg, v, kernel_only):
            if not w:
                continue
            if all(trunc.contains(alg, m) for m in w):
                queue.extend(space.add(w))
                continue
            if ops == "crossed" and max(m[0] for m in w) > trunc.max_xdeg:
                # legs of an overflowing element are still in the submodule
                for leg in _legs(_adl_legs, alg, w):
                    if all(trunc.contains(alg, m) for m in leg):
                        queue.extend(space.add(leg))
            lost.append(w)
    space.warnings = _unresolved(space, lost, ops, shift_resolves)
    for msg in space.warnings[:1]:
        _warnings.warn(msg, BoundaryWarning, stacklevel=2)
    return space


def _unresolved(space: GradedSubspace, lost: List[Vector], ops: str, shift_resolves: bool) -> List[str]:
    alg, trunc = space.algebra, space.truncation
    msgs = []
    seen = set()
    gens_cache: Dict[int, Optional[Dict[int, object]]] = {}
    for w in lost:
        key = tuple(sorted(w))
        if key in seen:
            continue
        seen.add(key)
        over_x = max(xdegree(alg, m) for m in w) > trunc.max_xdeg
        if over_x:
            if ops == "ideal":
                continue
            if ops == "crossed":
                top = [m for m in trunc.monomials(alg) if m[0] == trunc.max_xdeg]
                if space.blocks.get(trunc.max_xdeg) is not None and len(space.blocks[trunc.max_xdeg]) == len(top):
                    continue
            msgs.append(f"x-degree overflow discarded: {sorted(w)[:3]}")
            continue
        if ops == "ideal" and alg.tag in ("U_bplus", "U_bnplus"):
            # left multiplication never lowers the H / x0 degree
            continue
        if shift_resolves and any(space.contains(s) for s in _gshifts(alg, w, trunc)):
            continue
        if shift_resolves and alg.tag in ("Uq_bplus", "C_Bplus") and space.grading == "xdeg":
            if all(_divisible(_block_generator(space, d, gens_cache), part) for d, part in _by_xdeg(w).items()):
                continue
        msgs.append(f"window overflow discarded: {sorted(w)[:3]}")
    return msgs


def _by_xdeg(w: Vector) -> Dict[int, Dict[int, object]]:
    out: Dict[int, Dict[int, object]] = {}
    for (d, e), c in w.items():
        out.setdefault(d, {})[e] = c
    return out


def _block_generator(space: GradedSubspace, d: int, cache) -> Optional[Dict[int, object]]:
    """Lowest-top element of an X-degree block, as g-exponent -> coefficient.

    Each block is a truncated module over Laurent polynomials in g, so the
    element with the smallest top exponent divides every other member.
    """
    if d in cache:
        return cache[d]
    block = space.blocks.get(d)
    pivots: Dict[int, Dict[int, object]] = {}
    for row in (block.basis() if block is not None else []):
        v = {m[1]: c for m, c in row.items()}
        while v:
            top = max(v)
            h = pivots.get(top)
            if h is None:
                pivots[top] = v
                break
            axpy(v, -(v[top] * inverse(h[top])), h)
    cache[d] = pivots[min(pivots)] if pivots else None
    return cache[d]


def _divisible(h: Optional[Dict[int, object]], w: Dict[int, object]) -> bool:
    if h is None:
        return False
    w = dict(w)
    htop, hlow = max(h), min(h)
    lead = inverse(h[htop])
    while w:
        top = max(w)
        if top - min(w) < htop - hlow:
            return False
        shift = top - htop
        axpy(w, -(w[top] * lead), {e + shift: c for e, c in h.items()})
    return True


def intersect(a: GradedSubspace, b: GradedSubspace) -> GradedSubspace:
    """Exact intersection, block by block."""
    if a.algebra != b.algebra or a.truncation != b.truncation:
        raise TruncationError("intersect needs equal algebra and truncation")
    out = GradedSubspace(a.algebra, a.truncation, a.grading if a.grading == b.grading else "none")
    basis = a.basis()
    rems = [b.reduce(v) for v in basis]
    for rel in kernel(rems):
        v: Dict = {}
        for i, c in rel.items():
            for m, d in basis[i].terms.items():
                x = v.get(m)
                v[m] = c * d if x is None else x + c * d
        out.add({m: c for m, c in v.items() if not is_zero(c)})
    out.warnings = a.warnings + b.warnings
    return out


# ---------------------------------------------------------------------------
# classification data


def _is_gpoly(alg: AlgebraId, P: AlgebraElement) -> bool:
    return all(m[0] == 0 for m in P.terms)


@dataclass(frozen=True)
class ClassificationPair:
    """(P, I): P a polynomial in g with P(0) = 1, I a finite set of positive integers.

    ``P`` maps g-exponents to coefficients.  ``kernel=True`` additionally
    enforces the ker(epsilon) constraint appropriate to ``algebra``.
    """

    P: Tuple[Tuple[int, object], ...]
    I: FrozenSet[int]
    algebra: AlgebraId = UQ
    kernel: bool = False

    def __init__(self, P=None, I=(), algebra: AlgebraId = UQ, kernel: bool = False):
        if P is None:
            P = {0: 1}
        if isinstance(P, AlgebraElement):
            if not _is_gpoly(P.algebra, P):
                raise ValueError("P must be a polynomial in g")
            P = {m[1]: c for m, c in P.terms.items()}
        P = {k: algebra.scalar(c) for k, c in dict(P).items() if not is_zero(algebra.scalar(c))}
        if any(k < 0 for k in P) or P.get(0) != 1:
            raise ValueError("P must have no negative powers and P(0) = 1")
        I = frozenset(I)
        if any((not isinstance(n, int)) or n < 1 for n in I):
            raise ValueError("I must be a finite set of positive integers")
        object.__setattr__(self, "P", tuple(sorted(P.items())))
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "kernel", kernel)
        if kernel:
            divisible = is_zero(sum((c for _, c in self.P), algebra.scalar(0)))
            if algebra == UQ:
                ok = divisible or 1 in I
                need = "(1-g) | P or 1 in I"
            else:
                ok = divisible or bool(I)
                need = "(1-g) | P or I non-empty"
            if not ok:
                raise ValueError(f"ker(epsilon) variant requires {need}")

    def poly(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, {(0, k): c for k, c in self.P})


@dataclass(frozen=True)
class DualClassificationPair:
    """(l, I) for crossed submodules of U(b+)."""

    l: int
    I: FrozenSet[int]
    kernel: bool = False

    def __init__(self, l: int, I=(), kernel: bool = False):
        if l < 0:
            raise ValueError("l must be >= 0")
        I = frozenset(I)
        if any(n < 1 for n in I):
            raise ValueError("I must contain positive integers")
        if kernel and l == 0 and not I:
            raise ValueError("ker(epsilon) variant requires l != 0 or I non-empty")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "kernel", kernel)


def _linear_factor(alg: AlgebraId, n: int) -> AlgebraElement:
    """1 - q^(1-n) g (just 1 - g over C(B+))."""
    c = qpow(1 - n) if alg == UQ else Fraction(1)
    return AlgebraElement(alg, {(0, 0): 1, (0, 1): -c})


def canonical_crossed_submodule_q(pair: ClassificationPair) -> List[AlgebraElement]:
    """Degree-by-degree generators of M(P, I).

    Row d is X^d P(g) times the product of (1 - q^(1-n) g) over n in I with
    n > d; rows d = 0 .. max(I) generate M by left multiplication with
    Laurent polynomials in g.
    """
    alg = pair.algebra
    P = pair.poly()
    top = max(pair.I, default=0)
    rows = []
    for d in range(top, -1, -1):
        e = AlgebraElement.monomial(alg, (d, 0)) * P
        for n in sorted(pair.I, reverse=True):
            if n > d:
                e = e * _linear_factor(alg, n)
        rows.append(e)
    return rows


def canonical_tangent_space_q(I: Iterable[int], normalization: str = "listed") -> List[AlgebraElement]:
    """Spanning elements of the tangent space L(I) in ker(epsilon) of U_q(b+).

    For each n: g^(1-n) - 1 and c_k X^k g^(1-n) for k = 1..n-1, with
    c_k = q^(k(k-1)) / [k]_q! (``"listed"``) or q^(k(k-1)/2) / [k]_q!
    (``"dual"``, the exact dual of X^k under the self-duality pairing).
    """
    from .coeff import qfact

    out = []
    for n in sorted(I):
        if n < 2:
            raise ValueError("tangent spaces in ker(epsilon) need n >= 2")
        out.append(AlgebraElement(UQ, {(0, 1 - n): 1, (0, 0): -1}))
        for k in range(1, n):
            e = k * (k - 1) if normalization == "listed" else k * (k - 1) // 2
            out.append(AlgebraElement(UQ, {(k, 1 - n): qpow(e) / qfact(k)}))
    return out


def canonical_ideal_classical(pair: DualClassificationPair, trunc: Optional[Truncation] = None) -> List[AlgebraElement]:
    """Generators of the crossed U(b+)-submodule L(l, I).

    The monomials X^a H^b in L form a staircase whose row b has length
    n_(m - b + l) for I = {n_1 < ... < n_m} (rows below l are infinite).  The
    generators are the corners X^(n_j - 1) H^(l + m - j), plus
    X^(n_m + k) H^(l - 1) for all k >= 0 when l > 0 (listed up to the
    truncation's X-degree).
    """
    ns = sorted(pair.I)
    m = len(ns)
    out = [AlgebraElement.monomial(UB, (n - 1, pair.l + m - j)) for j, n in enumerate(ns, start=1)]
    if pair.l > 0:
        start = ns[-1] if ns else 0
        stop = trunc.max_xdeg if trunc is not None else start
        out += [AlgebraElement.monomial(UB, (k, pair.l - 1)) for k in range(start, stop + 1)]
    if pair.kernel:
        from .algebra import counit_projection

        out = [counit_projection(e) for e in out]
        out = [e for e in out if not e.is_zero()]
    return out


def classical_limit_ideal(I: Iterable[int], kernel: bool = False) -> List[AlgebraElement]:
    """U(b+) left-ideal generators from the rows of M(1, I), 1 - q^(1-n) g -> H + n - 1."""
    I = set(I)
    if kernel:
        I.add(1)
    H = AlgebraElement.monomial(UB, (0, 1))
    one = AlgebraElement.one(UB)
    top = max(I, default=0)
    rows = []
    for d in range(top, -1, -1):
        e = AlgebraElement.monomial(UB, (d, 0))
        for n in sorted(I, reverse=True):
            if n > d:
                e = e * (H + one.scale(n - 1))
        rows.append(e)
    return rows


def annihilator_check(M: GradedSubspace, L: Sequence[AlgebraElement], pid: PairingId) -> bool:
    """True iff <x, m> = 0 for every x in L and every basis vector m of M."""
    basis = M.basis()
    for x in L:
        for m in basis:
            if not is_zero(pair_any(pid, x, m)):
                return False
    return True


def subcomodule_check_CBp(S: GradedSubspace) -> bool:
    """Graded by n + m on X^n g^m and stable under d/dX."""
    if S.algebra != CB:
        raise AlgebraMismatch("subcomodule check is for C(B+)")
    for b in S.basis():
        grades: Dict[int, Dict] = {}
        for m, c in b.terms.items():
            grades.setdefault(m[0] + m[1], {})[m] = c
        for part in grades.values():
            if not S.contains(part):
                return False
        deriv = {(n - 1, s): c * n for (n, s), c in b.terms.items() if n > 0}
        if deriv and not S.contains(deriv):
            return False
    return True
