"""Named verification suites.

Each suite returns a :class:`~qborel.report.SuiteReport`.  The CLI's
``verify`` command and the acceptance tests both go through :data:`SUITES`.
"""

from __future__ import annotations

import warnings
from typing import Callable, Dict, Iterable, List, Optional

from .algebra import (
    CB,
    UB,
    UQ,
    AlgebraElement,
    antipode,
    coproduct,
    coproduct_by_generators,
    counit,
    render,
    specialize_q1,
)
from .calculus import (
    DecompositionFailure,
    base_monomials,
    build,
    check_reduction_data,
    corrupt_eta,
    decompose,
    derivation,
    derivation_closed_form,
    derivation_oracle,
    direct_sum_rank,
    gram_matrix,
    nat_bp_case_split,
    verify_relations,
)
from .coeff import ONE, qpow, verify_qbinom_identity
from .duality import Q_SELFDUAL, adjoint_coaction_closed, adjoint_coaction_direct
from .kappa import verify_kappa
from .report import SuiteReport
from .submod import (
    BoundaryWarning,
    ClassificationPair,
    annihilator_check,
    canonical_crossed_submodule_q,
    canonical_tangent_space_q,
    classical_limit_ideal,
    closure,
    default_truncation,
    intersect,
)

__all__ = ["SUITES", "UnknownSuite", "run_suite", "sets_up_to"]


class UnknownSuite(KeyError):
    pass


def sets_up_to(total: int, exclude_one: bool = False) -> List[frozenset]:
    """Non-empty sets of distinct positive integers with sum <= total."""
    start = 2 if exclude_one else 1
    out = []

    def rec(nxt, acc, s):
        if acc:
            out.append(frozenset(acc))
        for k in range(nxt, total - s + 1):
            rec(k + 1, acc + [k], s + k)

    rec(start, [], 0)
    return sorted(out, key=lambda I: (sum(I), sorted(I)))


def _fmt(I: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(I))) + "}"


def _quiet_closure(*args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryWarning)
        return closure(*args, **kwargs)


# ---------------------------------------------------------------------------
# Hopf structure


def hopf_axioms(degree: int = 6, gpow: int = 3, pair_degree: Optional[int] = None) -> SuiteReport:
    """Coassociativity, counit, antipode and multiplicativity of Delta on X^n g^m."""
    rep = SuiteReport("hopf-axioms", {"degree": degree, "gpow": gpow})
    monos = [AlgebraElement.monomial(UQ, (n, m)) for n in range(degree + 1) for m in range(-gpow, gpow + 1)]
    e_co = rep.entry("coassociativity", "(Delta (x) id) Delta = (id (x) Delta) Delta")
    e_cu = rep.entry("counit", "(eps (x) id) Delta = id = (id (x) eps) Delta")
    e_s = rep.entry("antipode", "S(a_1) a_2 = eps(a) 1 = a_1 S(a_2)")
    e_gen = rep.entry("coproduct-formula", "closed-form Delta(X^n g^m) equals the product of generator coproducts")
    e_mul = rep.entry("algebra-map", "Delta(ab) = Delta(a) Delta(b)")
    one = AlgebraElement.one(UQ)
    for a in monos:
        lab = render(a)
        D = coproduct(a)
        e_co.record(lab, D.leg_map(0, coproduct), D.leg_map(1, coproduct))
        left = AlgebraElement.zero(UQ)
        right = AlgebraElement.zero(UQ)
        sl = AlgebraElement.zero(UQ)
        sr = AlgebraElement.zero(UQ)
        for (m1, m2), c in D.terms.items():
            a1, a2 = AlgebraElement.monomial(UQ, m1), AlgebraElement.monomial(UQ, m2)
            left = left + a2.scale(c * counit(a1))
            right = right + a1.scale(c * counit(a2))
            sl = sl + (antipode(a1) * a2).scale(c)
            sr = sr + (a1 * antipode(a2)).scale(c)
        e_cu.record(f"left {lab}", a, left)
        e_cu.record(f"right {lab}", a, right)
        eps = one.scale(counit(a))
        e_s.record(f"S(a_1)a_2, a={lab}", eps, sl)
        e_s.record(f"a_1S(a_2), a={lab}", eps, sr)
        e_gen.record(lab, D, coproduct_by_generators(a))
    pd = degree if pair_degree is None else pair_degree
    for a in monos:
        for b in monos:
            na, nb = next(iter(a.terms))[0], next(iter(b.terms))[0]
            if na + nb > pd:
                continue
            e_mul.record(f"a={render(a)}, b={render(b)}", coproduct(a) * coproduct(b), coproduct(a * b))
    return rep


def appendix(max_n: int = 5, qbinom_n: int = 10) -> SuiteReport:
    """Closed-form adjoint coaction and the q-binomial product identity."""
    rep = SuiteReport("appendix", {"max_n": max_n, "qbinom_n": qbinom_n})
    e = rep.entry("adjoint-coaction", "closed form of Ad_L(X^n P(g)) equals v_1 S(v_3) (x) v_2")
    polys = {"1": {0: 1}, "g": {1: 1}, "g^-1": {-1: 1}, "1 + g": {0: 1, 1: 1}}
    for n in range(max_n + 1):
        for name, P in polys.items():
            v = AlgebraElement(UQ, {(n, k): c for k, c in P.items()})
            e.record(f"n={n}, P={name}", adjoint_coaction_direct(v), adjoint_coaction_closed(n, P))
    e = rep.entry("qbinom-product", "sum_i qbinom(n,i) q^(i(i+1)/2) x^i = prod_(j=1..n) (1 + q^j x)")
    for n in range(qbinom_n + 1):
        e.record(f"n={n}", True, verify_qbinom_identity(n))
    return rep


# ---------------------------------------------------------------------------
# classification of crossed submodules


def _closure_q(I, trunc, algebra=UQ):
    gens = canonical_crossed_submodule_q(ClassificationPair(I=I, algebra=algebra))
    return _quiet_closure(gens, "crossed", trunc, algebra=algebra)


def classification(total: int = 6) -> SuiteReport:
    """Codimensions, intersections, tangent dimensions and annihilators of the q-classification."""
    rep = SuiteReport("classification", {"total": total})
    e_cod = rep.entry("codim", "codim M(1, I) = sum(I)")
    e_ker = rep.entry("codim-ker", "M(1, I) lies in ker eps with codim sum(I) - 1 when 1 in I")
    e_int = rep.entry("intersection", "M(1, I) is the intersection of the M(1, {n}), n in I")
    e_tan = rep.entry("tangent-dim", "dim L(I) = sum(I)")
    e_ann = rep.entry("annihilator", "<L(I), M(1, I + {1})> = 0")
    e_warn = rep.entry("warnings", "closures report no unresolved truncation losses")
    for I in sets_up_to(total):
        trunc = default_truncation(I)
        M = _closure_q(I, trunc)
        lab = _fmt(I)
        e_warn.record(f"M(1,{lab})", [], M.warnings)
        e_cod.record(lab, sum(I), M.codim())
        if 1 in I:
            e_ker.record(lab, (True, sum(I) - 1), (M.in_kernel(), M.codim_in_kernel()))
        if len(I) > 1:
            parts = [_closure_q({n}, trunc) for n in sorted(I)]
            acc = parts[0]
            for p in parts[1:]:
                acc = intersect(acc, p)
            e_int.record(lab, True, acc == M)
        if 1 not in I:
            L = _quiet_closure(canonical_tangent_space_q(I), "tangent_q", trunc, kernel_only=True, algebra=UQ)
            e_warn.record(f"L({lab})", [], L.warnings)
            e_tan.record(lab, sum(I), L.dim)
    for I in ({2}, {3}, {2, 3}):
        full = set(I) | {1}
        M = _closure_q(full, default_truncation(full))
        e_ann.record(_fmt(I), True, annihilator_check(M, canonical_tangent_space_q(I), Q_SELFDUAL))
    # control: the wrong partner does not annihilate
    M13 = _closure_q({1, 3}, default_truncation({1, 3}))
    e_ann.record("L({2}) vs M(1,{1,3}) is non-zero", False, annihilator_check(M13, canonical_tangent_space_q({2}), Q_SELFDUAL))
    return rep


# ---------------------------------------------------------------------------
# bicovariant calculi on U_q(b+)


def _closed_vs_oracle(c, D: int, entry) -> None:
    for m in base_monomials(c.algebra, D):
        a = AlgebraElement.monomial(c.algebra, m)
        for lab, x in zip(c.labels, c.tangent_basis):
            entry.record(f"partial_{lab}({render(a)})", derivation_oracle(x, a), derivation_closed_form(c, lab, a))


def qcalc(ns: Iterable[int] = (2, 3, 4, 5), D: int = 4, closed_degree: int = 5) -> SuiteReport:
    """Duality, relations, derivation formulas and decomposition for q(n)."""
    ns = list(ns)
    rep = SuiteReport("thm-qcalc-relations", {"n": ns, "degree": D, "closed_degree": closed_degree})
    for n in ns:
        c = build("q", n)
        sub = verify_relations(c, D)
        for e in sub.entries:
            e.id = f"q({n}):{e.id}"
        rep.extend(sub)
        e = rep.entry(f"q({n}):reduction", "M is closed and has codimension n + 1")
        e.record(f"q({n})", True, check_reduction_data(c))
        e = rep.entry(f"q({n}):closed-form", "closed-form q-derivations = pairing-oracle derivations")
        _closed_vs_oracle(c, closed_degree, e)
    e = rep.entry("decomposition", "the calculus for {2,3} is the direct sum of q(2) and q(3)")
    parts = decompose({2, 3})
    e.record("dims", [2, 3], [p.dim for p in parts])
    qs = build("q_set", {2, 3})
    e.record("total", 5, qs.dim)
    e.record("gram", True, all(v == (1 if i == j else 0) for i, row in enumerate(gram_matrix(qs)) for j, v in enumerate(row)))
    return rep


def two_dim(D: int = 5) -> SuiteReport:
    """The 2-dimensional calculus q(2), relations and d on monomials up to degree D."""
    c = build("q", 2)
    rep = verify_relations(c, D)
    rep.suite = "corollary-2dim"
    e = rep.entry("unique", "the only I with sum(I) = 2 is {2}")
    e.record("sets", [frozenset({2})], sets_up_to(2, exclude_one=True))
    return rep


# ---------------------------------------------------------------------------
# classical limit on C(B+)


def classical(ns: Iterable[int] = (2, 3, 4), D: int = 5) -> SuiteReport:
    ns = list(ns)
    rep = SuiteReport("classical", {"n": ns, "degree": D})
    e_lim = rep.entry("q-to-1", "q -> 1 of the q(n) derivations gives the classical ones (partial_0 rescaled)")
    e_cf = rep.entry("closed-form", "classical closed-form derivations = reduction derivations")
    for n in ns:
        qc, cc = build("q", n), build("classical_CBp", {1, n})
        rescale = ONE / (qpow(n - 1) - ONE)
        for m in base_monomials(CB, D):
            a = AlgebraElement.monomial(CB, m)
            for lab in cc.labels:
                want = derivation_closed_form(cc, lab, {m: 1})
                e_cf.record(f"n={n}, partial_{lab}({render(a)})", want, derivation(cc, lab, a))
                got = derivation_closed_form(qc, lab, {m: 1})
                if lab == 0:
                    got = got.scale(rescale)
                e_lim.record(f"n={n}, partial_{lab}({render(a)})", want, specialize_q1(got))
        sub = verify_relations(cc, min(D, 4))
        for e in sub.entries:
            e.id = f"CB{_fmt({1, n})}:{e.id}"
        rep.extend(sub)
    e = rep.entry("degeneracy", "at q = 1 the generators for (1, {2}) already lie in ker eps")
    trunc = default_truncation({2})
    e.record("C(B+)", True, _closure_q({2}, trunc, CB).in_kernel())
    e.record("U_q(b+)", False, _closure_q({2}, trunc, UQ).in_kernel())
    try:
        ClassificationPair(I={2}, algebra=CB, kernel=True)
        e.record("C(B+) pair accepted", True, True)
    except ValueError as exc:
        e.record("C(B+) pair accepted", True, str(exc))
    try:
        ClassificationPair(I={2}, algebra=UQ, kernel=True)
        e.record("U_q(b+) pair rejected", "ValueError", "accepted")
    except ValueError:
        e.record("U_q(b+) pair rejected", "ValueError", "ValueError")
    e = rep.entry("direct-sum", "the direct sum for {2,3} holds for generic q and fails at q = 1")
    e.record("q rank", (5, 5), direct_sum_rank({2, 3}))
    r, total = direct_sum_rank({2, 3}, classical=True)
    e.record("q=1 rank deficient", True, r < total)
    try:
        decompose({2, 3}, classical=True)
        e.record("q=1 decompose", "DecompositionFailure", "split")
    except DecompositionFailure:
        e.record("q=1 decompose", "DecompositionFailure", "DecompositionFailure")
    return rep


# ---------------------------------------------------------------------------
# U(b+) side


def _closure_ub(I, trunc):
    return _quiet_closure(classical_limit_ideal(I), "ideal", trunc, algebra=UB)


def dual_classical(total: int = 6, ns: Iterable[int] = (2, 3, 4), D: int = 4) -> SuiteReport:
    ns = list(ns)
    rep = SuiteReport("dual-classical", {"total": total, "n": ns, "degree": D})
    e_cod = rep.entry("replacement-codim", "1 - q^(1-n) g -> H + n - 1 preserves codimension")
    e_int = rep.entry("replacement-intersection", "the replacement map preserves intersections")
    e_warn = rep.entry("warnings", "closures report no unresolved truncation losses")
    for I in sets_up_to(total):
        lab = _fmt(I)
        trunc_q, trunc_u = default_truncation(I), default_truncation(I, UB)
        M = _closure_ub(I, trunc_u)
        e_warn.record(lab, [], M.warnings)
        e_cod.record(lab, _closure_q(I, trunc_q).codim(), M.codim())
        if len(I) > 1:
            acc = None
            for n in sorted(I):
                part = _closure_ub({n}, trunc_u)
                acc = part if acc is None else intersect(acc, part)
            e_int.record(lab, True, acc == M)
    for n in ns:
        c = build("dual_classical", n)
        sub = verify_relations(c, D)
        for e in sub.entries:
            e.id = f"dual({n}):{e.id}"
        rep.extend(sub)
        e = rep.entry(f"dual({n}):closed-form", "difference-operator derivations = pairing-oracle derivations")
        _closed_vs_oracle(c, D, e)
    split = nat_bp_case_split()
    e = rep.entry("nat_bp-uniqueness", "only alpha = beta = 0 keeps H and X outside a codim-2 M")
    e.record("unique", True, split["unique"])
    e.record("allowed", True, bool(split["allowed"]) and all(a == "0" and b == "0" for a, b, _ in split["allowed"]))
    e.record("matches", True, split["matches_nat_bp"])
    nat = build("nat_bp")
    sub = verify_relations(nat, D)
    for e in sub.entries:
        e.id = f"nat_bp:{e.id}"
    rep.extend(sub)
    e = rep.entry("nat_bp:closed-form", "partial derivatives = pairing-oracle derivations")
    _closed_vs_oracle(nat, D, e)
    return rep


# ---------------------------------------------------------------------------
# kappa-Minkowski


def kappa_suite(ns: Iterable[int] = (2, 3, 4), D: int = 4) -> SuiteReport:
    ns = list(ns)
    rep = SuiteReport("kappa", {"n": ns, "degree": D})
    for n in ns:
        sub = verify_kappa(n, D)
        for e in sub.entries:
            e.id = f"kappa({n}):{e.id}"
        rep.extend(sub)
    return rep


# ---------------------------------------------------------------------------
# negative controls

_CONTROL_FAMILIES = (("q", 2), ("q", 3), ("classical_CBp", frozenset({1, 2})), ("dual_classical", 2), ("nat_bp",), ("kappa", 2))


def negative_controls(D: int = 2) -> SuiteReport:
    """Every corrupted eta and every doubled relation coefficient must be detected."""
    rep = SuiteReport("negative-controls", {"degree": D})
    e_eta = rep.entry("corrupt-eta", "rescaling one eta representative breaks the suite")
    e_rel = rep.entry("corrupt-relation", "doubling one relation coefficient breaks that relation")
    for fam in _CONTROL_FAMILIES:
        c = build(*fam)
        name = f"{c.family}{tuple(map(str, c.params))}"
        for lab in c.labels:
            bad = verify_relations(corrupt_eta(c, lab), D, leibniz_degree=2, oracle_degree=2)
            e_eta.record(f"{name} eta_{lab}", False, bad.passed)
        clean = verify_relations(c, D, leibniz_degree=2, oracle_degree=2)
        e_rel.record(f"{name} clean", True, clean.passed)
        for entry in clean.entries:
            bad = verify_relations(c, D, corrupt=entry.id, leibniz_degree=2, oracle_degree=2)
            e_rel.record(f"{name} {entry.id}", False, bad.get(entry.id).passed)
    return rep


def relations(family: str = "q", n: int = 2, I: Optional[Iterable[int]] = None, D: int = 4) -> SuiteReport:
    """verify_relations for one calculus, selected like :func:`~qborel.calculus.build`."""
    if family in ("q_set", "classical_CBp"):
        c = build(family, set(I or {1, n}))
    elif family == "nat_bp":
        c = build("nat_bp")
    elif family == "q" and I is not None and len(set(I)) > 1:
        c = build("q_set", set(I))
    else:
        c = build(family, n)
    return verify_relations(c, D)


# ---------------------------------------------------------------------------
# registry

SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "hopf-axioms": hopf_axioms,
    "appendix": appendix,
    "classification": classification,
    "thm-qcalc-relations": qcalc,
    "corollary-2dim": two_dim,
    "classical": classical,
    "dual-classical": dual_classical,
    "kappa": kappa_suite,
    "negative-controls": negative_controls,
    "relations": relations,
}


def run_suite(name: str, **params) -> SuiteReport:
    """Run a registered suite; unknown names raise :class:`UnknownSuite`."""
    try:
        fn = SUITES[name]
    except KeyError:
        raise UnknownSuite(name) from None
    return fn(**params)

