import warnings

import pytest
from hypothesis import given, settings, strategies as st

from qborel.algebra import CB, UB, UQ, AlgebraElement, AlgebraMismatch
from qborel.coeff import qpow
from qborel.duality import Q_SELFDUAL
from qborel.submod import (
    BoundaryWarning,
    ClassificationPair,
    DualClassificationPair,
    Truncation,
    TruncationError,
    annihilator_check,
    canonical_crossed_submodule_q,
    canonical_ideal_classical,
    canonical_tangent_space_q,
    classical_limit_ideal,
    closure,
    default_truncation,
    intersect,
    span,
    subcomodule_check_CBp,
)


def M(alg, *k, c=1):
    return AlgebraElement.monomial(alg, k, c)


X, g, ginv, one = M(UQ, 1, 0), M(UQ, 0, 1), M(UQ, 0, -1), AlgebraElement.one(UQ)
H, Xu, uone = M(UB, 0, 1), M(UB, 1, 0), AlgebraElement.one(UB)


def lin(n, alg=UQ):
    c = qpow(1 - n) if alg == UQ else 1
    return AlgebraElement.one(alg) - AlgebraElement.gen(alg, "g").scale(c)


def crossed(I, alg=UQ, trunc=None):
    trunc = trunc or default_truncation(I)
    return closure(canonical_crossed_submodule_q(ClassificationPair(I=I, algebra=alg)), "crossed", trunc, algebra=alg)


class TestClosure:
    def test_generated_by_xk_and_linear_factor(self):
        S = closure([X * X, lin(2)], "crossed", Truncation(6, -3, 6))
        assert S.warnings == []
        assert S.codim() == 2

    def test_nat_bp_ideal(self):
        S = closure([H * H, Xu * H, Xu * Xu], "ideal", Truncation(6, 0, 6))
        assert S.warnings == []
        assert S.codim() == 3

    def test_zero_generators(self):
        assert closure([AlgebraElement.zero(UQ)], "crossed", Truncation(3, -2, 2), algebra=UQ).dim == 0

    def test_empty_needs_algebra(self):
        with pytest.raises(ValueError):
            closure([], "crossed", Truncation(2, 0, 2))

    def test_generator_outside_truncation(self):
        with pytest.raises(TruncationError):
            closure([M(UQ, 5, 0)], "crossed", Truncation(3, -2, 2))

    def test_family_algebra_mismatch(self):
        with pytest.raises(AlgebraMismatch):
            closure([Xu], "crossed", Truncation(3, 0, 3))

    @pytest.mark.parametrize("I", [{2}, {1, 2}, {3}])
    def test_idempotent(self, I):
        S = crossed(I)
        assert closure(S.basis(), "crossed", S.truncation, algebra=UQ) == S

    @pytest.mark.parametrize("I", [{2}, {1, 3}])
    def test_truncation_independent(self, I):
        s = sum(I)
        small = crossed(I, trunc=Truncation(max(I) + 1, 1 - s - 1, s + 1))
        big = crossed(I, trunc=Truncation(s + 3, -s - 3, s + 3))
        assert small.codim() == big.codim() == s

    def test_boundary_warning_when_window_too_small(self):
        with pytest.warns(BoundaryWarning):
            S = closure([lin(3)], "crossed", Truncation(1, 0, 1))
        assert S.warnings


class TestCanonicalCrossed:
    def test_rows_for_one_two(self):
        rows = canonical_crossed_submodule_q(ClassificationPair(I={1, 2}))
        assert rows == [X * X, X * lin(2), lin(2) * lin(1)]

    def test_rows_for_two(self):
        assert canonical_crossed_submodule_q(ClassificationPair(I={2})) == [X * X, X * lin(2), lin(2)]

    def test_one_is_kernel(self):
        rows = canonical_crossed_submodule_q(ClassificationPair(I={1}))
        assert rows == [X, lin(1)]
        S = crossed({1})
        assert S.in_kernel() and S.codim() == 1

    def test_codim_one_two(self):
        S = crossed({1, 2})
        assert S.codim() == 3
        assert S.in_kernel() and S.codim_in_kernel() == 2

    def test_nontrivial_P(self):
        P = one + g.scale(2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryWarning)
            S = closure(canonical_crossed_submodule_q(ClassificationPair(P=P, I={2})), "crossed", Truncation(4, -3, 3))
        # every row is a multiple of P, so pure powers of X never appear
        assert S.contains(M(UQ, 3, 0) * P)
        assert not S.contains(M(UQ, 3, 0))
        assert S.contains(X * P * lin(2))
        assert not S.contains(X * P)

    @pytest.mark.parametrize("I", [{2}, {3}])
    @settings(max_examples=10)
    @given(data=st.data())
    def test_maximal(self, I, data):
        S = crossed(I)
        mons = S.truncation.monomials(UQ)
        # keep the extra element far from the boundary so its closure stays exact
        inner = [m for m in mons if m[0] <= max(I) and abs(m[1]) <= 1]
        e = AlgebraElement(UQ, {m: data.draw(st.integers(-2, 2)) for m in data.draw(st.lists(st.sampled_from(inner), min_size=1, max_size=3))})
        if S.contains(e):
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryWarning)
            bigger = closure(S.basis() + [e], "crossed", S.truncation, algebra=UQ)
        assert bigger.codim() < S.codim()


class TestClassificationPair:
    def test_constant_term(self):
        with pytest.raises(ValueError):
            ClassificationPair(P={0: 2}, I={2})
        with pytest.raises(ValueError):
            ClassificationPair(P={-1: 1, 0: 1})

    def test_positive_I(self):
        with pytest.raises(ValueError):
            ClassificationPair(I={0})

    def test_kernel_constraint_q(self):
        with pytest.raises(ValueError):
            ClassificationPair(I={2}, kernel=True)
        ClassificationPair(I={1, 2}, kernel=True)
        ClassificationPair(P={0: 1, 1: -1}, I={2}, kernel=True)

    def test_kernel_constraint_classical(self):
        ClassificationPair(I={2}, algebra=CB, kernel=True)
        with pytest.raises(ValueError):
            ClassificationPair(I=(), algebra=CB, kernel=True)

    def test_from_element(self):
        p = ClassificationPair(P=one + g.scale(3), I={2})
        assert p.poly() == one + g.scale(3)
        with pytest.raises(ValueError):
            ClassificationPair(P=one + X)

    def test_dual_pair(self):
        with pytest.raises(ValueError):
            DualClassificationPair(0, (), kernel=True)
        with pytest.raises(ValueError):
            DualClassificationPair(-1, {2})
        DualClassificationPair(1, (), kernel=True)


class TestTangentSpaces:
    def test_two(self):
        assert canonical_tangent_space_q({2}) == [ginv - one, M(UQ, 1, -1)]

    def test_empty(self):
        assert canonical_tangent_space_q(set()) == []

    def test_two_three(self):
        L = canonical_tangent_space_q({2, 3})
        assert len(L) == 5
        S = closure(L, "tangent_q", default_truncation({2, 3}), kernel_only=True, algebra=UQ)
        assert S.dim == 5 and S.in_kernel()

    def test_listed_coefficient(self):
        # q^{k(k-1)}/[k]! at k = 2 for n = 3
        top = canonical_tangent_space_q({3})[-1]
        assert top == M(UQ, 2, -2, c=qpow(2) / (1 + qpow(1)))
        dual = canonical_tangent_space_q({3}, normalization="dual")[-1]
        assert dual == M(UQ, 2, -2, c=qpow(1) / (1 + qpow(1)))

    def test_n_one_rejected(self):
        with pytest.raises(ValueError):
            canonical_tangent_space_q({1})


class TestClassicalIdeals:
    def test_l0_two(self):
        t = Truncation(6, 0, 6)
        L = closure(canonical_ideal_classical(DualClassificationPair(0, {2}), t), "tangent_classical", t, algebra=UB)
        assert L.dim == 2

    def test_l0_one(self):
        t = Truncation(6, 0, 6)
        L = closure(canonical_ideal_classical(DualClassificationPair(0, {1}), t), "tangent_classical", t, algebra=UB)
        assert L.dim == 1

    def test_l1_grows_with_truncation(self):
        dims = []
        for k in (4, 6):
            t = Truncation(k, 0, k)
            gens = canonical_ideal_classical(DualClassificationPair(1, ()), t)
            dims.append(closure(gens, "tangent_classical", t, algebra=UB).dim)
        assert dims[0] < dims[1]

    def test_limit_generators(self):
        assert classical_limit_ideal({2}, kernel=True) == [Xu * Xu, Xu * (H + uone), (H + uone) * H]
        assert classical_limit_ideal({1}) == [Xu, H]

    @pytest.mark.parametrize("I", [{2}, {3}, {1, 2}, {2, 3}, {1, 2, 3}, {4}])
    def test_codim_preserved(self, I):
        S = closure(classical_limit_ideal(I), "ideal", default_truncation(I, UB))
        assert S.warnings == []
        assert S.codim() == sum(I)

    def test_intersection_preserved(self):
        t = default_truncation({2, 3}, UB)
        a = closure(classical_limit_ideal({2}), "ideal", t)
        b = closure(classical_limit_ideal({3}), "ideal", t)
        ab = closure(classical_limit_ideal({2, 3}), "ideal", t)
        assert intersect(a, b) == ab


class TestIntersect:
    def test_codims_add(self):
        t = default_truncation({2, 3})
        assert intersect(crossed({2}, trunc=t), crossed({3}, trunc=t)).codim() == 5

    def test_trivial(self):
        t = default_truncation({2})
        a = crossed({2}, trunc=t)
        full = span([M(UQ, *m) for m in t.monomials(UQ)], UQ, t, grading="xdeg")
        assert intersect(a, a) == a
        assert intersect(full, a) == a

    def test_mismatch(self):
        with pytest.raises(TruncationError):
            intersect(crossed({2}), crossed({3}))


class TestAnnihilator:
    def test_matching_partner(self):
        assert annihilator_check(crossed({1, 2}), canonical_tangent_space_q({2}), Q_SELFDUAL)

    def test_wrong_partner(self):
        assert not annihilator_check(crossed({1, 3}), canonical_tangent_space_q({2}), Q_SELFDUAL)

    def test_empty(self):
        assert annihilator_check(crossed({2}), [], Q_SELFDUAL)


class TestSubcomodule:
    t = Truncation(3, -2, 2)

    def c(self, *k):
        return M(CB, *k)

    def test_examples(self):
        assert subcomodule_check_CBp(span([self.c(1, -1), self.c(0, -1)], CB, self.t))
        assert not subcomodule_check_CBp(span([self.c(1, -1), self.c(0, 0)], CB, self.t))
        assert not subcomodule_check_CBp(span([self.c(1, 0)], CB, self.t))
        assert subcomodule_check_CBp(span([], CB, self.t))

    def test_inhomogeneous(self):
        # X + 1 mixes grades 1 and 0
        assert not subcomodule_check_CBp(span([self.c(1, 0) + self.c(0, 0)], CB, self.t))

    def test_wrong_algebra(self):
        with pytest.raises(AlgebraMismatch):
            subcomodule_check_CBp(span([], UQ, self.t))


class TestDegeneracy:
    def test_classical_in_kernel_without_one(self):
        assert crossed({2}, alg=CB).in_kernel()
        assert not crossed({2}).in_kernel()
