from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from qborel.algebra import AlgebraElement, ubn
from qborel.calculus import InvalidDescriptor, d, eta, left_act, right_mul
from qborel.kappa import (
    GaussianPoly,
    SqrtPiScalar,
    build_kappa_calculus,
    d_kappa,
    gaussian_integral,
    invariance_check,
    kappa_pairing_duality_check,
    _shifted_moments,
    pullback_check,
    shifted_gaussian_integral,
    verify_kappa,
)

SQRT_PI = SqrtPiScalar(1, 1)


def gp(*exps, c=1):
    return GaussianPoly.monomial(exps, c)


def moment(k):
    # int x^k e^{-x^2} / sqrt(pi) from Gamma((k+1)/2)/sqrt(pi)
    if k % 2:
        return Fraction(0)
    v = Fraction(1)
    for j in range(k // 2):
        v *= Fraction(2 * j + 1, 2)
    return v


class TestSqrtPi:
    def test_zero_normalised(self):
        assert SqrtPiScalar(0, 3) == SqrtPiScalar(0, 0)
        assert (SqrtPiScalar(0, 3) + SQRT_PI) == SQRT_PI

    def test_mismatched_powers(self):
        with pytest.raises(ValueError):
            SqrtPiScalar(1, 1) + SqrtPiScalar(1, 2)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            SqrtPiScalar(1, -1)

    def test_arith(self):
        assert SQRT_PI * SQRT_PI == SqrtPiScalar(1, 2)
        assert 3 * SQRT_PI - SQRT_PI == SqrtPiScalar(2, 1)
        assert str(SqrtPiScalar(Fraction(1, 2), 1)) == "1/2*sqrt(pi)"


class TestGaussianIntegral:
    def test_one_variable(self):
        assert gaussian_integral(gp(0)) == SQRT_PI
        assert gaussian_integral(gp(1)).is_zero()
        assert gaussian_integral(gp(2)) == SqrtPiScalar(Fraction(1, 2), 1)
        assert gaussian_integral(gp(4)) == SqrtPiScalar(Fraction(3, 4), 1)

    def test_product(self):
        assert gaussian_integral(gp(2, 2)) == SqrtPiScalar(Fraction(1, 4), 2)

    def test_bad_exponents(self):
        with pytest.raises(ValueError):
            GaussianPoly(2, {(1,): 1})
        with pytest.raises(ValueError):
            GaussianPoly(0, {})

    @given(st.lists(st.integers(0, 6), min_size=1, max_size=4))
    def test_moment_oracle(self, exps):
        want = Fraction(1)
        for e in exps:
            want *= moment(e)
        assert gaussian_integral(gp(*exps)) == SqrtPiScalar(want, len(exps))

    @given(st.dictionaries(st.tuples(*[st.integers(0, 4)] * 3), st.integers(-5, 5), max_size=4),
           st.dictionaries(st.tuples(*[st.integers(0, 4)] * 3), st.integers(-5, 5), max_size=4),
           st.integers(-3, 3))
    def test_linear(self, f, g, k):
        both = {m: f.get(m, 0) + k * g.get(m, 0) for m in set(f) | set(g)}
        lhs = gaussian_integral(GaussianPoly(3, both))
        rhs = gaussian_integral(GaussianPoly(3, f)) + gaussian_integral(GaussianPoly(3, g)) * k
        assert lhs == rhs

    @given(st.tuples(*[st.integers(0, 4)] * 4))
    def test_symmetric_in_spatial_variables(self, m):
        swapped = (m[0], m[2], m[1], m[3])
        assert gaussian_integral(gp(*m)) == gaussian_integral(gp(*swapped))

    @pytest.mark.parametrize("a", [1, -1, 2, Fraction(1, 2)])
    def test_shifted_moments_against_substitution(self, a):
        # int x^k e^{-(x+a)^2} = int (u - a)^k e^{-u^2}
        got = _shifted_moments(Fraction(a), 6)
        for k in range(7):
            assert got[k] == sum(comb(k, j) * Fraction(-a) ** (k - j) * moment(j) for j in range(k + 1))

    @pytest.mark.parametrize("a", [1, -2, Fraction(1, 3)])
    @given(f=st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 3)), st.integers(-4, 4), max_size=4))
    def test_translation_invariant(self, a, f):
        F = GaussianPoly(2, f)
        assert shifted_gaussian_integral(F, a) == gaussian_integral(F)


class TestInvariance:
    @pytest.mark.parametrize("exps", [(1, 0), (2, 1), (0, 0)])
    def test_examples(self, exps):
        assert invariance_check(gp(*exps)).passed

    @pytest.mark.parametrize("n", [2, 3])
    def test_all_small_monomials(self, n):
        for exps in product(range(5), repeat=n):
            rep = invariance_check(gp(*exps))
            assert rep.passed, (exps, rep.summary())

    def test_total_derivative_integrates_to_zero(self):
        f = GaussianPoly(2, {(3, 1): 2, (0, 2): -1})
        for mu in range(2):
            assert gaussian_integral(f.derivative(mu)).is_zero()


class TestCalculus:
    def test_needs_two(self):
        with pytest.raises(InvalidDescriptor):
            build_kappa_calculus(1)

    def test_dim(self):
        assert build_kappa_calculus(4).dim == 4

    def test_d_x1x0(self):
        c = build_kappa_calculus(2)
        U = ubn(2)
        x0, x1 = AlgebraElement.gen(U, "x0"), AlgebraElement.gen(U, "x1")
        assert d(x1 * x0, c) == eta(c, 1, x0) + eta(c, 0, x1)
        assert d_kappa({(1, 1): 1}, 2) == d(x1 * x0, c)

    def test_d_kappa_examples(self):
        c = build_kappa_calculus(2)
        U = ubn(2)
        assert d_kappa({(1, 0): 1}, 2) == eta(c, 0)
        assert d_kappa({(0, 2): 1}, 2) == eta(c, 1, AlgebraElement.gen(U, "x1")).scale(2)
        c4 = build_kappa_calculus(4)
        U4 = ubn(4)
        x = [AlgebraElement.gen(U4, f"x{i}") for i in range(4)]
        want = eta(c4, 0, x[2] * x[1]) + eta(c4, 1, x[2] * x[0]) + eta(c4, 2, x[1] * x[0])
        assert d_kappa({(1, 1, 1, 0): 1}, 4) == want

    @pytest.mark.parametrize("n", [2, 3])
    def test_d_kappa_matches_quotient(self, n):
        c = build_kappa_calculus(n)
        for m in product(range(3), repeat=n):
            assert d_kappa({m: 1}, n) == d(AlgebraElement.monomial(ubn(n), m), c)

    def test_relations(self):
        c = build_kappa_calculus(3)
        U = ubn(3)
        x = [AlgebraElement.gen(U, f"x{i}") for i in range(3)]
        for a in x:
            assert left_act(a, eta(c, 0)) == right_mul(eta(c, 0), a)
        for i in (1, 2):
            for j in (1, 2):
                assert left_act(x[i], eta(c, j)) == right_mul(eta(c, j), x[i])
            assert left_act(x[0], eta(c, i)) - right_mul(eta(c, i), x[0]) == eta(c, i)


class TestChecks:
    def test_pairing_n2(self):
        assert kappa_pairing_duality_check(2, 3).passed

    def test_pairing_n4(self):
        assert kappa_pairing_duality_check(4, 2).passed

    def test_pullback(self):
        assert pullback_check(2).passed

    def test_verify(self):
        rep = verify_kappa(3, D=3, integral_degree=2)
        assert rep.passed, rep.summary()
