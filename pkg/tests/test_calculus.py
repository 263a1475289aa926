from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qborel.algebra import CB, UB, UQ, AlgebraElement, AlgebraMismatch, from_commutative
from qborel.calculus import (
    DecompositionFailure,
    GammaElement,
    IndexOutOfRange,
    InvalidDescriptor,
    LogFunctional,
    base_monomials,
    braided_leibniz_check,
    build,
    check_reduction_data,
    commutator,
    corrupt_eta,
    d,
    decompose,
    derivation,
    derivation_closed_form,
    derivation_oracle,
    direct_sum_rank,
    eta,
    gram_matrix,
    left_act,
    nat_bp_case_split,
    right_mul,
    verify_relations,
)
from qborel.coeff import qpow

q = qpow(1)


def M(alg, *k, c=1):
    return AlgebraElement.monomial(alg, k, c)


X, g, ginv, one = M(UQ, 1, 0), M(UQ, 0, 1), M(UQ, 0, -1), AlgebraElement.one(UQ)
H, Xu = M(UB, 0, 1), M(UB, 1, 0)

FAMILIES = [("q", 2), ("q", 3), ("q_set", {2, 3}), ("classical_CBp", {1, 2}), ("dual_classical", 2), ("dual_classical", 3), ("nat_bp",), ("kappa", 2)]
FIDS = ["q2", "q3", "q{2,3}", "CB{1,2}", "dual2", "dual3", "nat_bp", "kappa2"]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class TestBuild:
    def test_q2(self):
        c = build("q", 2)
        assert c.dim == 2
        assert list(c.eta_reps) == [(g - one).scale(1 / (q - 1)), X]
        assert list(c.tangent_basis) == [ginv - one, M(UQ, 1, -1)]

    def test_classical_commutative(self):
        c = build("classical_CBp", {1, 2})
        Xc, gc = M(CB, 1, 0), M(CB, 0, 1)
        assert c.dim == 2
        assert list(c.eta_reps) == [gc - AlgebraElement.one(CB), Xc]
        assert list(c.tangent_basis) == [H, Xu]

    def test_nat_bp(self):
        c = build("nat_bp")
        assert c.dim == 2
        assert isinstance(c.tangent_basis[0], LogFunctional)
        for e in (H * H, Xu * H, Xu * Xu):
            assert c.M.contains(e)
        assert not c.M.contains(H) and not c.M.contains(Xu)

    @pytest.mark.parametrize("n", [0, 1])
    def test_q_needs_two(self, n):
        with pytest.raises(InvalidDescriptor):
            build("q", n)

    def test_unknown_family(self):
        with pytest.raises(InvalidDescriptor):
            build("bogus", 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_q_dims(self, n):
        c = build("q", n)
        assert c.dim == n
        assert gram_matrix(c) == identity(n)

    def test_q3_records_gram_correction(self):
        c = build("q", 3)
        assert c.discrepancies == ["<phi_2, eta_2> = q, expected 1"]
        assert c.listed_tangent[2] != c.tangent_basis[2]
        assert c.tangent_basis[2] == M(UQ, 2, -2, c=q / (1 + q))

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_reduction_data(self, args):
        assert check_reduction_data(build(*args))

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_duality(self, args):
        c = build(*args)
        assert gram_matrix(c) == identity(c.dim)

    def test_index_out_of_range(self):
        c = build("q", 2)
        with pytest.raises(IndexOutOfRange):
            eta(c, 5)
        with pytest.raises(IndexOutOfRange):
            derivation_closed_form(c, 7, X)


class TestD:
    def test_q2_dg(self):
        c = build("q", 2)
        assert d(g, c) == eta(c, 0, g).scale(q - 1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_dual_classical(self, n):
        c = build("dual_classical", n)
        assert d(Xu, c) == eta(c, 1)
        assert d(H, c) == eta(c, 0).scale(1 - n)

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_d_one(self, args):
        c = build(*args)
        assert d(AlgebraElement.one(c.algebra), c).is_zero()

    def test_wrong_algebra(self):
        with pytest.raises(AlgebraMismatch):
            d(Xu, build("q", 2))

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_d_is_sum_of_derivations(self, args):
        c = build(*args)
        for m in base_monomials(c.algebra, 3):
            a = M(c.algebra, *m)
            total = GammaElement(c)
            for lab in c.labels:
                total = total + eta(c, lab, derivation(c, lab, a))
            assert total == d(a, c)


class TestBimodule:
    def test_q2_commutation_with_g(self):
        c = build("q", 2)
        assert commutator(g, eta(c, 0), q) == 0
        assert commutator(g, eta(c, 1), 1) == 0

    def test_q3_x_raises_index(self):
        c = build("q", 3)
        assert commutator(X, eta(c, 1), q) == eta(c, 2)
        assert commutator(X, eta(c, 0), q * q) == eta(c, 1)

    def test_eta0_generates_d(self):
        c = build("q", 3)
        for a in (X, g, X * g, ginv * X * X):
            assert commutator(a, eta(c, 0)) == d(a, c)

    def test_unit_acts_trivially(self):
        c = build("q", 2)
        gam = eta(c, 0, X) + eta(c, 1, g)
        assert left_act(one, gam) == gam
        assert right_mul(gam, one) == gam

    @pytest.mark.parametrize("args", [("q", 2), ("q", 3), ("dual_classical", 2), ("nat_bp",)], ids=["q2", "q3", "dual2", "nat_bp"])
    @settings(max_examples=25)
    @given(data=st.data())
    def test_bimodule_associativity(self, args, data):
        c = build(*args)
        monos = base_monomials(c.algebra, 2)
        a, b = (M(c.algebra, *data.draw(st.sampled_from(monos))) for _ in range(2))
        lab = data.draw(st.sampled_from(c.labels))
        gam = eta(c, lab)
        assert left_act(a * b, gam) == left_act(a, left_act(b, gam))
        assert right_mul(left_act(a, gam), b) == left_act(a, right_mul(gam, b))

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_leibniz_for_d(self, args):
        c = build(*args)
        monos = base_monomials(c.algebra, 2)
        for ma in monos:
            for mb in monos:
                a, b = M(c.algebra, *ma), M(c.algebra, *mb)
                assert d(a * b, c) == right_mul(d(a, c), b) + left_act(a, d(b, c))


class TestClosedForms:
    def test_q2_examples(self):
        c = build("q", 2)
        assert derivation_closed_form(c, 1, X * X) == X.scale(1 + q)
        assert derivation_closed_form(c, 0, g) == g.scale(q - 1)

    def test_commuting_dict_input(self):
        c = build("q", 2)
        assert derivation_closed_form(c, 1, {(2, 0): 1}) == X.scale(1 + q)

    def test_dual_classical(self):
        c = build("dual_classical", 2)
        assert derivation_closed_form(c, 0, H) == AlgebraElement.one(UB).scale(-1)

    def test_classical_euler(self):
        c = build("classical_CBp", {1, 2})
        a = M(CB, 1, 1)
        assert derivation_closed_form(c, 0, a) == a.scale(2)

    def test_generic_classical_set_has_no_closed_form(self):
        c = build("classical_CBp", {2, 3})
        with pytest.raises(InvalidDescriptor):
            derivation_closed_form(c, c.labels[0], M(CB, 1, 0))

    @pytest.mark.parametrize(
        "args",
        [("q", 2), ("q", 3), ("q", 4), ("classical_CBp", {1, 2}), ("classical_CBp", {1, 3}), ("dual_classical", 2), ("dual_classical", 3), ("nat_bp",), ("kappa", 2), ("kappa", 3)],
        ids=["q2", "q3", "q4", "CB12", "CB13", "dual2", "dual3", "nat_bp", "kappa2", "kappa3"],
    )
    def test_closed_equals_oracle(self, args):
        c = build(*args)
        for m in base_monomials(c.algebra, 4):
            a = M(c.algebra, *m)
            for lab, x in zip(c.labels, c.tangent_basis):
                assert derivation_closed_form(c, lab, a) == derivation_oracle(x, a)


class TestOracle:
    def test_q2_phi1_on_x(self):
        c = build("q", 2)
        assert derivation_oracle(c.tangent_basis[1], X) == one

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_kills_one(self, args):
        c = build(*args)
        for x in c.tangent_basis:
            assert derivation_oracle(x, AlgebraElement.one(c.algebra)).is_zero()

    def test_classical_euler(self):
        assert derivation_oracle(H, M(CB, 1, 1)) == M(CB, 1, 1, c=2)

    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_matches_quotient(self, args):
        c = build(*args)
        for m in base_monomials(c.algebra, 3):
            a = M(c.algebra, *m)
            for lab, x in zip(c.labels, c.tangent_basis):
                assert derivation_oracle(x, a) == derivation(c, lab, a)


class TestBraidedLeibniz:
    def test_trivial_factors(self):
        c = build("q", 2)
        for x in c.tangent_basis:
            assert braided_leibniz_check(c, x, one, X * g)
            assert braided_leibniz_check(c, x, X * g, one)

    def test_q2_generators(self):
        c = build("q", 2)
        assert braided_leibniz_check(c, c.tangent_basis[0], g, X)
        for x in c.tangent_basis:
            for a in (X, g, ginv):
                for b in (X, g, ginv):
                    assert braided_leibniz_check(c, x, a, b)

    @settings(max_examples=40)
    @given(data=st.data())
    def test_q3_random(self, data):
        c = build("q", 3)
        monos = base_monomials(UQ, 3)
        a, b = (M(UQ, *data.draw(st.sampled_from(monos))) for _ in range(2))
        x = data.draw(st.sampled_from(c.tangent_basis))
        assert braided_leibniz_check(c, x, a, b)

    @pytest.mark.parametrize("args", [("classical_CBp", {1, 2}), ("dual_classical", 3), ("nat_bp",), ("kappa", 3)], ids=["CB12", "dual3", "nat_bp", "kappa3"])
    def test_other_families(self, args):
        c = build(*args)
        monos = base_monomials(c.algebra, 2)
        for x in c.tangent_basis:
            for ma in monos:
                for mb in monos:
                    assert braided_leibniz_check(c, x, M(c.algebra, *ma), M(c.algebra, *mb))


class TestDecompose:
    def test_two_three(self):
        parts = decompose({2, 3})
        assert [p.dim for p in parts] == [2, 3]
        assert build("q_set", {2, 3}).dim == 5
        assert direct_sum_rank({2, 3}) == (5, 5)

    def test_singleton(self):
        assert decompose({2}) == [build("q", 2)]

    def test_classical_does_not_split(self):
        r, total = direct_sum_rank({2, 3}, classical=True)
        assert r < total
        with pytest.raises(DecompositionFailure):
            decompose({2, 3}, classical=True)

    def test_bad_input(self):
        with pytest.raises(InvalidDescriptor):
            decompose(set())
        with pytest.raises(InvalidDescriptor):
            decompose({1, 2})


class TestVerifyRelations:
    @pytest.mark.parametrize("args", FAMILIES, ids=FIDS)
    def test_all_pass(self, args):
        rep = verify_relations(build(*args), D=3)
        assert rep.passed, rep.summary()

    def test_corrupted_eta_fails(self):
        c = corrupt_eta(build("q", 2), 1)
        assert not verify_relations(c, D=2).passed

    def test_corrupted_relation_fails(self):
        c = build("q", 2)
        rep = verify_relations(c, D=2, corrupt="leibniz")
        assert not rep.passed
        bad = [e.id for e in rep.entries if not e.passed]
        assert bad == ["leibniz"]


class TestNatBpUniqueness:
    def test_case_split(self):
        out = nat_bp_case_split()
        assert out["unique"] is True
        assert out["matches_nat_bp"] is True


class TestDualTwoDim:
    """The 2-dimensional calculus on U(b+) inherited from q(2)."""

    @staticmethod
    def backward_h(f):
        out = {}
        for (n, k), v in f.items():
            out[(n, k)] = out.get((n, k), 0) + v
            for j in range(k + 1):
                out[(n, j)] = out.get((n, j), 0) - v * comb(k, j) * (-1) ** (k - j)
        return {m: c for m, c in out.items() if c}

    def test_display(self):
        c = build("dual_classical", 2)
        dH, dX = d(H, c), d(Xu, c)
        for m in base_monomials(UB, 4):
            f = {m: 1}
            a = from_commutative(UB, f, c.ordering)
            assert right_mul(dH, a) - left_act(a, dH) == d(a, c)
            assert (right_mul(dX, a) - left_act(a, dX)).is_zero()
            dxf = {(n - 1, k): n for (n, k) in f if n}
            want = right_mul(dH, from_commutative(UB, self.backward_h(f), c.ordering)) + right_mul(dX, from_commutative(UB, dxf, c.ordering))
            assert d(a, c) == want
