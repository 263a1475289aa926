
import pytest
from hypothesis import given, strategies as st

from qborel.algebra import (
    CB,
    UB,
    UQ,
    AlgebraElement,
    AlgebraMismatch,
    TensorElement,
    antipode,
    cbn,
    coproduct,
    counit,
    ubn,
)
from qborel.coeff import ONE, qpow
from qborel.duality import (
    CLASSICAL,
    Q_SELFDUAL,
    PairingId,
    adjoint_action_brute,
    adjoint_action_classical,
    adjoint_action_uq,
    adjoint_coaction_closed,
    adjoint_coaction_direct,
    coregular_action,
    kappa_pairing,
    pair,
    pair_tensor,
    tangent_action_on_L,
)

from conftest import elements


def M(alg, *k, c=1):
    return AlgebraElement.monomial(alg, k, c)


X, g, ginv, one = M(UQ, 1, 0), M(UQ, 0, 1), M(UQ, 0, -1), AlgebraElement.one(UQ)


class TestPairingValues:
    def test_q_selfdual(self):
        assert pair(Q_SELFDUAL, X, X) == 1
        assert pair(Q_SELFDUAL, X, g) == 0
        assert pair(Q_SELFDUAL, g, g) == qpow(-1)

    def test_q_selfdual_x2(self):
        # [2]_q! q^{-1}
        assert pair(Q_SELFDUAL, M(UQ, 2, 0), M(UQ, 2, 0)) == (1 + qpow(1)) * qpow(-1)

    def test_classical(self):
        assert pair(CLASSICAL, M(UB, 0, 1), M(CB, 0, 2)) == 2
        assert pair(CLASSICAL, M(UB, 2, 3), M(CB, 2, 2)) == 16
        assert pair(CLASSICAL, M(UB, 1, 0), M(CB, 0, 1)) == 0

    def test_kappa(self):
        pid = kappa_pairing(3)
        assert pair(pid, M(ubn(3), 2, 1, 3), M(cbn(3), 3, 1, 3)) == 9 * 6
        assert pair(pid, M(ubn(3), 0, 1, 0), M(cbn(3), 0, 0, 1)) == 0

    def test_slot_mismatch(self):
        with pytest.raises(AlgebraMismatch):
            pair(CLASSICAL, M(CB, 0, 1), M(UB, 0, 1))

    def test_kappa_requires_n(self):
        with pytest.raises(ValueError):
            PairingId("kappa", 1)

    def test_orientation(self):
        # <ab, x> = <a (x) b, Delta x> holds with slot 1 enveloping
        H, Xu = M(UB, 0, 1), M(UB, 1, 0)
        x = M(CB, 1, 2)
        lhs = pair(CLASSICAL, H * Xu, x)
        rhs = pair_tensor(CLASSICAL, TensorElement.pure(H, Xu), coproduct(x))
        # HX = XH + X, so 1!*2 + 1
        assert lhs == rhs == 3


PAIRINGS = [
    (Q_SELFDUAL, UQ, UQ),
    (CLASSICAL, UB, CB),
    (kappa_pairing(2), ubn(2), cbn(2)),
    (kappa_pairing(3), ubn(3), cbn(3)),
]
PIDS = [p[0].tag + (str(p[0].n) if p[0].n else "") for p in PAIRINGS]


@pytest.mark.parametrize("pid,A,F", PAIRINGS, ids=PIDS)
class TestHopfPairing:
    @given(data=st.data())
    def test_product_in_slot1(self, pid, A, F, data):
        a, b, x = data.draw(elements(A)), data.draw(elements(A)), data.draw(elements(F))
        assert pair(pid, a * b, x) == pair_tensor(pid, TensorElement.pure(a, b), coproduct(x))

    @given(data=st.data())
    def test_product_in_slot2(self, pid, A, F, data):
        a, x, y = data.draw(elements(A)), data.draw(elements(F)), data.draw(elements(F))
        assert pair(pid, a, x * y) == pair_tensor(pid, coproduct(a), TensorElement.pure(x, y))

    @given(data=st.data())
    def test_antipode(self, pid, A, F, data):
        a, x = data.draw(elements(A)), data.draw(elements(F))
        assert pair(pid, antipode(a), x) == pair(pid, a, antipode(x))

    @given(data=st.data())
    def test_units(self, pid, A, F, data):
        a, x = data.draw(elements(A)), data.draw(elements(F))
        assert pair(pid, AlgebraElement.one(A), x) == counit(x)
        assert pair(pid, a, AlgebraElement.one(F)) == counit(a)


class TestAdjointCoaction:
    def test_examples(self):
        assert adjoint_coaction_direct(g) == TensorElement.pure(one, g)
        assert adjoint_coaction_direct(X) == TensorElement.pure(X, one - g) + TensorElement.pure(g, X)
        assert adjoint_coaction_direct(one) == TensorElement.pure(one, one)

    def test_closed_examples(self):
        assert adjoint_coaction_closed(1, {0: 1}) == TensorElement.pure(X, one - g) + TensorElement.pure(g, X)
        assert adjoint_coaction_closed(0, {3: 1}) == TensorElement.pure(one, g ** 3)

    @pytest.mark.parametrize("n", range(6))
    @pytest.mark.parametrize("P", [{0: 1}, {1: 1}, {-1: 1}, {0: 1, 1: 1}], ids=["1", "g", "g^-1", "1+g"])
    def test_closed_matches_direct(self, n, P):
        v = AlgebraElement(UQ, {(n, k): c for k, c in P.items()})
        assert adjoint_coaction_closed(n, P) == adjoint_coaction_direct(v)

    def test_closed_accepts_element(self):
        assert adjoint_coaction_closed(2, g + one) == adjoint_coaction_direct(X * X * (g + one))

    def test_closed_rejects_non_laurent(self):
        with pytest.raises(ValueError):
            adjoint_coaction_closed(1, X)

    @pytest.mark.parametrize("n,k", [(a, b) for a in range(5) for b in range(-2, 3) if a + abs(b) <= 4])
    def test_comodule(self, n, k):
        ad = adjoint_coaction_direct(M(UQ, n, k))
        assert ad.leg_map(1, adjoint_coaction_direct) == ad.leg_map(0, coproduct)


class TestAdjointAction:
    def test_uq_examples(self):
        assert adjoint_action_uq("g", M(UQ, 2, 1)) == M(UQ, 2, 1, c=qpow(-2))
        assert adjoint_action_uq("X", M(UQ, 1, -1)).is_zero()
        assert adjoint_action_uq("X", X) == M(UQ, 2, 0, c=ONE - qpow(-1))

    def test_classical_examples(self):
        assert adjoint_action_classical("H", M(UB, 3, 1)) == M(UB, 3, 1, c=3)
        assert adjoint_action_classical("X", M(UB, 0, 1)) == M(UB, 1, 0, c=-1)
        assert adjoint_action_classical("X", M(UB, 2, 0)).is_zero()

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            adjoint_action_uq("H", X)
        with pytest.raises(AlgebraMismatch):
            adjoint_action_classical("X", X)

    @pytest.mark.parametrize("h,elt", [("X", X), ("g", g), ("g^-1", ginv)])
    @pytest.mark.parametrize("n,k", [(a, b) for a in range(4) for b in range(-2, 3)])
    def test_uq_matches_brute(self, h, elt, n, k):
        v = M(UQ, n, k)
        assert adjoint_action_uq(h, v) == adjoint_action_brute(elt, v)

    @pytest.mark.parametrize("h", ["X", "H"])
    @pytest.mark.parametrize("n,m", [(a, b) for a in range(4) for b in range(4)])
    def test_classical_matches_brute(self, h, n, m):
        v = M(UB, n, m)
        assert adjoint_action_classical(h, v) == adjoint_action_brute(AlgebraElement.gen(UB, h), v)

    @pytest.mark.parametrize("word", [("X", "X"), ("X", "g"), ("g", "X"), ("g^-1", "X"), ("g", "g^-1")])
    @pytest.mark.parametrize("n,k", [(a, b) for a in range(6) for b in range(-2, 3) if a + abs(b) <= 5])
    def test_module_axiom(self, word, n, k):
        gens = {"X": X, "g": g, "g^-1": ginv}
        v = M(UQ, n, k)
        h, h2 = word
        assert adjoint_action_brute(gens[h] * gens[h2], v) == adjoint_action_uq(h, adjoint_action_uq(h2, v))


class TestCoregular:
    def test_kappa_examples(self):
        pid = kappa_pairing(2)
        U, C = ubn(2), cbn(2)
        assert coregular_action(pid, M(C, 0, 1), M(U, 0, 2)) == M(U, 0, 1, c=2)
        x0 = M(U, 1, 0)
        assert coregular_action(pid, M(C, 1, 0), x0) == x0 + AlgebraElement.one(U)

    @given(data=st.data())
    def test_unit_acts_trivially(self, data):
        a = data.draw(elements(ubn(3)))
        assert coregular_action(kappa_pairing(3), AlgebraElement.one(cbn(3)), a) == a

    def test_mismatch(self):
        with pytest.raises(AlgebraMismatch):
            coregular_action(kappa_pairing(2), M(UB, 0, 1), M(ubn(2), 1, 0))


class TestTangentAction:
    def test_examples(self):
        assert tangent_action_on_L(Q_SELFDUAL, X, ginv - one).is_zero()
        v = M(UQ, 1, -1)
        # Delta(X g^-1) = X g^-1 (x) g^-1 + 1 (x) X g^-1; <X g^-1, g> = 0, <1, g> = 1
        assert tangent_action_on_L(Q_SELFDUAL, g, v) == v

    @given(data=st.data())
    def test_unit(self, data):
        x = data.draw(elements(UQ))
        assert tangent_action_on_L(Q_SELFDUAL, one, x) == x

    @given(data=st.data())
    def test_action_of_opposite_algebra(self, data):
        a, b, x = data.draw(elements(UQ)), data.draw(elements(UQ)), data.draw(elements(UQ))
        t = lambda h, v: tangent_action_on_L(Q_SELFDUAL, h, v)
        assert t(a * b, x) == t(b, t(a, x))
