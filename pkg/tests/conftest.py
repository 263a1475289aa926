from fractions import Fraction

from hypothesis import settings, strategies as st

from qborel.coeff import QPolynomial, RatFunc

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def qpolys(draw, max_len=4):
    coeffs = draw(st.lists(small_fracs, min_size=0, max_size=max_len))
    low = draw(st.integers(-3, 3))
    return QPolynomial(coeffs, low)


@st.composite
def ratfuncs(draw, nonzero=False):
    num = draw(qpolys())
    den = draw(qpolys().filter(lambda p: not p.is_zero()))
    if nonzero and num.is_zero():
        num = QPolynomial([Fraction(1)])
    return RatFunc(num, den)


from qborel.algebra import CB, UB, UQ, AlgebraElement, cbn, ubn  # noqa: E402
from qborel.coeff import qpow  # noqa: E402

ALGEBRAS = [UQ, CB, UB, ubn(2), ubn(3), cbn(2), cbn(3)]


def _key(alg, draw, max_deg):
    if alg.tag in ("Uq_bplus", "C_Bplus"):
        return (draw(st.integers(0, max_deg)), draw(st.integers(-2, 2)))
    if alg.tag == "U_bplus":
        return (draw(st.integers(0, max_deg)), draw(st.integers(0, max_deg)))
    if alg.tag == "U_bnplus":
        return tuple(draw(st.integers(0, 2)) for _ in range(alg.n))
    return (draw(st.integers(-2, 2)),) + tuple(draw(st.integers(0, 2)) for _ in range(alg.n - 1))


def _scalar(alg, draw):
    c = draw(st.integers(-3, 3).filter(bool))
    if alg.quantum:
        return qpow(draw(st.integers(-1, 1))) * c
    return Fraction(c)


@st.composite
def elements(draw, alg, max_terms=3, max_deg=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        terms[_key(alg, draw, max_deg)] = _scalar(alg, draw)
    return AlgebraElement(alg, terms)
