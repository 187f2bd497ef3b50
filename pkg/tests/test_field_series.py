import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramify.tower import GF, LaurentSeries, PrecisionError
from ramify.tower.series import PRECISION_ENV, default_precision

F5 = GF(5)
F25 = GF(5, [2, 0, 1])  # X^2 + 2 is irreducible over F_5
F7 = GF(7)


@pytest.mark.parametrize("F", [F5, F7, F25], ids=["F5", "F7", "F25"])
def test_field_axioms_exhaustive(F):
    elems = list(F.elements())
    for a in elems:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in elems:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
    for a, b, c in zip(elems, reversed(elems), elems[3:] + elems[:3]):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_frobenius_order():
    for a in F25.elements():
        assert F25.pow(a, 25) == a
    assert sum(1 for a in F25.elements() if F25.pow(a, 5) == a) == 5


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        GF(5, [1, 0, 1])  # X^2 + 1 = (X - 2)(X + 2)
    with pytest.raises(ValueError):
        GF(6)


def test_element_wrapper():
    a = F5(3)
    assert a + 4 == 2
    assert a * a == 4
    assert a / 3 == 1
    assert -a == 2
    assert 1 - a == 3
    assert a ** -1 == 2


def test_json_roundtrip():
    assert GF.from_json(F25.to_json()) == F25
    assert GF.from_json(F5.to_json()) == F5


def series(F, d, prec=None):
    return LaurentSeries.from_dict(F, d, prec)


def test_product_example():
    # inside a tower T = 1/x; here T plays the role of the variable directly
    x_plus, x_minus = series(F5, {1: 1, 0: 1}), series(F5, {1: 1, 0: 4})
    assert (x_plus * x_minus).terms() == {2: 1, 0: 4}


def test_geometric_series_inverse():
    inv = series(F5, {0: 1, 1: 4}).inverse(precision=10)
    assert inv.terms() == {k: 1 for k in range(10)}
    assert inv.prec == 10


def test_valuation_example():
    assert series(F5, {3: 1, 5: 2}).valuation() == 3


def test_precision_exhaustion():
    s = series(F5, {}, prec=8)
    assert s.vanishes() and not s.is_zero()
    with pytest.raises(PrecisionError):
        s.valuation()
    with pytest.raises(ValueError):
        LaurentSeries.zero(F5).valuation()
    with pytest.raises(PrecisionError):
        series(F5, {1: 1}, prec=4).coefficient(4)


def test_precision_propagates_through_products():
    a = series(F5, {2: 1, 3: 1}, prec=6)
    b = series(F5, {-1: 2})
    assert (a * b).prec == 5
    assert (a + b).prec == 6


def test_default_precision_env(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "12")
    assert default_precision() == 12
    monkeypatch.setenv(PRECISION_ENV, "zero")
    with pytest.raises(ValueError):
        default_precision()
    monkeypatch.delenv(PRECISION_ENV)
    assert default_precision() == 64


coeff_maps = st.dictionaries(st.integers(-6, 6), st.integers(0, 4), max_size=6)


@given(coeff_maps, coeff_maps, coeff_maps)
def test_ring_axioms(a, b, c):
    A, B, C = series(F5, a), series(F5, b), series(F5, c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A + B == B + A


@given(coeff_maps, coeff_maps)
def test_valuation_is_additive(a, b):
    A, B = series(F5, a), series(F5, b)
    if A.vanishes() or B.vanishes():
        return
    assert (A * B).valuation() == A.valuation() + B.valuation()


@given(coeff_maps)
def test_inverse_agrees_to_precision(a):
    A = series(F5, a)
    if A.vanishes():
        return
    prod = A * A.inverse(precision=12)
    assert prod.agrees_with(LaurentSeries.one(F5))
    assert prod.prec in (None, 12)  # exact only when A is a monomial
