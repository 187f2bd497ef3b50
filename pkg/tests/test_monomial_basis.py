import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramify import FiltrationSpec, Monomial, monomial_valuation, rr_basis, weierstrass_semigroup
from ramify.monomial_basis import (
    InadmissibleMonomial,
    admissible_monomials,
    check_admissible,
    collision_free,
    distinct_valuations_check,
)

from conftest import monomial_poles_brute
from test_filtration import specs

S2 = FiltrationSpec(5, (1,), (2,))
S16 = FiltrationSpec(5, (1, 1), (1, 6))


def test_valuation_examples():
    assert monomial_valuation(S16, Monomial(1, (1, 0))) == -30
    assert monomial_valuation(S16, Monomial(0, ())) == 0
    assert monomial_valuation(S2, Monomial(0, (3,))) == -6


def test_inadmissible_monomials():
    with pytest.raises(InadmissibleMonomial):
        check_admissible(S2, Monomial(0, (5,)))
    with pytest.raises(InadmissibleMonomial):
        check_admissible(S2, Monomial(-1, ()))
    with pytest.raises(InadmissibleMonomial):
        check_admissible(S2, Monomial(0, (1, 1)))


def test_monomial_normalizes_trailing_zeros():
    assert Monomial(1, (1, 0)) == Monomial(1, (1,))
    assert Monomial(2, (0, 3)).label(["y", "z"]) == "x^2*z^3"
    assert Monomial.from_json(Monomial(1, (2,)).to_json()) == Monomial(1, (2,))


def test_basis_examples():
    basis = rr_basis(S2, 6)
    assert set(basis.monomials) == {Monomial(0), Monomial(0, (1,)), Monomial(0, (2,)),
                                    Monomial(1), Monomial(0, (3,))}
    assert basis.valuations == (0, -2, -4, -5, -6)
    assert rr_basis(S16, 0).monomials == (Monomial(0),)
    b5 = rr_basis(S16, 5)
    assert b5.monomials == (Monomial(0), Monomial(0, (1,)))
    assert b5.valuations == (0, -5)


def test_basis_rejects_negative_bound():
    with pytest.raises(ValueError):
        rr_basis(S2, -1)


def test_distinct_valuation_examples():
    assert distinct_valuations_check(S16, 200)
    assert distinct_valuations_check(S2, 100)
    assert distinct_valuations_check(S2, -1)


@given(specs(max_h=3), st.integers(0, 150))
def test_basis_matches_brute_force(spec, m):
    brute = sorted(monomial_poles_brute(spec, m), key=lambda t: (t[0], t[1]))
    basis = rr_basis(spec, m)
    got = sorted((-v, (mono.l0, *mono.padded(spec.h - 1)))
                 for v, mono in zip(basis.valuations, basis.monomials))
    assert got == brute
    assert list(basis.valuations) == sorted(basis.valuations, reverse=True)


@given(specs(max_h=3), st.integers(0, 150))
def test_dimension_equals_semigroup_count(spec, m):
    assert len(rr_basis(spec, m)) == weierstrass_semigroup(spec).count_up_to(m)


@given(specs(max_h=3), st.integers(0, 80), st.integers(0, 80))
def test_flag_property(spec, m, extra):
    small = set(rr_basis(spec, m).monomials)
    large = set(rr_basis(spec, m + extra).monomials)
    assert small <= large


@given(specs(max_h=3), st.integers(0, 300))
def test_injectivity_matches_pairwise_check(spec, bound):
    poles = [pole for pole, _ in monomial_poles_brute(spec, bound)]
    assert distinct_valuations_check(spec, bound) == (len(poles) == len(set(poles)))


def _pairwise_unique(steps, bound):
    sums = [sum(e * w for e, (w, _) in zip(es, steps))
            for es in itertools.product(*(range(top + 1) for _, top in steps))]
    sums = [v for v in sums if v <= bound]
    return len(sums) == len(set(sums))


@given(st.lists(st.tuples(st.integers(1, 12), st.integers(0, 6)), min_size=1, max_size=3),
       st.integers(0, 60))
def test_collision_free_matches_pairwise(steps, bound):
    assert collision_free(steps, bound) == _pairwise_unique(steps, bound)


def test_collision_free_detects_clash():
    assert not collision_free([(2, 3), (3, 2)], 10)
    assert collision_free([(2, 2), (3, 2)], 5)


def test_admissible_monomials_listing():
    items = admissible_monomials(S2, 6)
    assert sorted(v for v, _ in items) == [-6, -5, -4, -2, 0]
