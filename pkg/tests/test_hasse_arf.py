import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramify import (
    ExponentVector,
    FiltrationSpec,
    GridBounds,
    TowerShape,
    enumerate_and_verify,
    integrality_and_chain,
    theorem_check,
    upper_jumps,
)
from ramify.hasse_arf import (
    ShapeError,
    divisibility_cascade,
    general_jump_relation,
    jumps_from_shape,
    min_condition_check,
    nu0_ceiling,
    shape_exponents,
    shapes_by_exponents,
    shapes_by_specs,
    solve_exponents,
    validate_shape,
    valuation_equation_check,
)

from conftest import phi_by_steps

S16 = FiltrationSpec(5, (1, 1), (1, 6))
S17 = FiltrationSpec(5, (1, 1), (1, 7))
S27 = FiltrationSpec(5, (1, 1), (2, 7))


def ev(i, nu0, *nu):
    return ExponentVector(i, nu0, nu)


def naive_solutions(spec, i):
    """Full product over every exponent range, no pruning."""
    ranges = [range(nu0_ceiling(spec, i) + 1)] + [range(spec.p ** spec.n[j]) for j in range(i - 1)]
    out = []
    for combo in itertools.product(*ranges):
        cand = ExponentVector(i, combo[0], combo[1:])
        if valuation_equation_check(spec, cand):
            out.append(cand)
    return sorted(out, key=lambda e: (e.nu0, e.nu))


def test_valuation_equation_examples():
    assert valuation_equation_check(S16, ev(2, 1, 1))
    assert not valuation_equation_check(S16, ev(2, 0, 4))
    assert valuation_equation_check(S17, ev(2, 1, 2))


def test_exponent_vector_shape_errors():
    with pytest.raises(ShapeError):
        ExponentVector(3, 1, (1,))
    with pytest.raises(ShapeError):
        valuation_equation_check(S16, ev(2, 0, 5))
    with pytest.raises(ShapeError):
        valuation_equation_check(S16, ev(2, -1, 1))


def test_solve_examples():
    assert solve_exponents(S16, 2) == [ev(2, 1, 1)]
    assert solve_exponents(S17, 2) == [ev(2, 1, 2)]
    assert solve_exponents(S27, 2) == [ev(2, 1, 1)]
    with pytest.raises(ValueError):
        solve_exponents(S16, 1)


@st.composite
def small_specs(draw):
    p = draw(st.sampled_from([5, 7]))
    h = draw(st.integers(3, 4))
    n = tuple(draw(st.integers(1, 2)) for _ in range(h - 1))
    b = [draw(st.integers(1, 12))]
    for _ in range(h - 2):
        b.append(b[-1] + draw(st.integers(1, 60)))
    b = [v + 1 if v % p == 0 else v for v in b]
    spec = FiltrationSpec(p, n, tuple(b))
    return spec if spec.validation.ok else FiltrationSpec(5, (1, 1), (1, 6))


@given(small_specs())
def test_solve_matches_naive_product(spec):
    for i in range(2, spec.h):
        assert solve_exponents(spec, i) == naive_solutions(spec, i)


@given(small_specs())
def test_solutions_are_unique(spec):
    for i in range(2, spec.h):
        assert len(solve_exponents(spec, i)) <= 1


def test_jumps_from_shape_examples():
    assert jumps_from_shape(5, (1, 1), 1, [1]).b == (1, 6)
    assert jumps_from_shape(5, (1, 1, 1), 1, [1, 1]).b == (1, 6, 31)
    assert jumps_from_shape(7, (2,), 3, []).b == (3,)
    with pytest.raises(ValueError):
        jumps_from_shape(5, (1, 1), 1, [0])
    with pytest.raises(ValueError):
        jumps_from_shape(5, (1, 1), 1, [])


@given(st.sampled_from([5, 7, 11]), st.lists(st.integers(1, 3), min_size=1, max_size=4),
       st.integers(1, 50), st.data())
def test_forward_shapes_are_integral(p, n, b1, data):
    if b1 % p == 0:
        b1 += 1
    nu0 = data.draw(st.lists(st.integers(1, 20), min_size=len(n) - 1, max_size=len(n) - 1))
    spec = jumps_from_shape(p, n, b1, nu0)
    ups = upper_jumps(spec)
    assert all(u.denominator == 1 for u in ups)
    assert ups == [phi_by_steps(spec, b) for b in spec.b]
    for i in range(2, spec.h):
        sol = shape_exponents(spec, i, nu0[i - 2])
        assert valuation_equation_check(spec, sol)
        assert general_jump_relation(spec, sol) == nu0[i - 2] * p ** spec.exp_sum(1, i - 1)


def test_general_jump_relation_examples():
    assert general_jump_relation(S16, ev(2, 1, 1)) == 5
    assert general_jump_relation(S17, ev(2, 1, 2)) == 6
    with pytest.raises(ShapeError):
        general_jump_relation(S16, ev(2, 0, 4))


@given(small_specs())
def test_jump_relation_whenever_equation_holds(spec):
    for i in range(2, spec.h):
        for sol in solve_exponents(spec, i):
            assert general_jump_relation(spec, sol) == spec.b[i - 1] - spec.b[i - 2]


@given(small_specs())
def test_divisibility_cascade_for_integral_specs(spec):
    if not integrality_and_chain(spec)[0]:
        return
    for i in range(2, spec.h):
        for sol in solve_exponents(spec, i):
            assert divisibility_cascade(spec, sol)


def test_min_condition_examples():
    assert min_condition_check(TowerShape(S16, (ev(2, 1, 1),)))
    assert not min_condition_check(TowerShape(S17, (ev(2, 1, 2),)))
    assert min_condition_check(TowerShape(FiltrationSpec(5, (1,), (2,)), ()))


def test_theorem_examples():
    v = theorem_check(TowerShape(S16, (ev(2, 1, 1),)))
    assert (v.integral, v.condition, v.equivalent) == (True, True, True)
    v = theorem_check(TowerShape(S17, (ev(2, 1, 2),)))
    assert (v.integral, v.condition, v.equivalent) == (False, False, True)
    assert v.summary() == "integral=false condition=false equivalent=true"
    v = theorem_check(TowerShape(S27, (ev(2, 1, 1),)))
    assert list(v.upper) == [2, 3] and v.integral and v.condition


def test_invalid_shapes_rejected():
    bad = TowerShape(S16, (ev(2, 0, 4),))
    assert validate_shape(bad)
    with pytest.raises(ShapeError):
        theorem_check(bad)
    assert validate_shape(TowerShape(S16, ()))


def test_shape_json_roundtrip():
    shape = TowerShape(S16, (ev(2, 1, 1),))
    again = TowerShape.from_json(json.loads(json.dumps(shape.to_json())))
    assert again == shape


def test_small_grid_has_no_counterexamples():
    report = enumerate_and_verify(GridBounds(primes=(5,), max_h=3, max_n=1, max_b1=10, cap=200))
    assert report.ok and report.shapes > 0 and report.counterexamples == []
    assert report.forward_checked > 0


def test_h2_grid_is_vacuous():
    report = enumerate_and_verify(GridBounds(primes=(5, 7), max_h=2, max_n=2, max_b1=20))
    assert report.ok
    assert all(row[4] for row in report.rows)


@pytest.mark.parametrize("p,n", [(5, (1, 1)), (5, (1, 2)), (7, (2, 1)), (5, (1, 1, 1))])
def test_generative_enumeration_matches_spec_first(p, n):
    grid = GridBounds(primes=(p,), cap=90)
    for b1 in (1, 2, 3):
        fast = sorted((s.spec.key(), s.encode_exps()) for s in shapes_by_exponents(grid, p, n, b1))
        slow = sorted((s.spec.key(), s.encode_exps()) for s in shapes_by_specs(grid, p, n, b1))
        assert fast == slow


def test_grid_problems():
    assert GridBounds(min_h=3, max_h=2).problems()
    assert GridBounds(primes=(4,)).problems()
    assert not GridBounds().problems()
    assert all(b1 % 5 for _, _, b1 in GridBounds(max_b1=30).tasks())


def test_parallel_rows_match_serial():
    grid = GridBounds(primes=(5, 7), max_h=3, max_n=2, max_b1=8, cap=150)
    assert enumerate_and_verify(grid, 1).rows == enumerate_and_verify(grid, 3).rows
