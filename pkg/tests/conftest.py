"""Shared fixtures, brute-force oracles and the acceptance summary hook."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from ramify import FiltrationSpec, GridBounds
from ramify.hasse_arf import shapes_by_exponents

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_GRID = GridBounds(primes=(5, 7), min_h=2, max_h=4, min_n=1, max_n=2,
                             min_b1=1, max_b1=30, cap=200)

_RESULTS: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    _RESULTS[criterion] = (passed, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        passed, detail = _RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")


@lru_cache(maxsize=1)
def acceptance_specs() -> tuple[FiltrationSpec, ...]:
    """Distinct valid specs on the exhaustive grid, in a fixed order."""
    g = ACCEPTANCE_GRID
    specs = {s.spec for task in g.tasks() for s in shapes_by_exponents(g, *task)}
    return tuple(sorted(specs, key=FiltrationSpec.key))


# -- oracles -----------------------------------------------------------------

def phi_by_steps(spec: FiltrationSpec, u: Fraction) -> Fraction:
    """Integrate 1/[G_0:G_t] piece by piece between consecutive lower breaks."""
    if u <= 0:
        return Fraction(u)
    total = Fraction(0)
    t = Fraction(0)
    index = 1
    breaks = list(spec.b)
    for k, brk in enumerate(breaks):
        if u <= brk:
            return total + (u - t) / index
        total += (brk - t) / index
        t = Fraction(brk)
        index *= spec.p ** spec.n[k]
    return total + (u - t) / index


def phi_by_unit_steps(spec: FiltrationSpec, u: int) -> Fraction:
    """Sum the index over unit intervals; only valid for integer ``u >= 0``."""
    total = Fraction(0)
    for t in range(u):
        idx = 1
        for k, brk in enumerate(spec.b):
            if t >= brk:
                idx *= spec.p ** spec.n[k]
        total += Fraction(1, idx)
    return total


def semigroup_members_brute(gens, m: int) -> set[int]:
    """All sums of generators that do not exceed ``m``."""
    gens = sorted(set(gens))
    out = set()
    ranges = [range(m // g + 1) for g in gens]
    for coeffs in itertools.product(*ranges):
        s = sum(c * g for c, g in zip(coeffs, gens))
        if s <= m:
            out.add(s)
    return out


def monomial_poles_brute(spec: FiltrationSpec, m: int) -> list[tuple]:
    """Every admissible exponent tuple ``(l0, l1, ...)`` with pole order ``<= m``."""
    G = spec.order
    ranges = [range(m // G + 1)] + [range(spec.p ** n) for n in spec.n]
    out = []
    for exps in itertools.product(*ranges):
        pole = exps[0] * G + sum(l * mb for l, mb in zip(exps[1:], spec.pole_orders))
        if pole <= m:
            out.append((pole, exps))
    return out
