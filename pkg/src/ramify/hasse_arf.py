"""Min-term condition on the constants ``D_i`` versus integrality of upper jumps.

For level ``i`` the deepest-pole monomial of ``D_i`` is
``a_i x^nu0 f_1^nu_1 ... f_{i-1}^nu_{i-1}`` and its pole order must equal the
pole order ``p**n_i * m_i`` of ``f_i**(p**n_i)``.  That single linear relation
links the exponents to the lower jumps, and the upper jumps are integral exactly
when every level has the shape ``nu = (0, ..., 0, 1)``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .filtration import (
    FiltrationSpec,
    SpecError,
    herbrand_phi,
    is_prime,
    require_valid,
    upper_jumps,
    validate_spec,
)


class ShapeError(ValueError):
    """A TowerShape whose exponent data is malformed or inconsistent with its spec."""


class EmptyGridError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentVector:
    """Exponents ``(nu0; nu_1..nu_{i-1})`` of ``min D_i``."""

    i: int
    nu0: int
    nu: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(int(v) for v in self.nu))
        if len(self.nu) != self.i - 1:
            raise ShapeError(f"level {self.i} needs {self.i - 1} generator exponents, got {len(self.nu)}")

    def to_json(self) -> dict:
        return {"i": self.i, "nu0": self.nu0, "nu": list(self.nu)}

    @classmethod
    def from_json(cls, data: dict) -> "ExponentVector":
        return cls(int(data["i"]), int(data["nu0"]), tuple(data.get("nu", ())))

    def encode(self) -> str:
        return f"{self.nu0}|{','.join(map(str, self.nu))}"


def check_bounds(spec: FiltrationSpec, ev: ExponentVector) -> None:
    if not 1 <= ev.i <= spec.h - 1:
        raise ShapeError(f"level {ev.i} outside 1..{spec.h - 1}")
    if ev.nu0 < 0:
        raise ShapeError(f"nu_{ev.i},0={ev.nu0} is negative")
    for j, v in enumerate(ev.nu, 1):
        if not 0 <= v < spec.p ** spec.n[j - 1]:
            raise ShapeError(f"nu_{ev.i},{j}={v} outside 0..{spec.p ** spec.n[j - 1] - 1}")


def target_pole(spec: FiltrationSpec, i: int) -> int:
    """Pole order ``p**n_i * m_i`` that ``D_i`` must have."""
    return spec.p ** spec.n[i - 1] * spec.m_bar(i)


def exponent_pole(spec: FiltrationSpec, ev: ExponentVector) -> int:
    return ev.nu0 * spec.order + sum(v * m for v, m in zip(ev.nu, spec.pole_orders))


def valuation_equation_check(spec: FiltrationSpec, ev: ExponentVector) -> bool:
    require_valid(spec)
    check_bounds(spec, ev)
    return exponent_pole(spec, ev) == target_pole(spec, ev.i)


def nu0_ceiling(spec: FiltrationSpec, i: int) -> int:
    return target_pole(spec, i) // spec.order


def solve_exponents(spec: FiltrationSpec, i: int,
                    nu0_bound: Optional[int] = None) -> list[ExponentVector]:
    """Every in-bounds exponent vector at level ``i`` meeting the pole-order equation."""
    require_valid(spec)
    if not 2 <= i <= spec.h - 1:
        raise ValueError(f"level must lie in 2..{spec.h - 1}, got {i}")
    bound = nu0_ceiling(spec, i)
    if nu0_bound is not None:
        bound = min(bound, nu0_bound)
    G, m = spec.order, spec.pole_orders
    found = []

    def rec(j: int, rest: int, tail: tuple[int, ...]):
        if j == 0:
            if rest % G == 0 and rest // G <= bound:
                found.append(ExponentVector(i, rest // G, tail))
            return
        for v in range(min(spec.p ** spec.n[j - 1] - 1, rest // m[j - 1]) + 1):
            rec(j - 1, rest - v * m[j - 1], (v,) + tail)

    rec(i - 1, target_pole(spec, i), ())
    return sorted(found, key=lambda ev: (ev.nu0, ev.nu))


def jumps_from_shape(p: int, n: Sequence[int], b1: int,
                     nu0_list: Sequence[int]) -> FiltrationSpec:
    """Lower jumps forced by the min-term shape: ``b_i = b_{i-1} + nu0 * p**(n_1+...+n_{i-1})``."""
    n = tuple(n)
    if len(nu0_list) != len(n) - 1:
        raise ValueError(f"need {len(n) - 1} values of nu0 for h={len(n) + 1}")
    if any(v < 1 for v in nu0_list):
        raise ValueError("nu0 must be positive for the jumps to increase")
    b = [b1]
    for i, nu0 in enumerate(nu0_list, 2):
        b.append(b[-1] + nu0 * p ** sum(n[:i - 1]))
    spec = FiltrationSpec(p, n, tuple(b))
    if math.gcd(b1, p) == 1:
        assert all(v % p for v in b), "jump shift broke coprimality with p"
    require_valid(spec)
    return spec


def shape_exponents(spec: FiltrationSpec, i: int, nu0: int) -> ExponentVector:
    """The exponent vector ``(nu0; 0, ..., 0, 1)`` of the theorem's condition."""
    return ExponentVector(i, nu0, (0,) * (i - 2) + (1,))


def general_jump_relation(spec: FiltrationSpec, ev: ExponentVector) -> int:
    """``b_i - b_{i-1}`` rebuilt from the exponents, checked against ``spec.b``."""
    require_valid(spec)
    check_bounds(spec, ev)
    i = ev.i
    if i < 2:
        raise ShapeError("the jump relation starts at level 2")
    p, b = spec.p, spec.b
    diff = ev.nu0 * p ** spec.exp_sum(1, i - 1)
    diff += sum(v * p ** spec.exp_sum(j + 1, i - 1) * b[j - 1] for j, v in enumerate(ev.nu, 1))
    diff -= b[i - 2]
    if diff != b[i - 1] - b[i - 2]:
        raise ShapeError(
            f"level {i}: exponents give b_i - b_(i-1) = {diff}, spec has {b[i - 1] - b[i - 2]}")
    return diff


def divisibility_cascade(spec: FiltrationSpec, ev: ExponentVector) -> bool:
    """``p**(n_1+...+n_{i-1})`` divides the exponent part of the jump difference."""
    i, p, b = ev.i, spec.p, spec.b
    rhs = sum(v * p ** spec.exp_sum(j + 1, i - 1) * b[j - 1] for j, v in enumerate(ev.nu[:-1], 1))
    rhs += (ev.nu[-1] - 1) * b[i - 2]
    return rhs % p ** spec.exp_sum(1, i - 1) == 0


@dataclass(frozen=True)
class TowerShape:
    spec: FiltrationSpec
    exps: tuple[ExponentVector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(self.exps))

    def to_json(self) -> dict:
        return dict(self.spec.to_json(), exps=[ev.to_json() for ev in self.exps])

    @classmethod
    def from_json(cls, data: dict, strict: bool = True) -> "TowerShape":
        spec = FiltrationSpec.from_json(data, strict=strict)
        exps = tuple(ExponentVector.from_json(e) for e in data.get("exps", ()))
        return cls(spec, exps)

    def encode_exps(self) -> str:
        return ";".join(ev.encode() for ev in self.exps) or "-"


def validate_shape(shape: TowerShape) -> list[str]:
    """Problems with ``shape``; empty when it is a well-formed, equation-consistent shape."""
    spec = shape.spec
    report = validate_spec(spec, strict=spec.strict)
    if not report.ok:
        return list(report.violations)
    levels = [ev.i for ev in shape.exps]
    if levels != list(range(2, spec.h)):
        return [f"exponent levels {levels} must be exactly 2..{spec.h - 1}"]
    problems = []
    for ev in shape.exps:
        try:
            check_bounds(spec, ev)
        except ShapeError as exc:
            problems.append(str(exc))
            continue
        if exponent_pole(spec, ev) != target_pole(spec, ev.i):
            problems.append(
                f"level {ev.i}: pole order {exponent_pole(spec, ev)} of the min term "
                f"differs from p^n_i*m_i = {target_pole(spec, ev.i)}")
    return problems


def min_condition_check(shape: TowerShape) -> bool:
    """``min D_i = a_i x^nu0 f_{i-1}`` for every level ``i >= 2``."""
    return all(all(v == 0 for v in ev.nu[:-1]) and ev.nu[-1] == 1
               for ev in shape.exps)


@dataclass(frozen=True)
class TheoremVerdict:
    shape: TowerShape
    upper: tuple[Fraction, ...]
    integral: bool
    condition: bool
    counterexample: Optional[dict] = None

    @property
    def equivalent(self) -> bool:
        return self.integral == self.condition

    def summary(self) -> str:
        return (f"integral={str(self.integral).lower()} "
                f"condition={str(self.condition).lower()} "
                f"equivalent={str(self.equivalent).lower()}")

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "upper_jumps": [str(q) for q in self.upper],
                "integral": self.integral, "condition": self.condition,
                "equivalent": self.equivalent, "counterexample": self.counterexample}


def theorem_check(shape: TowerShape) -> TheoremVerdict:
    problems = validate_shape(shape)
    if problems:
        raise ShapeError("; ".join(problems))
    upper = tuple(upper_jumps(shape.spec))
    integral = all(q.denominator == 1 for q in upper)
    condition = min_condition_check(shape)
    counterexample = None
    if integral != condition:
        counterexample = dict(shape.to_json(), upper_jumps=[str(q) for q in upper],
                              integral=integral, condition=condition)
    return TheoremVerdict(shape, upper, integral, condition, counterexample)


# -- exhaustive verification -------------------------------------------------

@dataclass(frozen=True)
class GridBounds:
    primes: tuple[int, ...] = (5,)
    min_h: int = 2
    max_h: int = 3
    min_n: int = 1
    max_n: int = 1
    min_b1: int = 1
    max_b1: int = 10
    cap: int = 200
    nu0_bound: Optional[int] = None
    increasing_poles_only: bool = False

    def problems(self) -> list[str]:
        out = []
        if not self.primes:
            out.append("no primes given")
        composite = [p for p in self.primes if not is_prime(p)]
        if composite:
            out.append(f"not prime: {composite}")
        if self.min_h < 2 or self.max_h < self.min_h:
            out.append(f"h range {self.min_h}..{self.max_h} is empty or below 2")
        if self.min_n < 1 or self.max_n < self.min_n:
            out.append(f"n range {self.min_n}..{self.max_n} is empty or below 1")
        if self.min_b1 < 1 or self.max_b1 < self.min_b1:
            out.append(f"b1 range {self.min_b1}..{self.max_b1} is empty or below 1")
        if self.cap < self.min_b1:
            out.append(f"cap {self.cap} below the smallest b1")
        if self.nu0_bound is not None and self.nu0_bound < 0:
            out.append("nu0 bound must be nonnegative")
        return out

    def tasks(self) -> list[tuple[int, tuple[int, ...], int]]:
        """Independent work units ``(p, n, b1)`` in canonical order."""
        out = []
        for p in sorted(self.primes):
            for h in range(self.min_h, self.max_h + 1):
                for n in itertools.product(range(self.min_n, self.max_n + 1), repeat=h - 1):
                    for b1 in range(self.min_b1, min(self.max_b1, self.cap) + 1):
                        if b1 % p:
                            out.append((p, n, b1))
        return out

    def to_json(self) -> dict:
        return {"primes": list(self.primes), "min_h": self.min_h, "max_h": self.max_h,
                "min_n": self.min_n, "max_n": self.max_n, "min_b1": self.min_b1,
                "max_b1": self.max_b1, "cap": self.cap, "nu0_bound": self.nu0_bound,
                "increasing_poles_only": self.increasing_poles_only}

    @classmethod
    def from_json(cls, data: dict) -> "GridBounds":
        data = dict(data)
        data["primes"] = tuple(data.get("primes", (5,)))
        return cls(**data)


def _increasing_poles(spec: FiltrationSpec) -> bool:
    m = spec.pole_orders
    return all(x < y for x, y in zip(m, m[1:]))


def shapes_by_exponents(grid: GridBounds, p: int, n: tuple[int, ...],
                        b1: int) -> Iterator[TowerShape]:
    """Equation-consistent shapes with the given ``p, n, b1``, built level by level.

    Each level's exponents determine the next jump, so walking all in-bounds
    exponents reaches every spec that admits a solution, each with every one of
    its solutions.
    """
    h = len(n) + 1

    def extend(b: tuple[int, ...], exps: tuple[ExponentVector, ...]):
        i = len(b) + 1
        if i == h:
            spec = FiltrationSpec(p, n, b)
            if not grid.increasing_poles_only or _increasing_poles(spec):
                yield TowerShape(spec, exps)
            return
        step = [p ** sum(n[j:i - 1]) for j in range(i)]  # step[j] = p^(n_{j+1}+...+n_{i-1})

        def pick(j: int, acc: int, nu: tuple[int, ...]):
            if j == 0:
                nu0 = 0
                while acc + nu0 * step[0] <= grid.cap and (
                        grid.nu0_bound is None or nu0 <= grid.nu0_bound):
                    bi = acc + nu0 * step[0]
                    if bi > b[-1] and bi % p:
                        yield from extend(b + (bi,), exps + (ExponentVector(i, nu0, nu),))
                    nu0 += 1
                return
            for v in range(p ** n[j - 1]):
                val = acc + v * step[j] * b[j - 1]
                if val > grid.cap:
                    break
                yield from pick(j - 1, val, (v,) + nu)

        yield from pick(i - 1, 0, ())

    yield from extend((b1,), ())


def shapes_by_specs(grid: GridBounds, p: int, n: tuple[int, ...],
                    b1: int) -> Iterator[TowerShape]:
    """Same shapes as :func:`shapes_by_exponents`, via every valid spec and its solutions.

    Quadratic in the cap; meant as a cross-check on small grids.
    """
    h = len(n) + 1
    for tail in itertools.combinations(range(b1 + 1, grid.cap + 1), h - 2):
        spec = FiltrationSpec(p, n, (b1,) + tail)
        if not spec.validation.ok:
            continue
        if grid.increasing_poles_only and not _increasing_poles(spec):
            continue
        per_level = [solve_exponents(spec, i, grid.nu0_bound) for i in range(2, h)]
        for exps in itertools.product(*per_level):
            yield TowerShape(spec, exps)


def _row(verdict: TheoremVerdict) -> tuple:
    spec = verdict.shape.spec
    return (spec.key(), verdict.shape.encode_exps(), tuple(verdict.upper),
            verdict.integral, verdict.condition, _increasing_poles(spec),
            verdict.counterexample)


def _forward_failures(grid: GridBounds, p: int, n: tuple[int, ...], b1: int) -> tuple[int, list]:
    """Build every min-term-shaped tower for ``(p, n, b1)`` and test integrality."""
    checked, failures = 0, []
    h = len(n) + 1

    def rec(nus: tuple[int, ...], last: int):
        nonlocal checked
        i = len(nus) + 2
        if i == h:
            spec = jumps_from_shape(p, n, b1, nus)
            checked += 1
            if any(q.denominator != 1 for q in upper_jumps(spec)):
                failures.append(spec.to_json())
            return
        step = p ** sum(n[:i - 1])
        nu0 = 1
        while last + nu0 * step <= grid.cap and (grid.nu0_bound is None or nu0 <= grid.nu0_bound):
            rec(nus + (nu0,), last + nu0 * step)
            nu0 += 1

    rec((), b1)
    return checked, failures


def _run_task(args) -> tuple[list, int, list]:
    grid, p, n, b1 = args
    rows = [_row(theorem_check(shape)) for shape in shapes_by_exponents(grid, p, n, b1)]
    checked, failures = _forward_failures(grid, p, n, b1)
    return rows, checked, failures


@dataclass
class VerificationReport:
    grid: GridBounds
    rows: list = field(default_factory=list)
    forward_checked: int = 0
    forward_failures: list = field(default_factory=list)

    @property
    def shapes(self) -> int:
        return len(self.rows)

    @property
    def specs(self) -> int:
        return len({r[0] for r in self.rows})

    @property
    def integral(self) -> int:
        return sum(1 for r in self.rows if r[3])

    @property
    def non_integral(self) -> int:
        return self.shapes - self.integral

    @property
    def realizable(self) -> int:
        return sum(1 for r in self.rows if r[5])

    @property
    def counterexamples(self) -> list[dict]:
        return [r[6] for r in self.rows if r[6] is not None]

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.forward_failures

    def summary(self) -> dict:
        return {"shapes": self.shapes, "specs": self.specs, "integral": self.integral,
                "non_integral": self.non_integral, "increasing_poles": self.realizable,
                "forward_checked": self.forward_checked,
                "forward_failures": len(self.forward_failures),
                "counterexamples": len(self.counterexamples)}

    def summary_line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.summary().items())

    def tsv_lines(self) -> Iterator[str]:
        yield "p\tn\tb\texps\tupper_jumps\tintegral\tcondition\tincreasing_poles"
        for key, exps, upper, integral, condition, inc, _ in self.rows:
            p, _, n, b = key
            yield "\t".join([str(p), ",".join(map(str, n)), ",".join(map(str, b)), exps,
                             ",".join(map(str, upper)), str(integral).lower(),
                             str(condition).lower(), str(inc).lower()])

    def to_json(self) -> dict:
        rows = [{"p": key[0], "n": list(key[2]), "b": list(key[3]), "exps": exps,
                 "upper_jumps": [str(q) for q in upper], "integral": integral,
                 "condition": condition, "increasing_poles": inc}
                for key, exps, upper, integral, condition, inc, _ in self.rows]
        return {"grid": self.grid.to_json(), "summary": self.summary(),
                "counterexamples": self.counterexamples,
                "forward_failures": self.forward_failures, "rows": rows}


def enumerate_and_verify(grid: GridBounds, workers: int = 1) -> VerificationReport:
    """Check the equivalence on every equation-consistent shape of ``grid``.

    Work is split by ``(p, n, b1)``; results are merged in spec order so the
    report does not depend on ``workers``.
    """
    problems = grid.problems()
    if problems:
        raise EmptyGridError("; ".join(problems))
    tasks = [(grid, p, n, b1) for p, n, b1 in grid.tasks()]
    if not tasks:
        raise EmptyGridError("grid contains no (p, n, b1) combination")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_run_task(t) for t in tasks]
    report = VerificationReport(grid)
    for rows, checked, failures in results:
        report.rows.extend(rows)
        report.forward_checked += checked
        report.forward_failures.extend(failures)
    report.rows.sort(key=lambda r: (r[0], r[1]))
    return report


def phi_at_jumps(spec: FiltrationSpec) -> list[Fraction]:
    """``herbrand_phi`` evaluated at each lower jump (the integral route)."""
    return [herbrand_phi(spec, b) for b in spec.b]


__all__ = [
    "EmptyGridError", "ExponentVector", "GridBounds", "ShapeError", "SpecError",
    "TheoremVerdict", "TowerShape", "VerificationReport", "check_bounds",
    "divisibility_cascade", "enumerate_and_verify", "general_jump_relation",
    "jumps_from_shape", "min_condition_check", "phi_at_jumps", "shape_exponents",
    "shapes_by_exponents", "shapes_by_specs", "solve_exponents", "theorem_check",
    "validate_shape", "valuation_equation_check",
]
