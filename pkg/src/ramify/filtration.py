"""Lower ramification data of a wild tower over k((x)) and its Herbrand calculus.

A :class:`FiltrationSpec` records the prime ``p``, the step exponents ``n_i``
with ``[G_{b_i} : G_{b_{i+1}}] = p**n_i`` and the lower jumps ``b_i``.  The
group is assumed to be its own first ramification group (no tame part), so
``[G_0 : G_t] = 1`` for ``t <= b_1``.

All arithmetic here is exact; rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

Rational = Union[int, Fraction, str]

SMALL_PRIMES_WARNING = "p < 5 lies outside the characteristic p >= 5 hypothesis"


class SpecError(ValueError):
    """Raised when an operation needs a valid spec and gets an invalid one."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid filtration spec: " + "; ".join(self.violations))


class DomainError(ValueError):
    """Argument outside the domain [-1, oo) of the Herbrand functions."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def as_fraction(value: Rational) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = ["PASS" if self.ok else "FAIL"]
        out += [f"violation: {v}" for v in self.violations]
        out += [f"warning: {w}" for w in self.warnings]
        out += [f"note: {n}" for n in self.notes]
        return out

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations),
                "warnings": list(self.warnings), "notes": list(self.notes)}


@dataclass(frozen=True)
class FiltrationSpec:
    """Tower skeleton ``(p, n_1..n_{h-1}, b_1..b_{h-1})``; ``h = len(n) + 1``."""

    p: int
    n: tuple[int, ...]
    b: tuple[int, ...]
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))

    @property
    def h(self) -> int:
        return len(self.n) + 1

    def exp_sum(self, lo: int, hi: int) -> int:
        """``n_lo + ... + n_hi`` with 1-based indices; empty sums are 0."""
        if hi < lo:
            return 0
        return sum(self.n[lo - 1:hi])

    @property
    def order(self) -> int:
        """``|G| = p**(n_1 + ... + n_{h-1})``."""
        return self.p ** sum(self.n)

    def subgroup_order(self, i: int) -> int:
        """``|G_{b_i}| = p**(n_i + ... + n_{h-1})``; ``i = h`` gives 1."""
        return self.p ** self.exp_sum(i, self.h - 1)

    @cached_property
    def pole_orders(self) -> tuple[int, ...]:
        """The pole numbers ``m_i = |G_{b_{i+1}}| * b_i`` of the generators."""
        return tuple(self.subgroup_order(i + 1) * self.b[i - 1]
                     for i in range(1, self.h))

    def m_bar(self, i: int) -> int:
        return self.pole_orders[i - 1]

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_spec(self, strict=self.strict)

    def to_json(self) -> dict:
        return {"p": self.p, "n": list(self.n), "b": list(self.b)}

    @classmethod
    def from_json(cls, data: dict, strict: bool = True) -> "FiltrationSpec":
        try:
            p, n, b = data["p"], data["n"], data["b"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"filtration spec needs keys p, n, b: {exc}") from None
        if not isinstance(p, int) or not all(isinstance(v, int) for v in [*n, *b]):
            raise ValueError("p, n and b must be integers")
        if "h" in data and data["h"] != len(n) + 1:
            raise ValueError("h must equal len(n) + 1")
        return cls(p, tuple(n), tuple(b), strict=strict)

    def key(self) -> tuple:
        return (self.p, len(self.n), self.n, self.b)

    def __str__(self) -> str:
        n = ",".join(map(str, self.n))
        b = ",".join(map(str, self.b))
        return f"p={self.p} n=({n}) b=({b})"


def validate_spec(spec: FiltrationSpec, strict: bool = True) -> ValidationReport:
    """Check every structural invariant of ``spec``.

    ``strict`` rejects p in {2, 3}; otherwise they only produce a warning.
    Non-increasing pole orders ``m_i`` are reported as a warning: the
    arithmetic of the theorem does not need them, but a genuine tower has them.
    """
    bad: list[str] = []
    warn: list[str] = []
    p, n, b = spec.p, spec.n, spec.b
    if not is_prime(p):
        bad.append(f"p={p} is not prime")
    elif p < 5:
        (bad if strict else warn).append(SMALL_PRIMES_WARNING)
    if len(n) < 1:
        bad.append("h must be at least 2 (need at least one step exponent)")
    if len(n) != len(b):
        bad.append(f"len(n)={len(n)} differs from len(b)={len(b)}")
    if any(v < 1 for v in n):
        bad.append("step exponents n_i must be positive")
    if any(v < 1 for v in b):
        bad.append("lower jumps b_i must be positive")
    if any(x >= y for x, y in zip(b, b[1:])):
        bad.append("lower jumps not increasing")
    if is_prime(p):
        for i, v in enumerate(b, 1):
            if v % p == 0:
                bad.append(f"gcd(b_{i},p)!=1: b_{i}={v} is divisible by p={p}")
    if not bad:
        m = spec.pole_orders
        for i in range(1, len(m)):
            if m[i - 1] >= m[i]:
                warn.append(f"pole orders not increasing: m_{i}={m[i - 1]} >= m_{i + 1}={m[i]}")
    return ValidationReport(not bad, tuple(bad), tuple(warn))


def require_valid(spec: FiltrationSpec) -> None:
    report = spec.validation
    if not report.ok:
        raise SpecError(report.violations)


@dataclass(frozen=True)
class _Herbrand:
    knots: tuple[Fraction, ...]   # 0, b_1, ..., b_{h-1}
    values: tuple[Fraction, ...]  # phi at the knots
    slopes: tuple[Fraction, ...]  # slope right of each knot


def _herbrand_data(spec: FiltrationSpec) -> _Herbrand:
    cached = spec.__dict__.get("_herbrand")
    if cached is not None:
        return cached
    require_valid(spec)
    knots = [Fraction(0)] + [Fraction(v) for v in spec.b]
    slopes = [Fraction(1, spec.p ** spec.exp_sum(1, k)) for k in range(spec.h)]
    values = [Fraction(0)]
    for k in range(1, len(knots)):
        values.append(values[-1] + (knots[k] - knots[k - 1]) * slopes[k - 1])
    data = _Herbrand(tuple(knots), tuple(values), tuple(slopes))
    spec.__dict__["_herbrand"] = data
    return data


def herbrand_phi(spec: FiltrationSpec, u: Rational) -> Fraction:
    """``phi(u) = int_0^u dt / [G_0 : G_t]``, the identity on ``[-1, 0]``."""
    u = as_fraction(u)
    if u < -1:
        raise DomainError(f"phi is defined on [-1, oo), got {u}")
    if u <= 0:
        return u
    hb = _herbrand_data(spec)
    k = bisect.bisect_left(hb.knots, u) - 1
    return hb.values[k] + (u - hb.knots[k]) * hb.slopes[k]


def herbrand_psi(spec: FiltrationSpec, v: Rational) -> Fraction:
    """Inverse of :func:`herbrand_phi`."""
    v = as_fraction(v)
    if v < -1:
        raise DomainError(f"psi is defined on [-1, oo), got {v}")
    if v <= 0:
        return v
    hb = _herbrand_data(spec)
    k = bisect.bisect_left(hb.values, v) - 1
    return hb.knots[k] + (v - hb.values[k]) / hb.slopes[k]


def upper_jumps(spec: FiltrationSpec) -> list[Fraction]:
    """``phi(b_i)`` via ``b_1 + sum_j (b_j - b_{j-1}) / p**(n_1+...+n_{j-1})``."""
    require_valid(spec)
    b = spec.b
    out = [Fraction(b[0])]
    for j in range(2, spec.h):
        out.append(out[-1] + Fraction(b[j - 1] - b[j - 2], spec.p ** spec.exp_sum(1, j - 1)))
    return out


def divisibility_chain(spec: FiltrationSpec) -> bool:
    """``p**(n_1+...+n_i)`` divides ``b_{i+1} - b_i`` for ``i = 1..h-2``."""
    b = spec.b
    return all((b[i] - b[i - 1]) % spec.p ** spec.exp_sum(1, i) == 0
               for i in range(1, spec.h - 1))


def integrality_and_chain(spec: FiltrationSpec) -> tuple[bool, bool]:
    integral = all(q.denominator == 1 for q in upper_jumps(spec))
    return integral, divisibility_chain(spec)


def quotient_upper_jumps(spec: FiltrationSpec, i: int) -> list[Fraction]:
    """Upper jumps of ``Gal(F_i / K)``, the quotient by ``G_{b_i}``."""
    if not 2 <= i <= spec.h:
        raise ValueError(f"quotient level must lie in 2..{spec.h}, got {i}")
    return upper_jumps(spec)[: i - 1]


def lower_index(spec: FiltrationSpec, t: Rational) -> int:
    """``[G_0 : G_t]`` for real ``t >= 0`` (index-1 convention up to ``b_1``)."""
    t = as_fraction(t)
    k = bisect.bisect_left([Fraction(v) for v in spec.b], t)
    return spec.p ** spec.exp_sum(1, k)

