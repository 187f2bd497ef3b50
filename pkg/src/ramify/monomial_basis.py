"""Admissible monomials ``x^l0 f_1^l1 ... f_s^ls`` and one-point Riemann-Roch bases.

Valuations are normalized on the top field: ``v(x) = -|G|`` and
``v(f_i) = -m_i``.  Exponents satisfy ``l0 >= 0`` and ``0 <= l_j < p**n_j``;
a negative power of ``x`` would introduce a pole away from the ramified point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .filtration import FiltrationSpec, require_valid


class InadmissibleMonomial(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent data only; trailing zero exponents are dropped."""

    l0: int
    l: tuple[int, ...] = ()

    def __post_init__(self):
        l = [int(v) for v in self.l]
        while l and l[-1] == 0:
            l.pop()
        object.__setattr__(self, "l", tuple(l))

    def exponent(self, j: int) -> int:
        return self.l[j - 1] if j <= len(self.l) else 0

    def padded(self, length: int) -> tuple[int, ...]:
        return self.l + (0,) * (length - len(self.l))

    def to_json(self) -> dict:
        return {"l0": self.l0, "l": list(self.l)}

    @classmethod
    def from_json(cls, data: dict) -> "Monomial":
        return cls(int(data["l0"]), tuple(data.get("l", ())))

    def label(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"f{j}" for j in range(1, len(self.l) + 1)]
        parts = []
        for name, e in [("x", self.l0), *zip(names, self.l)]:
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


def check_admissible(spec: FiltrationSpec, mono: Monomial) -> None:
    if mono.l0 < 0:
        raise InadmissibleMonomial(f"x-exponent must be nonnegative, got {mono.l0}")
    if len(mono.l) > spec.h - 1:
        raise InadmissibleMonomial(f"{len(mono.l)} generator exponents for h={spec.h}")
    for j, e in enumerate(mono.l, 1):
        if not 0 <= e < spec.p ** spec.n[j - 1]:
            raise InadmissibleMonomial(
                f"exponent l_{j}={e} outside 0..{spec.p ** spec.n[j - 1] - 1}")


def monomial_valuation(spec: FiltrationSpec, mono: Monomial) -> int:
    check_admissible(spec, mono)
    return -(mono.l0 * spec.order
             + sum(e * m for e, m in zip(mono.l, spec.pole_orders)))


@dataclass(frozen=True)
class RRBasis:
    m: int
    monomials: tuple[Monomial, ...]
    valuations: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def to_json(self) -> dict:
        return {"m": self.m,
                "monomials": [dict(mono.to_json(), v=v)
                              for mono, v in zip(self.monomials, self.valuations)]}


def _enumerate(spec: FiltrationSpec, s: int, bound: int) -> Iterator[tuple[int, Monomial]]:
    """All admissible monomials in ``f_1..f_s`` with pole order ``<= bound``."""
    G = spec.order
    m = spec.pole_orders

    def rec(j: int, budget: int, tail: tuple[int, ...]):
        if j == 0:
            for l0 in range(budget // G + 1):
                yield bound - budget + l0 * G, Monomial(l0, tail)
            return
        for e in range(min(spec.p ** spec.n[j - 1] - 1, budget // m[j - 1]) + 1):
            yield from rec(j - 1, budget - e * m[j - 1], (e,) + tail)

    for pole, mono in rec(s, bound, ()):
        yield -pole, mono


def rr_basis(spec: FiltrationSpec, m: int) -> RRBasis:
    """Monomial basis of ``L(mP)``, sorted from valuation 0 down to ``-m``.

    Only ``f_1..f_s`` enter, where ``s`` is the largest index with ``m_s <= m``.
    """
    require_valid(spec)
    if m < 0:
        raise ValueError("pole bound m must be nonnegative")
    s = max((i for i, mi in enumerate(spec.pole_orders, 1) if mi <= m), default=0)
    items = sorted(_enumerate(spec, s, m), key=lambda t: -t[0])
    return RRBasis(m, tuple(mono for _, mono in items), tuple(v for v, _ in items))


def admissible_monomials(spec: FiltrationSpec, bound: int) -> list[tuple[int, Monomial]]:
    """(valuation, monomial) for every admissible monomial with valuation >= -bound."""
    require_valid(spec)
    return list(_enumerate(spec, spec.h - 1, bound))


def distinct_valuations_check(spec: FiltrationSpec, bound: int) -> bool:
    """True iff no two admissible monomials of pole order ``<= bound`` share a valuation.

    The reachable pole orders are kept as a bitmask.  Each generator (``x``
    last) contributes shifted copies of the mask, one per exponent; two copies
    overlapping means two different monomials with the same pole order.
    """
    require_valid(spec)
    steps = [(m, spec.p ** n - 1) for m, n in zip(spec.pole_orders, spec.n)]
    steps.append((spec.order, max(bound, 0) // spec.order))
    return collision_free(steps, bound)


def collision_free(steps: Sequence[tuple[int, int]], bound: int) -> bool:
    """True iff the sums ``sum e_k * w_k`` (``0 <= e_k <= top_k``) that are ``<= bound``
    arise from only one exponent vector each; ``steps`` lists ``(w_k, top_k)``."""
    if bound < 0:
        return True
    window = (1 << (bound + 1)) - 1
    reach = 1
    for w, top in steps:
        acc = reach
        for e in range(1, top + 1):
            if e * w > bound:
                break
            shifted = (reach << (e * w)) & window
            if acc & shifted:
                return False
            acc |= shifted
        reach = acc
    return True
