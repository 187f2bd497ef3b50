"""Numerical semigroups, used for the Weierstrass semigroup of the ramified point."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .filtration import FiltrationSpec, require_valid


@dataclass(frozen=True)
class NumericalSemigroup:
    """Additive monoid of nonnegative integers spanned by ``generators``."""

    generators: tuple[int, ...]

    def __post_init__(self):
        gens = tuple(sorted(set(int(g) for g in self.generators)))
        if not gens or gens[0] <= 0:
            raise ValueError("generators must be positive integers")
        if math.gcd(*gens) != 1:
            raise ValueError(f"generators {gens} have gcd {math.gcd(*gens)} != 1")
        object.__setattr__(self, "generators", gens)

    def members_up_to(self, m: int) -> list[bool]:
        """Membership table for ``0..m``."""
        table = [False] * (m + 1)
        if m < 0:
            return table
        table[0] = True
        for s in range(1, m + 1):
            for g in self.generators:
                if g > s:
                    break
                if table[s - g]:
                    table[s] = True
                    break
        return table

    def contains(self, m: int) -> bool:
        if m < 0:
            return False
        return self.members_up_to(m)[m]

    __contains__ = contains

    def count_up_to(self, m: int) -> int:
        return sum(self.members_up_to(m))

    def elements_up_to(self, m: int) -> list[int]:
        return [s for s, ok in enumerate(self.members_up_to(m)) if ok]

    def minimal_generators(self) -> tuple[int, ...]:
        """Elements that are not sums of two nonzero elements of the semigroup."""
        top = self.generators[-1]
        window = (1 << (top + 1)) - 1
        reach = 1  # bit s set iff s is a sum of the generators seen so far
        out = []
        for g in self.generators:
            if not reach >> g & 1:
                out.append(g)
                step = g
                while step <= top:
                    reach |= (reach << step) & window
                    step *= 2
        return tuple(out)


def weierstrass_semigroup(spec: FiltrationSpec) -> NumericalSemigroup:
    """Semigroup generated by ``|G|`` and the pole orders ``m_1..m_{h-1}``."""
    require_valid(spec)
    return NumericalSemigroup((spec.order, *spec.pole_orders))


def contains(sg: NumericalSemigroup, m: int) -> bool:
    return sg.contains(m)


def count_up_to(sg: NumericalSemigroup, m: int) -> int:
    return sg.count_up_to(m)


def minimal_generators(sg: NumericalSemigroup) -> tuple[int, ...]:
    return sg.minimal_generators()
