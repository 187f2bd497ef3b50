"""Truncated Laurent series over a finite field with explicit precision.

A series is ``sum_k c_k T^k`` where the coefficients for ``k < prec`` are
known; ``prec = None`` marks an exact finite sum.  Inside a tower the
variable ``T`` is the local parameter ``1/x`` at the ramified place, so an
exact polynomial in ``x`` is an exact series with nonpositive exponents.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional

from .field import GF

DEFAULT_PRECISION = 64
PRECISION_ENV = "RAMIFY_PRECISION"


class PrecisionError(ArithmeticError):
    """No nonzero coefficient is known inside the tracked precision window."""


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ValueError(f"{PRECISION_ENV} must be positive")
        return value
    return DEFAULT_PRECISION


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    field: GF
    start: int
    coeffs: tuple[int, ...]
    prec: Optional[int] = None

    def __post_init__(self):
        cs = list(self.coeffs)
        start = self.start
        if self.prec is not None and start + len(cs) > self.prec:
            cs = cs[: max(0, self.prec - start)]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        start += lead
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            start = 0
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "start", start)

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_dict(cls, field: GF, terms: Mapping[int, int],
                  prec: Optional[int] = None) -> "LaurentSeries":
        terms = {k: field.norm(v) for k, v in terms.items() if field.norm(v)}
        if prec is not None:
            terms = {k: v for k, v in terms.items() if k < prec}
        if not terms:
            return cls(field, 0, (), prec)
        lo, hi = min(terms), max(terms)
        return cls(field, lo, tuple(terms.get(k, 0) for k in range(lo, hi + 1)), prec)

    @classmethod
    def monomial(cls, field: GF, c: int, k: int) -> "LaurentSeries":
        return cls(field, k, (field.norm(c),))

    @classmethod
    def zero(cls, field: GF, prec: Optional[int] = None) -> "LaurentSeries":
        return cls(field, 0, (), prec)

    @classmethod
    def one(cls, field: GF) -> "LaurentSeries":
        return cls(field, 0, (1,))

    # -- inspection ---------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Exactly zero (not merely zero to the known precision)."""
        return not self.coeffs and self.prec is None

    def vanishes(self) -> bool:
        """No nonzero coefficient is known."""
        return not self.coeffs

    def terms(self) -> dict[int, int]:
        return {self.start + i: c for i, c in enumerate(self.coeffs) if c}

    def coefficient(self, k: int) -> int:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of T^{k} lies beyond precision {self.prec}")
        i = k - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def valuation(self) -> int:
        if self.coeffs:
            return self.start
        if self.prec is None:
            raise ValueError("valuation of the zero series")
        raise PrecisionError(f"series is O(T^{self.prec}); no nonzero coefficient known")

    def lower_bound(self) -> Optional[int]:
        """Valuation if known, otherwise the precision (``None`` for exact zero)."""
        return self.start if self.coeffs else self.prec

    def leading(self) -> tuple[int, int]:
        """``(k, c)`` of the lowest-order nonzero term."""
        return self.valuation(), self.coeffs[0]

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "LaurentSeries") -> None:
        if other.field != self.field:
            raise ValueError("series over different fields")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        f = self.field
        terms = self.terms()
        for k, c in other.terms().items():
            terms[k] = f.add(terms.get(k, 0), c)
        return LaurentSeries.from_dict(f, terms, _min_prec(self.prec, other.prec))

    def __neg__(self) -> "LaurentSeries":
        f = self.field
        return LaurentSeries(f, self.start, tuple(f.neg(c) for c in self.coeffs), self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c: int) -> "LaurentSeries":
        f = self.field
        c = f.norm(c)
        if c == 0:
            return LaurentSeries.zero(f, self.prec)
        return LaurentSeries(f, self.start, tuple(f.mul(c, a) for a in self.coeffs), self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``T^k``."""
        prec = None if self.prec is None else self.prec + k
        return LaurentSeries(self.field, self.start + k, self.coeffs, prec)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(f)
        la, lb = self.lower_bound(), other.lower_bound()
        prec = _min_prec(None if self.prec is None else self.prec + lb,
                         None if other.prec is None else other.prec + la)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(f, prec)
        a, b = self.coeffs, other.coeffs
        n = len(a) + len(b) - 1
        if prec is not None:
            n = min(n, prec - self.start - other.start)
        out = [0] * max(n, 0)
        for i, x in enumerate(a):
            if not x or i >= n:
                continue
            for j in range(min(len(b), n - i)):
                y = b[j]
                if y:
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return LaurentSeries(f, self.start + other.start, tuple(out), prec)

    def inverse(self, precision: Optional[int] = None) -> "LaurentSeries":
        """Multiplicative inverse.

        The relative precision of the result is that of ``self`` when inexact,
        otherwise ``precision`` (default from the environment).
        """
        f = self.field
        v = self.valuation()
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(f, -v, (f.inv(self.coeffs[0]),))
        rel = self.prec - v if self.prec is not None else (precision or default_precision())
        if precision is not None:
            rel = min(rel, precision)
        a = self.coeffs
        c0 = f.inv(a[0])
        out = [c0]
        for k in range(1, rel):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s = f.add(s, f.mul(a[j], out[k - j]))
            out.append(f.neg(f.mul(c0, s)))
        return LaurentSeries(f, -v, tuple(out), -v + rel)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inverse()

    def __pow__(self, e: int) -> "LaurentSeries":
        if e < 0:
            return self.inverse() ** (-e)
        out = LaurentSeries.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field, self.start, self.coeffs, self.prec) == (
            other.field, other.start, other.coeffs, other.prec)

    def __hash__(self) -> int:
        return hash((self.start, self.coeffs, self.prec))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equal on the common known window."""
        return (self - other).vanishes()

    def __repr__(self) -> str:
        return f"LaurentSeries({self.format('T')})"

    def format(self, var: str = "T") -> str:
        parts = []
        for k, c in sorted(self.terms().items()):
            cs = self.field.format(c)
            if k == 0:
                parts.append(cs)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
        if self.prec is not None:
            parts.append(f"O({var}^{self.prec})")
        return " + ".join(parts) or "0"
