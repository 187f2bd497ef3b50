"""Small finite fields F_q, q = p**r, with elements encoded as integers.

An element ``c_0 + c_1 a + ... + c_{r-1} a^{r-1}`` (``a`` a root of the
modulus) is stored as ``c_0 + c_1 p + ... + c_{r-1} p^{r-1}``.  Prime fields
use plain modular arithmetic; extension fields use precomputed tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..filtration import is_prime

MAX_TABLE_ORDER = 1024


class GF:
    def __init__(self, p: int, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        if modulus is None or len(modulus) <= 2:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            mod = tuple(int(c) % p for c in modulus)
            if mod[-1] != 1:
                raise ValueError("modulus must be monic (coefficients listed low to high)")
            self.modulus = mod
        self.r = len(self.modulus) - 1
        self.q = p ** self.r
        if self.r > 1:
            if self.q > MAX_TABLE_ORDER:
                raise ValueError(f"F_{self.q} exceeds the table limit {MAX_TABLE_ORDER}")
            self._build_tables()

    # -- construction -------------------------------------------------------
    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.r):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d % self.p
        return v

    def _polymul(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k]
            if c:
                for j in range(r + 1):
                    prod[k - r + j] = (prod[k - r + j] - c * self.modulus[j]) % p
        return self._undigits(prod[:r])

    def _build_tables(self):
        q = self.q
        self._add = [[self._undigits([x + y for x, y in zip(self._digits(a), self._digits(b))])
                      for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([-x for x in self._digits(a)]) for a in range(q)]
        self._mul = [[self._polymul(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            row = self._mul[a]
            try:
                self._inv[a] = row.index(1)
            except ValueError:
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}") from None

    # -- arithmetic ---------------------------------------------------------
    def norm(self, a: int) -> int:
        if self.r == 1:
            return a % self.p
        if not 0 <= a < self.q:
            raise ValueError(f"{a} does not encode an element of F_{self.q}")
        return a

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p if self.r == 1 else self._add[a][b]

    def neg(self, a: int) -> int:
        return -a % self.p if self.r == 1 else self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p if self.r == 1 else self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return pow(a, -1, self.p) if self.r == 1 else self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` under ``Z -> F_q``."""
        return k % self.p

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, value: int) -> "FFElement":
        return FFElement(self, self.norm(value))

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.r == 1 else f"GF({self.p}^{self.r}, modulus={list(self.modulus)})"

    def to_json(self) -> dict:
        out: dict = {"p": self.p}
        if self.r > 1:
            out["modulus"] = list(self.modulus)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GF":
        return cls(int(data["p"]), data.get("modulus"))

    def format(self, a: int) -> str:
        if self.r == 1:
            return str(a)
        terms = []
        for k, d in enumerate(self._digits(a)):
            if d:
                terms.append(str(d) if k == 0 else f"{'' if d == 1 else d}a" + (f"^{k}" if k > 1 else ""))
        return "(" + "+".join(terms) + ")" if len(terms) > 1 else (terms[0] if terms else "0")


@dataclass(frozen=True)
class FFElement:
    """Operator-friendly view of a field element."""

    field: GF
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        return FFElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __neg__(self):
        return FFElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FFElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return isinstance(other, FFElement) and self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return self.field.format(self.value)
