"""Explicit Artin-Schreier towers ``P_i(f_i) = D_i`` over F_q((1/x)).

Elements are fractions ``N / D`` of polynomials in the generators
``f_1..f_{h-1}`` whose coefficients are Laurent series in ``T = 1/x``.
Every polynomial is kept reduced (``0 <= l_j < p**n_j``).  Distinct reduced
monomials have distinct valuations modulo ``|G|``, so the valuation of a
polynomial is the minimum over its terms, with ``v(T) = |G|`` and
``v(f_j) = -m_j``.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from ..filtration import FiltrationSpec, ValidationReport, validate_spec
from ..hasse_arf import ExponentVector, TowerShape
from .field import GF
from .series import LaurentSeries, PrecisionError

Exps = tuple[int, ...]
Poly = dict  # Exps -> LaurentSeries


class TowerError(ValueError):
    pass


@dataclass(frozen=True)
class AdditivePolynomial:
    """``X^(p^n) + a_{n-1} X^(p^(n-1)) + ... + a_0 X`` over F_q."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != self.n:
            raise TowerError(f"additive polynomial of degree p^{self.n} needs {self.n} coefficients")
        if self.coeffs[0] == 0:
            raise TowerError("a_0 must be nonzero (separable additive polynomial)")


class TowerElement:
    """``num / den`` inside a :class:`TowerInstance`; immutable by convention."""

    __slots__ = ("tower", "num", "den")

    def __init__(self, tower: "TowerInstance", num: Poly, den: Optional[Poly] = None):
        self.tower = tower
        self.num = num
        self.den = den if den is not None else tower._one_poly()
        if _poly_vanishes(self.den):
            raise ZeroDivisionError("tower element with zero denominator")

    def _lift(self, other) -> "TowerElement":
        if isinstance(other, TowerElement):
            return other
        if isinstance(other, int):
            return self.tower.const(other)
        return NotImplemented

    @property
    def is_polynomial(self) -> bool:
        return self.den == self.tower._one_poly()

    def __add__(self, other):
        o = self._lift(other)
        t = self.tower
        if self.den == o.den:
            return TowerElement(t, _poly_add(self.num, o.num), self.den)
        return TowerElement(t, _poly_add(t.mul_poly(self.num, o.den), t.mul_poly(o.num, self.den)),
                            t.mul_poly(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, _poly_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        t = self.tower
        den = self.den if o.is_polynomial else (o.den if self.is_polynomial else t.mul_poly(self.den, o.den))
        return TowerElement(t, t.mul_poly(self.num, o.num), den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        t = self.tower
        return TowerElement(t, t.mul_poly(self.num, o.den), t.mul_poly(self.den, o.num))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.tower.one() / (self ** -e)
        out, base = self.tower.one(), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def vanishes(self) -> bool:
        return _poly_vanishes(self.num)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        t = self.tower
        return _poly_vanishes(_poly_add(t.mul_poly(self.num, o.den),
                                        _poly_neg(t.mul_poly(o.num, self.den))))

    __hash__ = None  # type: ignore[assignment]

    @property
    def level(self) -> int:
        """Smallest ``i`` with the element in ``F_i`` as written (``1`` means the base field)."""
        top = 0
        for poly in (self.num, self.den):
            for exps in poly:
                for j, e in enumerate(exps, 1):
                    if e:
                        top = max(top, j)
        return top + 1

    def __repr__(self) -> str:
        return f"TowerElement({self.tower.format(self)})"


def _poly_vanishes(poly: Poly) -> bool:
    return all(c.vanishes() for c in poly.values())


def _poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, c in b.items():
        out[k] = out[k] + c if k in out else c
    return {k: c for k, c in out.items() if not c.is_zero()}


def _poly_neg(a: Poly) -> Poly:
    return {k: -c for k, c in a.items()}


@dataclass(frozen=True)
class JumpMeasurement:
    sigma: str
    uniformizer: str
    difference_valuation: int

    @property
    def jump(self) -> int:
        return self.difference_valuation - 1


ElementSource = Union[str, Sequence[Mapping], TowerElement, None]


class TowerInstance:
    """A concrete tower with its defining equations and named automorphisms."""

    def __init__(self, spec: FiltrationSpec, field: GF,
                 additive: Sequence[AdditivePolynomial],
                 constants: Sequence[ElementSource],
                 automorphisms: Optional[Mapping[str, Sequence[ElementSource]]] = None,
                 names: Optional[Sequence[str]] = None,
                 exps: Optional[Sequence[ExponentVector]] = None,
                 name: str = ""):
        report = validate_spec(spec, strict=spec.strict)
        if not report.ok:
            raise TowerError("; ".join(report.violations))
        if field.p != spec.p:
            raise TowerError(f"field characteristic {field.p} differs from p={spec.p}")
        self.spec = spec
        self.field = field
        self.name = name
        self.k = spec.h - 1
        self.names = tuple(names) if names else tuple(f"f{j}" for j in range(1, self.k + 1))
        if len(self.names) != self.k or len(set(self.names)) != self.k or "x" in self.names:
            raise TowerError(f"need {self.k} distinct generator names other than 'x'")
        self.additive = tuple(additive)
        if len(self.additive) != self.k:
            raise TowerError(f"need {self.k} additive polynomials")
        for i, (ap, n) in enumerate(zip(self.additive, spec.n), 1):
            if ap.n != n:
                raise TowerError(f"level {i}: additive polynomial has n={ap.n}, spec has n={n}")
        self.degrees = tuple(spec.p ** n for n in spec.n)
        self.exps = tuple(exps) if exps else ()
        self._D: list[Poly] = []
        for i, src in enumerate(constants, 1):
            e = self.element(src)
            if not e.is_polynomial:
                raise TowerError(f"D_{i} must be a polynomial in x and the lower generators")
            if e.level > i:
                raise TowerError(f"D_{i} involves generators of level >= {i}")
            self._D.append(e.num)
        if len(self._D) != self.k:
            raise TowerError(f"need {self.k} constants D_i")
        self.automorphisms: dict[str, tuple[Poly, ...]] = {}
        for label, shifts in (automorphisms or {}).items():
            shifts = list(shifts)
            if len(shifts) != self.k:
                raise TowerError(f"automorphism {label!r} needs {self.k} shifts")
            polys = []
            for j, src in enumerate(shifts, 1):
                c = self.element(src)
                if not c.is_polynomial:
                    raise TowerError(f"automorphism {label!r}: shift C_{j} must be a polynomial")
                polys.append(c.num)
            self.automorphisms[label] = tuple(polys)
        self._power_cache: dict = {}

    # -- basic elements -------------------------------------------------------
    @property
    def order(self) -> int:
        return self.spec.order

    def _zero_exps(self) -> Exps:
        return (0,) * self.k

    def _one_poly(self) -> Poly:
        return {self._zero_exps(): LaurentSeries.one(self.field)}

    def const(self, c: int) -> TowerElement:
        """Image of the integer ``c``."""
        return self.const_field(self.field.from_int(c))

    def zero(self) -> TowerElement:
        return TowerElement(self, {})

    def one(self) -> TowerElement:
        return TowerElement(self, self._one_poly())

    def x(self) -> TowerElement:
        return TowerElement(self, {self._zero_exps(): LaurentSeries.monomial(self.field, 1, -1)})

    def gen(self, i: int) -> TowerElement:
        if not 1 <= i <= self.k:
            raise TowerError(f"generator index {i} outside 1..{self.k}")
        exps = tuple(1 if j == i else 0 for j in range(1, self.k + 1))
        return TowerElement(self, {exps: LaurentSeries.one(self.field)})

    def series_element(self, s: LaurentSeries) -> TowerElement:
        return TowerElement(self, {} if s.is_zero() else {self._zero_exps(): s})

    def constant_term(self, i: int) -> TowerElement:
        return TowerElement(self, dict(self._D[i - 1]))

    def element(self, src: ElementSource) -> TowerElement:
        """Build an element from an expression string or a JSON term list."""
        if src is None:
            return self.zero()
        if isinstance(src, TowerElement):
            return src
        if isinstance(src, str):
            from .expr import parse_element
            return parse_element(self, src)
        if isinstance(src, int):
            return self.const(src)
        return TowerElement(self, self.reduce(self._terms_from_json(src)))

    def _terms_from_json(self, terms: Sequence[Mapping]) -> Poly:
        f = self.field
        out: Poly = {}
        for term in terms:
            mono = tuple(term.get("mono", ()))
            if len(mono) > self.k or any(e < 0 for e in mono):
                raise TowerError(f"bad monomial exponents {list(mono)}")
            mono = mono + (0,) * (self.k - len(mono))
            coeff = term.get("coeff", [[0, 1]])
            o = term.get("o")
            # coefficient of x^e is the coefficient of T^-e; O(x^o) means T-precision -o
            s = LaurentSeries.from_dict(f, {-int(e): int(c) for e, c in coeff},
                                        None if o is None else -int(o))
            out[mono] = out[mono] + s if mono in out else s
        return {k: c for k, c in out.items() if not c.is_zero()}

    def poly_to_json(self, poly: Poly) -> list[dict]:
        out = []
        for mono in sorted(poly):
            c = poly[mono]
            term = {"mono": list(mono), "coeff": [[-k, v] for k, v in sorted(c.terms().items(), reverse=True)]}
            if c.prec is not None:
                term["o"] = -c.prec
            out.append(term)
        return out

    # -- reduction and multiplication ----------------------------------------
    def reduce(self, raw: Mapping[Exps, LaurentSeries]) -> Poly:
        """Rewrite ``f_i^(p^n_i) -> D_i - sum_j a_j f_i^(p^j)`` until every exponent is reduced.

        Terms are processed from the largest exponent vector (compared from the
        top generator down); each rewrite only creates smaller vectors, so
        every term is final once popped without overflow.
        """
        acc: dict[Exps, LaurentSeries] = {}
        heap: list = []
        for exps, c in raw.items():
            if len(exps) != self.k:
                raise TowerError(f"exponent vector {exps} has wrong length")
            if exps in acc:
                acc[exps] = acc[exps] + c
            else:
                acc[exps] = c
                heapq.heappush(heap, tuple(-e for e in reversed(exps)))
        out: Poly = {}
        p = self.spec.p
        while heap:
            key = heapq.heappop(heap)
            exps = tuple(-e for e in reversed(key))
            c = acc.pop(exps)
            if c.is_zero():
                continue
            top = next((j for j in range(self.k - 1, -1, -1) if exps[j] >= self.degrees[j]), None)
            if top is None:
                out[exps] = c
                continue
            rest = list(exps)
            rest[top] -= self.degrees[top]
            new_terms = []
            for dexps, dc in self._D[top].items():
                new_terms.append((tuple(a + b for a, b in zip(rest, dexps)), c * dc))
            for j, a in enumerate(self.additive[top].coeffs):
                if a:
                    e = list(rest)
                    e[top] += p ** j
                    new_terms.append((tuple(e), c.scale(self.field.neg(a))))
            for ne, nc in new_terms:
                if ne in acc:
                    acc[ne] = acc[ne] + nc
                else:
                    acc[ne] = nc
                    heapq.heappush(heap, tuple(-v for v in reversed(ne)))
        return {k: v for k, v in out.items() if not v.is_zero()}

    def mul_poly(self, a: Poly, b: Poly) -> Poly:
        raw: dict[Exps, LaurentSeries] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                raw[e] = raw[e] + c if e in raw else c
        return self.reduce(raw)

    # -- valuations -------------------------------------------------------------
    def monomial_pole(self, exps: Exps) -> int:
        return sum(e * m for e, m in zip(exps, self.spec.pole_orders))

    def poly_valuation(self, poly: Poly) -> int:
        """Minimum of the term valuations; raises PrecisionError if that is not decided."""
        G = self.order
        known = []
        unknown = []
        for exps, c in poly.items():
            base = -self.monomial_pole(exps)
            if c.vanishes():
                unknown.append(G * c.prec + base)
            else:
                known.append(G * c.valuation() + base)
        if not known:
            if unknown:
                raise PrecisionError("element is zero to the working precision")
            raise ValueError("valuation of zero")
        v = min(known)
        if unknown and min(unknown) <= v:
            raise PrecisionError("precision too low to decide the valuation")
        return v

    def valuation(self, e: TowerElement) -> int:
        return self.poly_valuation(e.num) - self.poly_valuation(e.den)

    def min_term(self, poly: Poly) -> tuple[Exps, int, int]:
        """``(exponents, x-degree, leading coefficient)`` of the deepest-pole term."""
        v = self.poly_valuation(poly)
        for exps, c in poly.items():
            if not c.vanishes() and self.order * c.valuation() - self.monomial_pole(exps) == v:
                k, lead = c.leading()
                return exps, -k, lead
        raise AssertionError("minimum term not found")

    # -- Galois action ------------------------------------------------------------
    def _image_power(self, label: str, j: int, e: int) -> Poly:
        key = (label, j, e)
        if key not in self._power_cache:
            if e == 0:
                self._power_cache[key] = self._one_poly()
            else:
                base = _poly_add(self.gen(j + 1).num, self.automorphisms[label][j])
                self._power_cache[key] = self.mul_poly(self._image_power(label, j, e - 1), base)
        return self._power_cache[key]

    def apply_poly(self, label: str, poly: Poly) -> Poly:
        if label not in self.automorphisms:
            if label in ("id", "identity"):
                return dict(poly)
            raise TowerError(f"unknown automorphism {label!r}; known: {sorted(self.automorphisms)}")
        out: Poly = {}
        for exps, c in poly.items():
            term = {self._zero_exps(): c}
            for j, e in enumerate(exps):
                if e:
                    term = self.mul_poly(term, self._image_power(label, j, e))
            out = _poly_add(out, term)
        return out

    def galois_apply(self, label: str, e: TowerElement) -> TowerElement:
        return TowerElement(self, self.apply_poly(label, e.num), self.apply_poly(label, e.den))

    # -- ramification jumps ---------------------------------------------------------
    def uniformizer_exponents(self, max_norm: int = 64) -> tuple[int, ...]:
        """``(a, c_1, ..., c_k)`` with ``v(x^a f_1^c_1 ... f_k^c_k) = 1``.

        Smallest total absolute exponent wins, ties broken by the tuple order.
        """
        G, m = self.order, self.spec.pole_orders
        for norm in range(1, max_norm + 1):
            hits = []
            for cs in itertools.product(range(-norm, norm + 1), repeat=self.k):
                rest = norm - sum(abs(c) for c in cs)
                if rest < 0:
                    continue
                pole = -1 - sum(c * mj for c, mj in zip(cs, m))
                for a in {rest, -rest}:
                    if a * G == pole:
                        hits.append((a,) + cs)
            if hits:
                return min(hits)
        raise TowerError("no uniformizer found within the search bound")

    def monomial_element(self, exps: Sequence[int]) -> TowerElement:
        """``x^a f_1^c_1 ... f_k^c_k`` for integer (possibly negative) exponents."""
        out = self.one()
        for base, e in zip([self.x()] + [self.gen(j) for j in range(1, self.k + 1)], exps):
            if e:
                out = out * base ** e
        return out

    def uniformizer(self) -> TowerElement:
        return self.monomial_element(self.uniformizer_exponents())

    def jump_of(self, label: str, uniformizer: Optional[TowerElement] = None) -> JumpMeasurement:
        """Locate ``label`` in the lower filtration through ``v(sigma t - t) - 1``."""
        t = uniformizer if uniformizer is not None else self.uniformizer()
        if self.valuation(t) != 1:
            raise TowerError(f"{self.format(t)} is not a uniformizer (valuation {self.valuation(t)})")
        s_num = self.apply_poly(label, t.num)
        s_den = self.apply_poly(label, t.den)
        diff = _poly_add(self.mul_poly(s_num, t.den), _poly_neg(self.mul_poly(t.num, s_den)))
        if not diff:
            raise TowerError(f"{label!r} fixes the uniformizer; it acts as the identity")
        v = self.poly_valuation(diff) - self.poly_valuation(s_den) - self.poly_valuation(t.den)
        return JumpMeasurement(label, self.format(t), v)

    # -- validation -------------------------------------------------------------------
    def additive_apply(self, i: int, e: TowerElement) -> TowerElement:
        """``P_i(e)``."""
        p = self.spec.p
        ap = self.additive[i - 1]
        out = e ** (p ** ap.n)
        for j, a in enumerate(ap.coeffs):
            if a:
                out = out + self.const_field(a) * e ** (p ** j)
        return out

    def const_field(self, a: int) -> TowerElement:
        if a == 0:
            return self.zero()
        return TowerElement(self, {self._zero_exps(): LaurentSeries.monomial(self.field, a, 0)})

    def measured_shape(self) -> TowerShape:
        """Exponents of ``min D_i`` for ``i = 2..h-1`` read off the constants."""
        exps = []
        for i in range(2, self.k + 1):
            mono, deg, _ = self.min_term(self._D[i - 1])
            exps.append(ExponentVector(i, deg, mono[: i - 1]))
        return TowerShape(self.spec, tuple(exps))

    def verify(self) -> ValidationReport:
        bad: list[str] = []
        warn: list[str] = []
        notes: list[str] = []
        spec = self.spec
        for i in range(1, self.k + 1):
            target = -spec.p ** spec.n[i - 1] * spec.m_bar(i)
            try:
                v = self.poly_valuation(self._D[i - 1])
            except (PrecisionError, ValueError) as exc:
                bad.append(f"v(D_{i}) undetermined: {exc}")
                continue
            if v != target:
                bad.append(f"v(D_{i})={v} but -p^n_{i}*m_{i}={target}")
                continue
            notes.append(f"v(D_{i})={v}=-p^n_{i}*m_{i}")
            if i >= 2:
                mono, deg, _ = self.min_term(self._D[i - 1])
                measured = ExponentVector(i, deg, mono[: i - 1])
                if deg < 0:
                    bad.append(f"min D_{i} has a negative power of x")
                if self.exps:
                    declared = next((ev for ev in self.exps if ev.i == i), None)
                    if declared is not None and declared != measured:
                        bad.append(f"min D_{i} has exponents {measured.encode()}, "
                                   f"declared {declared.encode()}")
        if bad:
            return ValidationReport(False, tuple(bad), notes=tuple(notes))
        for label, shifts in sorted(self.automorphisms.items()):
            for j, c in enumerate(shifts, 1):
                if not c:
                    continue
                ce = TowerElement(self, c)
                if ce.level > j:
                    bad.append(f"{label}: C_{j} involves generators of level >= {j}")
                    continue
                if self.valuation(ce) <= -spec.m_bar(j):
                    bad.append(f"{label}: v(C_{j})={self.valuation(ce)} not above -m_{j}={-spec.m_bar(j)}")
                    continue
            for j in range(1, self.k + 1):
                image = self.gen(j) + TowerElement(self, shifts[j - 1])
                lhs = self.additive_apply(j, image)
                rhs = TowerElement(self, self.apply_poly(label, self._D[j - 1]))
                if not (lhs - rhs).vanishes():
                    bad.append(f"{label}: P_{j}(sigma f_{j}) != sigma(D_{j})")
        for j in range(1, self.k + 1):
            first = [label for label, shifts in self.automorphisms.items()
                     if not any(shifts[:j - 1]) and shifts[j - 1]]
            if not first:
                warn.append(f"no automorphism declared that first moves level {j}")
        return ValidationReport(not bad, tuple(bad), tuple(warn), tuple(notes))

    # -- formatting and serialization --------------------------------------------------
    def format_poly(self, poly: Poly) -> str:
        if not poly:
            return "0"
        f = self.field
        parts = []
        for exps in sorted(poly, key=lambda e: (-self.monomial_pole(e), e), reverse=False):
            c = poly[exps]
            gens = "*".join(name if e == 1 else f"{name}^{e}"
                            for name, e in zip(self.names, exps) if e)
            cterms = sorted(c.terms().items())
            cparts = []
            for k, a in cterms:
                xs = "" if k == 0 else ("x" if k == -1 else f"x^{-k}")
                cs = f.format(a)
                cparts.append(xs if cs == "1" and xs else (f"{cs}*{xs}" if xs else cs))
            if c.prec is not None:
                cparts.append(f"O(x^{-c.prec})")
            coeff = " + ".join(cparts) if cparts else "0"
            if len(cparts) > 1 and gens:
                coeff = f"({coeff})"
            if gens:
                parts.append(gens if coeff == "1" else f"{coeff}*{gens}")
            else:
                parts.append(coeff)
        return " + ".join(parts)

    def format(self, e: TowerElement) -> str:
        num = self.format_poly(e.num)
        if e.is_polynomial:
            return num
        den = self.format_poly(e.den)
        return f"({num})/({den})"

    def to_json(self) -> dict:
        out = dict(self.spec.to_json())
        out["name"] = self.name
        out["field"] = self.field.to_json()
        out["names"] = list(self.names)
        out["levels"] = [{"additive": list(ap.coeffs), "D": self.poly_to_json(d)}
                         for ap, d in zip(self.additive, self._D)]
        if self.exps:
            out["exps"] = [ev.to_json() for ev in self.exps]
        out["automorphisms"] = {label: [self.poly_to_json(c) for c in shifts]
                                for label, shifts in self.automorphisms.items()}
        return out

    @classmethod
    def from_json(cls, data: Mapping, strict: bool = True) -> "TowerInstance":
        try:
            spec = FiltrationSpec.from_json(data, strict=strict)
            field = GF.from_json(data.get("field", {"p": spec.p}))
            levels = data["levels"]
            additive = [AdditivePolynomial(len(lv["additive"]),
                                           tuple(field.norm(int(a)) for a in lv["additive"]))
                        for lv in levels]
            constants = [lv["D"] for lv in levels]
            exps = [ExponentVector.from_json(e) for e in data.get("exps", ())]
        except (KeyError, TypeError) as exc:
            raise TowerError(f"malformed tower instance: {exc}") from None
        return cls(spec, field, additive, constants, data.get("automorphisms", {}),
                   names=data.get("names"), exps=exps, name=data.get("name", ""))

    @classmethod
    def load(cls, path: Union[str, Path], strict: bool = True) -> "TowerInstance":
        with open(path) as fh:
            return cls.from_json(json.load(fh), strict=strict)


def element_valuation(inst: TowerInstance, e: TowerElement) -> int:
    return inst.valuation(e)


def galois_apply(inst: TowerInstance, sigma: str, e: TowerElement) -> TowerElement:
    return inst.galois_apply(sigma, e)


def jump_of(inst: TowerInstance, sigma: str, uniformizer: Optional[TowerElement] = None) -> int:
    return inst.jump_of(sigma, uniformizer).jump


def verify_instance(inst: TowerInstance) -> ValidationReport:
    return inst.verify()
