"""Explicit Artin-Schreier towers over finite fields."""

from pathlib import Path

from .field import GF, FFElement
from .series import LaurentSeries, PrecisionError, default_precision
from .tower import (
    AdditivePolynomial,
    JumpMeasurement,
    TowerElement,
    TowerError,
    TowerInstance,
    element_valuation,
    galois_apply,
    jump_of,
    verify_instance,
)
from .expr import ExpressionError, parse_element

FIXTURES = Path(__file__).with_name("fixtures")


def load_fixture(name: str) -> TowerInstance:
    """One of the bundled instances: A, B, B_corrupt, C, D, E."""
    return TowerInstance.load(FIXTURES / f"{name}.json")
