"""Ramification filtrations of wild towers over k((x)) and the integrality of their upper jumps."""

from .filtration import (
    DomainError,
    FiltrationSpec,
    SpecError,
    ValidationReport,
    herbrand_phi,
    herbrand_psi,
    integrality_and_chain,
    quotient_upper_jumps,
    upper_jumps,
    validate_spec,
)
from .semigroup import NumericalSemigroup, weierstrass_semigroup
from .monomial_basis import Monomial, RRBasis, monomial_valuation, rr_basis
from .hasse_arf import (
    ExponentVector,
    GridBounds,
    TowerShape,
    enumerate_and_verify,
    theorem_check,
)

__version__ = "0.1.0"
