"""Exact lcm-lattice toolkit for Taylor and minimal free resolutions of factored ideals."""

__version__ = "0.1.0"

from .core import FactorAlphabet, GeneratorSet, LinearRealization, MonomialCombo, validate  # noqa: E402
from .fields import QQ, PrimeField, parse_field  # noqa: E402
from .lattice import LcmLattice, build_lattice, saturated_sets  # noqa: E402
from .taylor import betti_numbers, evaluation_complex, fiber_complex, taylor_complex  # noqa: E402
from .acyclicity import DepthOracle, check  # noqa: E402
from .minres import minimal_resolution, verify_resolution  # noqa: E402
from .scarf import scarf_report  # noqa: E402
from .tor import GradedLattice, atomic_dga, tor_algebra  # noqa: E402

__all__ = [
    "FactorAlphabet",
    "GeneratorSet",
    "LinearRealization",
    "MonomialCombo",
    "validate",
    "QQ",
    "PrimeField",
    "parse_field",
    "LcmLattice",
    "build_lattice",
    "saturated_sets",
    "betti_numbers",
    "evaluation_complex",
    "fiber_complex",
    "taylor_complex",
    "DepthOracle",
    "check",
    "minimal_resolution",
    "verify_resolution",
    "scarf_report",
    "GradedLattice",
    "atomic_dga",
    "tor_algebra",
]
