"""Bad semistable reduction in families of curves, and the Erdos-Kac law for its prime counts."""

from .arith import Factorization, factorize, is_prime, valuation
from .families import ConfigError, CurveFamily, Mode, codisc_at, disc_at, fixture, load_family, specialize
from .macaulay import TernaryForm, macaulay_resultant, plane_disc_proxy, transversality_resultant
from .poly import BinaryForm, IntPoly, binary_discriminant, discriminant, parse_poly
from .reduction import PrimeVerdict, VerdictClass, classify_hyperelliptic_prime, classify_plane_prime
from .stats import DistributionReport, OmegaRecord, omega_of, residue_density, run_experiment

__version__ = "0.1.0"

__all__ = [
    "BinaryForm", "ConfigError", "CurveFamily", "DistributionReport", "Factorization", "IntPoly", "Mode",
    "OmegaRecord", "PrimeVerdict", "TernaryForm", "VerdictClass", "binary_discriminant",
    "classify_hyperelliptic_prime", "classify_plane_prime", "codisc_at", "disc_at", "discriminant", "factorize", "fixture", "is_prime",
    "load_family", "macaulay_resultant", "omega_of", "parse_poly", "plane_disc_proxy", "residue_density",
    "run_experiment", "specialize", "transversality_resultant", "valuation",
]
