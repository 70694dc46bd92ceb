"""Exact Pfaffian and Steiner-Pfaffian hypersurfaces, and the numerics of
instanton and Ulrich bundles on cubic fourfolds."""

__version__ = "0.1.0"

from .fields import QQ, PrimeField, QuadraticExtension, Rationals, finite_field
from .pfaffian import PolyRing, ScalarRing, SkewMatrix, kernel_vector, pfaffian, sub_pfaffian
from .poly import Polynomial, exact_divide
from .steiner import (
    AlternatingThreeForm,
    CubicInstance,
    Kind,
    SkewPresentation,
    assemble,
    contraction_matrix,
    extract_cubic,
    lift_to_coble,
    linear_section,
)

__all__ = [
    "QQ",
    "AlternatingThreeForm",
    "CubicInstance",
    "Kind",
    "PolyRing",
    "Polynomial",
    "PrimeField",
    "QuadraticExtension",
    "Rationals",
    "ScalarRing",
    "SkewMatrix",
    "SkewPresentation",
    "assemble",
    "contraction_matrix",
    "exact_divide",
    "extract_cubic",
    "finite_field",
    "kernel_vector",
    "lift_to_coble",
    "linear_section",
    "pfaffian",
    "sub_pfaffian",
]
