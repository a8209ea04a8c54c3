"""Waring decompositions of ternary sextics and the secant stratification of the 6-Veronese surface."""

from .polycore import TernaryForm, apply_operator, evaluate, power_of_linear
from .pointsets import HVector, PointSet, ProjectivePoint, WaringExpression, h_vector, span_membership

__all__ = [
    "TernaryForm",
    "apply_operator",
    "evaluate",
    "power_of_linear",
    "HVector",
    "PointSet",
    "ProjectivePoint",
    "WaringExpression",
    "h_vector",
    "span_membership",
]

__version__ = "0.1.0"
