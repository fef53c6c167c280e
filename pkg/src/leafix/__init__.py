"""Exact characteristic classes, genera and fixed-point formulas for foliations."""

from .arith import Cyclotomic, bernoulli, is_cyclotomic_integer, root_of_unity
from .gring import Current, GradedRing, GradedVariable, RingElement, apply_series, integrate
from .series import TruncatedSeries, named_series

__version__ = "0.1.0"

__all__ = [
    "Current",
    "Cyclotomic",
    "GradedRing",
    "GradedVariable",
    "RingElement",
    "TruncatedSeries",
    "apply_series",
    "bernoulli",
    "integrate",
    "is_cyclotomic_integer",
    "named_series",
    "root_of_unity",
]
