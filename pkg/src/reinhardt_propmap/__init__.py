"""Decide and enumerate proper holomorphic maps between two-dimensional
Reinhardt domains whose logarithmic image is a strip or a half-plane."""

__version__ = "0.1.0"

from .field import QuadExt, parse, format_element
from .domains import CanonicalDomain, DomainSpec, Lower, MonomialMap, Tag, classify
from .solver import Verdict, decide
from .verify import SamplePlan

__all__ = [
    "QuadExt",
    "parse",
    "format_element",
    "CanonicalDomain",
    "DomainSpec",
    "Lower",
    "MonomialMap",
    "Tag",
    "classify",
    "Verdict",
    "decide",
    "SamplePlan",
    "__version__",
]
