"""Exact symbolic engine for the family switching calculus of -n rational curves."""

from .exactring import GradedClass, RingPresentation, grade, invert_unit
from .kcalc import BundleSymbol, KClass, LineTag, k_equal, rank, sym_power, total_chern, total_segre

__version__ = "0.1.0"
