"""Comparison baselines: best constant rate and the clairvoyant cyclic optimum."""

from .constant import UnsustainableTrace, optimize_constant_rate
from .fhc import FhcSolution, fhc_total_localizations, solve_fhc

__all__ = ["FhcSolution", "UnsustainableTrace", "fhc_total_localizations",
           "optimize_constant_rate", "solve_fhc"]
