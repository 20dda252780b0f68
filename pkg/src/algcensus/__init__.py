"""Exact census and density laws of real algebraic integers of bounded height."""

from .census import CensusReport, GapReport, census, perron_tally, plateau_report, verify_gap
from .density import DensityParams, DensityValue, delta_tilde, integral_delta_tilde, omega, omega2_closed, phi, predicted_count
from .irreducible import BudgetExceeded, count_reducible, find_factor, is_irreducible
from .poly import MonicIntPoly, RatInterval, eval_scaled
from .roots import PerronVerdict, RootBox, classify_perron, count_roots_in, isolate_roots, squarefree_part

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CensusReport",
    "DensityParams",
    "DensityValue",
    "GapReport",
    "MonicIntPoly",
    "PerronVerdict",
    "RatInterval",
    "RootBox",
    "census",
    "classify_perron",
    "count_reducible",
    "count_roots_in",
    "delta_tilde",
    "eval_scaled",
    "find_factor",
    "integral_delta_tilde",
    "is_irreducible",
    "isolate_roots",
    "omega",
    "omega2_closed",
    "perron_tally",
    "phi",
    "plateau_report",
    "predicted_count",
    "squarefree_part",
    "verify_gap",
]
