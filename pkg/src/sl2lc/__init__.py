"""
sl2lc - Exact local coefficients for SL(2) over Q_p.

Computes local coefficients, Plancherel measures, Gauss sums and Hecke
algebra actions for principal series of SL(2, Q_p) induced from ramified
quadratic characters, by finite summation over p-adic shells with exact
cyclotomic arithmetic.
"""

from .cyclo import CyclotomicField, CycNum, cyc_embed
from .localfield import (
    AddChar,
    ExtChar,
    FieldContext,
    MultCharacter,
    PadicNum,
    ramified_quadratic_chars,
)
from .sl2 import Cell, DoubleCoset, GroupElem, cell_decompose, classify_in_k
from .laurent import LaurentPoly
from .integrate import InducedVec, Weyl, gauss_sum, intertwine, local_coefficient, whittaker_omega
from .hecke import HeckeOp, WhittakerVec, act, convolve, s_delta_project
from .config import RunConfig
from .report import Report
from .runner import run_suite

__version__ = "0.1.0"
__all__ = [
    "CyclotomicField",
    "CycNum",
    "cyc_embed",
    "FieldContext",
    "PadicNum",
    "MultCharacter",
    "ExtChar",
    "AddChar",
    "ramified_quadratic_chars",
    "GroupElem",
    "Cell",
    "DoubleCoset",
    "cell_decompose",
    "classify_in_k",
    "LaurentPoly",
    "InducedVec",
    "Weyl",
    "gauss_sum",
    "whittaker_omega",
    "intertwine",
    "local_coefficient",
    "HeckeOp",
    "WhittakerVec",
    "convolve",
    "act",
    "s_delta_project",
    "RunConfig",
    "Report",
    "run_suite",
]
