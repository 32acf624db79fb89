"""Exact integer polynomial arithmetic, Sturm root isolation and small-degree factoring."""

from .factor import IrreducibilityError, factor_small, is_irreducible, is_totally_real
from .poly import IntPoly, discriminant, resultant
from .sturm import (
    SEVEN_PLUS_SQRT6,
    TWO_PLUS_SQRT6,
    DyadicInterval,
    NotSquarefreeError,
    QuadSurd,
    isolate_real_roots,
    refine_root,
    sturm_count,
    sturm_sequence,
)
