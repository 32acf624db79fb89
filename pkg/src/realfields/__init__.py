"""realfields: totally real number fields, indecomposables and sums of squares."""

from .exact import DyadicInterval, IntPoly, QuadSurd
from .indecomp import (
    ClassReps,
    UnitSystem,
    class_reps_norm_le,
    decompose_full,
    default_unit_system,
    fundamental_unit_quadratic,
    is_indecomposable,
    quadratic_indecomposables,
)
from .latenum import (
    BoxBounds,
    EnumerationLimitError,
    GramEmbeddings,
    enumerate_box,
    minkowski_reduced_basis,
    rayleigh_constant,
    smallest_eigenvalue,
    square_below,
)
from .numfield import (
    FieldElement,
    NumberField,
    biquadratic_compositum,
    element_min_poly,
    fields_isomorphic,
    house,
    is_totally_positive,
    maximal_order,
    norm,
    quadratic_field,
    rational_field,
    trace,
)
from .sosrep import DiagonalForm, PythagorasTable, represent_diagonal, sum_of_squares, universal_form, universality_spot_check

__version__ = "0.1.0"
