"""Totally real number fields with their rings of integers."""

from .field import (
    FieldElement,
    FieldMismatchError,
    NumberField,
    biquadratic_compositum,
    element_min_poly,
    fields_isomorphic,
    find_root_in,
    house,
    house_le,
    house_lt,
    is_totally_positive,
    maximal_order,
    norm,
    quadratic_field,
    rational_field,
    trace,
)
