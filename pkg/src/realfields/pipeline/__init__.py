"""The classification run and its supporting experiments."""

from .classify import (
    ClassificationError,
    ClassificationReport,
    FieldRecord,
    biquadratic_candidates,
    classify,
    classify_field,
    quadratic_generators_with_small_house,
    verify_counterexample,
)
from .dedup import dedup_fields
from .report import emit_jsonl, emit_report, parse_report
from .robinson import RobinsonConfig, poly_sort_key, robinson_enumerate
from .trends import InsufficientSampleError, biquadratic_family, quartic_trend, universal_rank_trend
