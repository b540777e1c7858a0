"""Utility functions and helpers."""

from .formats import detect_format, dumps_json, format_float, read_csv, read_json, write_csv, write_json
from .maximal import noncentered_maximal, runs, threshold_set
from .quadrature import composite_rule, gauss_legendre, geometric_breaks, integrate_2d, integrate_2d_with_error
from .tolerances import (
    DEFAULT_TOLERANCES,
    active_tolerances,
    get_tolerance,
    reset_tolerances,
    set_tolerances,
    tolerance_overrides,
)

__all__ = [
    'detect_format', 'dumps_json', 'format_float', 'read_csv', 'read_json', 'write_csv', 'write_json',
    'noncentered_maximal', 'runs', 'threshold_set',
    'composite_rule', 'gauss_legendre', 'geometric_breaks', 'integrate_2d', 'integrate_2d_with_error',
    'DEFAULT_TOLERANCES', 'active_tolerances', 'get_tolerance', 'reset_tolerances', 'set_tolerances',
    'tolerance_overrides',
]
