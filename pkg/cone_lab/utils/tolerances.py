"""
Centralized numerical tolerances.

All thresholds used by the library live in one table so that a run can
override them from a config file or the command line. Modules read them
through get_tolerance() at call time, never at import time.
"""

import logging
from contextlib import contextmanager

from ..errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    # sphere geometry
    "TOL_UNIT": 1e-12,          # |u| = 1 check
    "TOL_TRIG": 1e-9,           # triangle consistency
    "TOL_DEGENERATE": 1e-12,    # distance from 0 or pi that counts as degenerate
    "SIN_PRODUCT_MIN": 1e-12,   # sin l2 sin l3 floor in the law of cosines
    "ORTHO_TOL": 1e-10,         # orthonormal frames and orthogonal subspaces
    # cone nets
    "ANGLE_TOL": 1e-9,
    "LENGTH_TOL": 1e-12,
    "HAUSDORFF_STEP": 1e-3,     # sampling step, relative to r
    "SEPARATION_STEP": 1e-3,    # arc sampling step for the separation check
    # perturbations
    "ALPHA_DISCARD": 1e-6,
    "ZERO_DEVIATION": 1e-12,
    "CRITICAL_GRADIENT": 1e-8,
    "CERTIFICATE_STABILITY": 0.25,
    # harmonic replacement
    "SEAM_TOL": 1e-9,
    "PARSEVAL_TARGET": 1e-6,
    "MODE_TRIM": 1e-13,
    # curve straightening
    "STRAIGHTEN_STEP": 1e-4,
    "WINDING_TOL": 1e-6,
    "ENDPOINT_PLANE_TOL": 1e-9,
    "ARCLENGTH_TOL": 1e-6,
    # decay calculus
    "MONOTONE_TOL": 1e-10,
    "ODE_RTOL": 1e-9,
    "ODE_ATOL": 1e-12,
    "LOG_QUAD_TOL": 1e-10,
}

_active = dict(DEFAULT_TOLERANCES)


def get_tolerance(name):
    """
    Look up the active value of a tolerance.

    Args:
        name (str): Tolerance name, e.g. "TOL_UNIT"

    Returns:
        float: Active value
    """
    try:
        return _active[name]
    except KeyError:
        raise ConfigError(f"unknown tolerance {name!r}") from None


def set_tolerances(overrides):
    """
    Override tolerances for the rest of the process.

    Args:
        overrides (dict): Mapping of tolerance name to positive value

    Raises:
        ConfigError: Unknown name or non-positive value
    """
    checked = {}
    for name, value in overrides.items():
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}")
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"tolerance {name} must be a number, got {value!r}") from None
        if not value > 0:
            raise ConfigError(f"tolerance {name} must be positive, got {value!r}")
        checked[name] = value
    for name, value in checked.items():
        logger.debug("tolerance %s: %g -> %g", name, _active[name], value)
    _active.update(checked)


def reset_tolerances():
    """Restore every tolerance to its default."""
    _active.clear()
    _active.update(DEFAULT_TOLERANCES)


def active_tolerances():
    """Return a copy of the active tolerance table."""
    return dict(_active)


@contextmanager
def tolerance_overrides(**overrides):
    """Temporarily override tolerances inside a with-block."""
    saved = dict(_active)
    set_tolerances(overrides)
    try:
        yield
    finally:
        _active.clear()
        _active.update(saved)
