"""
Profile, curve and density files.

Sector profiles as CSV (t, v1, ..., vm) or JSON, spherical curves as CSV of
points or JSON with their plane, and density profiles as CSV (r, theta).
"""

import logging

import numpy as np

from ..core.decay import DensityProfile
from ..core.harmonic import SectorProfile
from ..errors import CurveHypothesisError, ProfileError
from .formats import detect_format, read_csv, read_json, write_csv, write_json

logger = logging.getLogger(__name__)


def load_profile(path, eta, eta0=0.01, fmt=None):
    """
    Read a sector profile.

    CSV rows are (t, v1, ..., vm) on a uniform grid starting at 0; JSON is
    {"T": ..., "v": [[...], ...]} with optional "eta" and "eta0" keys, which
    take precedence over the arguments.

    Returns:
        SectorProfile
    """
    if detect_format(path, fmt) == "json":
        data = read_json(path)
        try:
            return SectorProfile(float(data["T"]), np.array(data["v"], dtype=float),
                                 float(data.get("eta", eta)), float(data.get("eta0", eta0)))
        except KeyError as exc:
            raise ProfileError(f"{path}: missing key {exc}") from None
    _, table = read_csv(path)
    if table.shape[0] < 3 or table.shape[1] < 2:
        raise ProfileError(f"{path}: need a t column, at least one v column and three rows")
    t = table[:, 0]
    T = float(t[-1])
    expected = np.linspace(0.0, T, t.size)
    if abs(t[0]) > 0 or np.max(np.abs(t - expected)) > 1e-9 * max(T, 1.0):
        raise ProfileError(f"{path}: t column is not a uniform grid from 0")
    return SectorProfile(T, table[:, 1:], eta, eta0)


def save_profile(profile, path, fmt=None):
    """Write a sector profile as CSV or JSON."""
    if detect_format(path, fmt) == "json":
        write_json({"T": profile.T, "eta": profile.eta, "eta0": profile.eta0, "v": profile.v}, path)
        return
    header = ["t"] + [f"v{k + 1}" for k in range(profile.codim)]
    write_csv(path, header, np.column_stack([profile.grid, profile.v]))


def load_curve(path, fmt=None):
    """
    Read a polyline on the sphere and the plane it is compared with.

    CSV rows are points; the plane is then span(e1, e2). JSON is
    {"points": [[...], ...], "plane": [[...], [...]]}, plane optional.

    Returns:
        tuple: (points array (N, n), plane array (2, n))
    """
    if detect_format(path, fmt) == "json":
        data = read_json(path)
        if "points" not in data:
            raise CurveHypothesisError(f"{path}: missing key 'points'")
        points = np.array(data["points"], dtype=float)
        plane = data.get("plane")
    else:
        _, points = read_csv(path)
        plane = None
    if points.ndim != 2 or points.shape[1] < 3:
        raise CurveHypothesisError(f"{path}: points must have at least three coordinates")
    plane = np.eye(points.shape[1])[:2] if plane is None else np.array(plane, dtype=float)
    return points, plane


def save_curve(points, path, plane=None, fmt=None):
    """Write a polyline as CSV (x1, ..., xn) or JSON with its plane."""
    points = np.asarray(points, dtype=float)
    if detect_format(path, fmt) == "json":
        data = {"points": points}
        if plane is not None:
            data["plane"] = np.asarray(plane, dtype=float)
        write_json(data, path)
        return
    write_csv(path, [f"x{k + 1}" for k in range(points.shape[1])], points)


def load_density(path, d0=None):
    """
    Read a density profile from CSV (r, theta).

    Args:
        path (str): CSV file
        d0 (float): Limit density, default theta at the smallest radius

    Returns:
        DensityProfile
    """
    _, table = read_csv(path)
    if table.shape[1] != 2:
        raise ProfileError(f"{path}: density profile needs exactly two columns (r, theta)")
    d0 = float(table[0, 1]) if d0 is None else d0
    return DensityProfile(table[:, 0], table[:, 1], d0)


def save_density(profile, path):
    """Write a density profile as CSV (r, theta)."""
    write_csv(path, ["r", "theta"], np.column_stack([profile.r, profile.theta]))
