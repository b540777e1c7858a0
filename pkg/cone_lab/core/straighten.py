"""
Straightening of near-geodesic curves on the sphere.

A simple curve gamma close to a geodesic of a 2-plane P is written as
z(t) = (cos theta(t) w(t), sin theta(t) w(t), v(t)) in a frame of P and its
orthogonal complement. Where the maximal function of |v'| exceeds eta/4 or
the maximal function of f = 1 + 2|v|^2 - theta' exceeds 1/2, the curve is
replaced by geodesic arcs; the result is a graph over P whose height is an
eta-Lipschitz function of the angle.

All curves are resampled at uniform arc length; cells are the intervals
between consecutive samples.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import CurveHypothesisError, PreconditionError
from ..utils.maximal import runs, threshold_set
from ..utils.tolerances import get_tolerance
from .harmonic import SectorProfile
from .sphere import _angle_between, normalize

logger = logging.getLogger(__name__)

TAU1_FACTOR = 1e-4


def default_tau1(eta):
    """Closeness parameter used when none is given: 1e-4 eta^2."""
    return TAU1_FACTOR * eta ** 2


@dataclass(frozen=True)
class SphericalCurve:
    """
    Arc-length sampled curve with its decomposition relative to a plane P.

    Attributes:
        points (numpy.ndarray): z(t_j), shape (M + 1, n)
        length (float): l, length of the curve
        distance (float): d, geodesic distance between the endpoints
        frame (numpy.ndarray): (e1, e2) spanning P, e1 the direction of z(0)
        normals (numpy.ndarray): Orthonormal basis of P-perp, shape (n - 2, n)
        theta, w (numpy.ndarray): Angle and planar radius per sample
        v (numpy.ndarray): Height in P-perp per sample, shape (M + 1, n - 2)
        tau1 (float): Closeness parameter the hypotheses were checked with
        speed_error (float): max | chord length / step - 1 | over cells
        reversed (bool): The input was traversed backwards
    """

    points: np.ndarray
    length: float
    distance: float
    frame: np.ndarray
    normals: np.ndarray
    theta: np.ndarray
    w: np.ndarray
    v: np.ndarray
    tau1: float
    eta0: float
    speed_error: float
    reversed: bool = False

    @property
    def samples(self):
        return self.points.shape[0] - 1

    @property
    def step(self):
        return self.length / self.samples

    @property
    def grid(self):
        return np.linspace(0.0, self.length, self.samples + 1)

    @property
    def delta_length(self):
        """Delta L = l - d."""
        return self.length - self.distance


def _plane_frame(plane, start, n):
    u = np.array(plane, dtype=float).reshape(2, n)
    if np.max(np.abs(u @ u.T - np.eye(2))) > get_tolerance("ORTHO_TOL"):
        raise PreconditionError("plane frame is not orthonormal")
    e1 = normalize(u.T @ (u @ start))
    coords = u @ e1
    e2 = -coords[1] * u[0] + coords[0] * u[1]
    q, _ = np.linalg.qr(np.column_stack([e1, e2, np.eye(n)]))
    return np.vstack([e1, e2]), q[:, 2:].T


def _resample(points, count):
    seg = _angle_between(points[:-1], points[1:])
    keep = np.concatenate([[True], seg > 0.0])
    points = points[keep]
    seg = seg[seg > 0.0]
    cumulative = np.concatenate([[0.0], np.cumsum(seg)])
    length = float(cumulative[-1])
    s = np.linspace(0.0, length, count + 1)
    idx = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, seg.size - 1)
    delta = seg[idx]
    frac = np.clip((s - cumulative[idx]) / delta, 0.0, 1.0)
    p, q = points[idx], points[idx + 1]
    out = (np.sin((1.0 - frac) * delta)[:, None] * p + np.sin(frac * delta)[:, None] * q) / np.sin(delta)[:, None]
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    out[0], out[-1] = points[0], points[-1]
    return out, length


def _decompose(points, frame, normals):
    x = points @ frame[0]
    y = points @ frame[1]
    theta = np.unwrap(np.arctan2(y, x))
    theta -= theta[0]
    return theta, np.hypot(x, y), points @ normals.T


def parameterize(polyline, plane, tau1, eta0=0.01, step=None):
    """
    Resample a curve at uniform arc length and decompose it against a plane.

    Hypotheses checked, each failure naming the inequality in words:
    9 eta0 <= length <= 10 pi / 11; length <= distance of the endpoints + tau1;
    every sample within tau1 of P; both endpoints in P. A curve running
    clockwise in the frame of P is traversed backwards.

    Args:
        polyline (array-like): Unit vectors along the curve, shape (N, n)
        plane (array-like): Two orthonormal vectors spanning P
        tau1 (float): Closeness parameter
        eta0 (float): Structural constant
        step (float): Resampling step, default STRAIGHTEN_STEP

    Returns:
        SphericalCurve

    Raises:
        CurveHypothesisError: A hypothesis fails
    """
    points = np.array(polyline, dtype=float)
    if points.ndim != 2 or points.shape[0] < 2 or points.shape[1] < 3:
        raise CurveHypothesisError(f"polyline must have shape (N >= 2, n >= 3), got {points.shape}")
    norms = np.linalg.norm(points, axis=1)
    if np.max(np.abs(norms - 1.0)) > get_tolerance("TOL_UNIT"):
        raise CurveHypothesisError("polyline points are not on the unit sphere")
    points /= norms[:, None]
    n = points.shape[1]
    plane = np.array(plane, dtype=float).reshape(2, n)

    plane_tol = get_tolerance("ENDPOINT_PLANE_TOL")
    for label, end in (("start", points[0]), ("end", points[-1])):
        off = float(np.linalg.norm(end - plane.T @ (plane @ end)))
        if off > plane_tol:
            raise CurveHypothesisError(f"{label} point is {off:.3g} away from the plane P")

    frame, normals = _plane_frame(plane, points[0], n)
    end = points[-1]
    was_reversed = False
    if np.arctan2(end @ frame[1], end @ frame[0]) < 0.0:
        points = points[::-1].copy()
        frame, normals = _plane_frame(plane, points[0], n)
        was_reversed = True
        logger.debug("curve runs clockwise in P; traversing it backwards")

    step = get_tolerance("STRAIGHTEN_STEP") if step is None else step
    rough = float(np.sum(_angle_between(points[:-1], points[1:])))
    count = max(2, math.ceil(rough / step))
    samples, length = _resample(points, count)
    distance = float(_angle_between(samples[0], samples[-1]))

    if length < 9.0 * eta0:
        raise CurveHypothesisError(f"curve length {length:.6g} is below 9 eta0 = {9 * eta0:.6g}")
    if length > 10.0 * math.pi / 11.0:
        raise CurveHypothesisError(f"curve length {length:.6g} exceeds 10 pi / 11")
    if length > distance + tau1:
        raise CurveHypothesisError(
            f"curve length {length:.6g} exceeds endpoint distance {distance:.6g} plus tau1 = {tau1:.3g}")

    theta, w, v = _decompose(samples, frame, normals)
    height = float(np.max(np.linalg.norm(v, axis=1)))
    if height > tau1:
        raise CurveHypothesisError(f"curve strays {height:.3g} from the plane P, more than tau1 = {tau1:.3g}")
    winding = abs(theta[-1] - distance)
    if winding > get_tolerance("WINDING_TOL"):
        raise CurveHypothesisError(f"total turning {theta[-1]:.6g} differs from the endpoint distance {distance:.6g}")

    h = length / count
    speed_error = float(np.max(np.abs(_angle_between(samples[:-1], samples[1:]) / h - 1.0)))
    if speed_error > get_tolerance("ARCLENGTH_TOL"):
        logger.warning("resampled curve has speed error %.3g; refine the polyline", speed_error)
    return SphericalCurve(samples, length, distance, frame, normals, theta, w, v, tau1, eta0,
                          speed_error, was_reversed)


def _cell_terms(curve):
    h = curve.step
    dv = np.diff(curve.v, axis=0) / h
    v_mid = 0.5 * (curve.v[1:] + curve.v[:-1])
    dtheta = np.diff(curve.theta) / h
    f = 1.0 + 2.0 * np.sum(v_mid ** 2, axis=1) - dtheta
    return dv, f


@dataclass(frozen=True)
class EnergyReport:
    """
    Energy bookkeeping of a curve.

    margin_v = 14 Delta L - integral |v'|^2 and margin_f = 30 Delta L -
    integral f; both are nonnegative for admissible curves.
    """

    v_energy: float
    f_integral: float
    delta_length: float
    margin_v: float
    margin_f: float
    f_min: float
    f_nonnegative: bool


def energy_diagnostics(curve):
    """
    Discrete integrals of |v'|^2 and f = 1 + 2|v|^2 - theta' with their margins.

    Returns:
        EnergyReport
    """
    dv, f = _cell_terms(curve)
    h = curve.step
    v_energy = float(np.sum(dv ** 2) * h)
    f_integral = float(np.sum(f) * h)
    delta = curve.delta_length
    f_min = float(np.min(f))
    return EnergyReport(v_energy, f_integral, delta, 14.0 * delta - v_energy, 30.0 * delta - f_integral,
                        f_min, f_min >= -get_tolerance("SEAM_TOL"))


@dataclass(frozen=True)
class StraightenResult:
    """
    Straightened curve Gamma and its bookkeeping.

    Attributes:
        points (numpy.ndarray): Gamma sampled on the grid of the input
        theta, v, w (numpy.ndarray): Decomposition of Gamma
        bad_cells (numpy.ndarray): Cells of Z
        intervals (tuple): (a_j, b_j) grid indices of the replaced pieces
        bad_measure (float): |Z|
        replaced_measure (float): H1(gamma minus Gamma), arc length replaced
        added_measure (float): H1(Gamma minus gamma), total geodesic length added
        c_hat (float): |Z| eta^2 / Delta L, None for a geodesic input
        lipschitz_margin (float): min over cells of (4 eta / 5) d theta - |d v|
        theta_increasing (bool): theta of Gamma strictly increasing
    """

    curve: SphericalCurve
    eta: float
    points: np.ndarray
    theta: np.ndarray
    v: np.ndarray
    w: np.ndarray
    bad_cells: np.ndarray
    intervals: tuple
    bad_measure: float
    replaced_measure: float
    added_measure: float
    length_out: float
    c_hat: float
    lipschitz_margin: float
    theta_increasing: bool

    def summary(self):
        return {
            "eta": self.eta,
            "intervals": [[int(a), int(b)] for a, b in self.intervals],
            "bad_measure": self.bad_measure,
            "replaced_measure": self.replaced_measure,
            "added_measure": self.added_measure,
            "delta_length": self.curve.delta_length,
            "length_in": self.curve.length,
            "length_out": self.length_out,
            "c_hat": self.c_hat,
            "lipschitz_margin": self.lipschitz_margin,
            "theta_increasing": self.theta_increasing,
        }


def bad_set(curve, eta):
    """
    Cells where the maximal function of |v'| exceeds eta/4 or that of f exceeds 1/2.

    Returns:
        numpy.ndarray: Boolean mask over cells
    """
    dv, f = _cell_terms(curve)
    return threshold_set(np.linalg.norm(dv, axis=1), eta / 4.0) | threshold_set(f, 0.5)


def _widen(components, cells):
    # grow each bad run by one good cell per side so both ends are good points
    intervals = []
    for first, last in components:
        a = max(first - 1, 0)
        b = min(last + 2, cells)
        if intervals and a < intervals[-1][1]:
            intervals[-1] = (intervals[-1][0], b)
        else:
            intervals.append((a, b))
    return intervals


def _cross(x, y):
    return x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]


def straighten(curve, eta):
    """
    Replace the bad pieces of a curve by geodesic arcs.

    On each interval [a_j, b_j] the new angle is affine between theta(a_j)
    and theta(b_j), and the point is the one of the geodesic from z(a_j) to
    z(b_j) whose projection on P has that angle.

    Args:
        curve (SphericalCurve): Parameterized curve
        eta (float): Lipschitz target, at most 0.1

    Returns:
        StraightenResult

    Raises:
        PreconditionError: eta out of range or Z covering the whole curve
    """
    if not 0 < eta <= 0.1:
        raise PreconditionError(f"eta = {eta!r} outside (0, 0.1]")
    if curve.tau1 / eta ** 2 >= curve.length:
        logger.warning("tau1 / eta^2 = %.3g is not below the curve length %.3g",
                       curve.tau1 / eta ** 2, curve.length)
    mask = bad_set(curve, eta)
    if np.all(mask):
        raise PreconditionError("the bad set covers the whole curve")
    cells = mask.size
    intervals = _widen(runs(mask), cells)

    points = curve.points.copy()
    theta = curve.theta.copy()
    h = curve.step
    added = 0.0
    for a, b in intervals:
        p, q = curve.points[a], curve.points[b]
        added += float(_angle_between(p, q))
        inner = np.arange(a + 1, b)
        if inner.size == 0:
            continue
        theta[inner] = theta[a] + (theta[b] - theta[a]) * (inner - a) / (b - a)
        proj_p = curve.frame @ p
        proj_q = curve.frame @ q
        u = np.column_stack([np.cos(theta[inner]), np.sin(theta[inner])])
        alpha = _cross(u, proj_q)
        beta = _cross(proj_p, u)
        chord = alpha[:, None] * p + beta[:, None] * q
        points[inner] = chord / np.linalg.norm(chord, axis=1, keepdims=True)

    _, w, v = _decompose(points, curve.frame, curve.normals)
    d_theta = np.diff(theta)
    d_v = np.linalg.norm(np.diff(v, axis=0), axis=1)
    # consecutive cells suffice: the pairwise bound follows by telescoping
    margin = float(np.min(0.8 * eta * d_theta - d_v))
    length_out = float(np.sum(_angle_between(points[:-1], points[1:])))
    bad_measure = float(np.count_nonzero(mask) * h)
    replaced = float(sum(b - a for a, b in intervals) * h)
    delta = curve.delta_length
    c_hat = bad_measure * eta ** 2 / delta if delta > 0 else None
    logger.debug("straighten: %d intervals, |Z| = %.3g, Delta L = %.3g", len(intervals), bad_measure, delta)
    return StraightenResult(curve, eta, points, theta, v, w, mask, tuple(intervals), bad_measure, replaced,
                            added, length_out, c_hat, margin, bool(np.all(d_theta > 0.0)))


def to_sector_profile(result, samples=4096):
    """
    Height of Gamma as a function of the angle, on a uniform grid over [0, d].

    Returns:
        SectorProfile: aperture d, Lipschitz bound result.eta
    """
    T = float(result.theta[-1])
    grid = np.linspace(0.0, T, samples + 1)
    v = np.column_stack([np.interp(grid, result.theta, result.v[:, k]) for k in range(result.v.shape[1])])
    end_gap = float(max(np.max(np.abs(v[0])), np.max(np.abs(v[-1]))))
    if end_gap > get_tolerance("ENDPOINT_PLANE_TOL"):
        raise CurveHypothesisError(f"curve ends {end_gap:.3g} away from the plane P")
    v[0] = 0.0
    v[-1] = 0.0
    return SectorProfile(T, v, result.eta, result.curve.eta0)


def random_admissible_curve(rng, n=3, length=1.0, amplitude=1e-3, width=0.05, bumps=2, points=2001):
    """
    Seeded near-geodesic curve with smooth normal bumps.

    The base is the geodesic from e1 toward e2; each bump is a smoothstep
    pulse of the given width and random direction in span(e3, ..., en).

    Returns:
        tuple: (polyline of shape (points, n), plane frame (e1, e2))
    """
    s = np.linspace(0.0, length, points)
    v = np.zeros((points, n - 2))
    for _ in range(bumps):
        center = rng.uniform(width, length - width)
        direction = rng.standard_normal(n - 2)
        direction /= np.linalg.norm(direction)
        u = np.clip(1.0 - np.abs(s - center) / width, 0.0, 1.0)
        v += amplitude * rng.uniform(0.5, 1.0) * (u * u * (3.0 - 2.0 * u))[:, None] * direction
    w = np.sqrt(1.0 - np.sum(v ** 2, axis=1))
    polyline = np.column_stack([w * np.cos(s), w * np.sin(s), v])
    return polyline, np.eye(n)[:2]
