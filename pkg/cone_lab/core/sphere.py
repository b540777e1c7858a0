"""
Spherical geometry on S^{n-1}.

Exact-formula geodesics, distances, tangents and angles on the unit sphere
of R^n, plus the spherical triangle identities used for the tetrahedral
cone. Every function checks dimensions and unit norms of its inputs.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateGeodesicError, DimensionMismatchError, NonUnitVectorError
from ..utils.tolerances import get_tolerance


def unit_vector(coords, dim=None):
    """
    Validate coordinates as a point of the unit sphere.

    Args:
        coords (array-like): n real components
        dim (int): Expected dimension, or None to accept any n >= 3

    Returns:
        numpy.ndarray: Read-only float64 copy of the coordinates

    Raises:
        DimensionMismatchError: Wrong shape, n < 3 or n != dim
        NonUnitVectorError: Norm differs from 1 by more than TOL_UNIT
    """
    u = np.array(coords, dtype=float)
    if u.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {u.shape}")
    if u.size < 3:
        raise DimensionMismatchError(f"dimension must be at least 3, got {u.size}")
    if dim is not None and u.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {u.size}")
    norm = np.linalg.norm(u)
    if not np.isfinite(norm) or abs(norm - 1.0) > get_tolerance("TOL_UNIT"):
        raise NonUnitVectorError(f"|u| = {norm!r} is not 1 within {get_tolerance('TOL_UNIT')}")
    u.flags.writeable = False
    return u


def normalize(x):
    """
    Scale a nonzero vector to unit length.

    Args:
        x (array-like): Nonzero vector

    Returns:
        numpy.ndarray: x / |x|
    """
    x = np.asarray(x, dtype=float)
    norm = np.linalg.norm(x)
    if norm == 0.0 or not np.isfinite(norm):
        raise DegenerateGeodesicError("cannot normalize a zero vector")
    return x / norm


def _pair(u, v):
    u = unit_vector(u)
    v = unit_vector(v, dim=u.size)
    return u, v


def _angle_between(p, q):
    # 2*atan2(|p-q|, |p+q|) equals arccos(<p,q>) for unit vectors but keeps
    # full precision near 0 and pi
    return 2.0 * np.arctan2(np.linalg.norm(p - q, axis=-1), np.linalg.norm(p + q, axis=-1))


def geodesic_distance(u, v):
    """
    Geodesic distance on the sphere.

    Args:
        u (array-like): Unit vector
        v (array-like): Unit vector of the same dimension

    Returns:
        float: Angle in [0, pi]
    """
    u, v = _pair(u, v)
    return float(_angle_between(u, v))


def _check_nondegenerate(d):
    tol = get_tolerance("TOL_DEGENERATE")
    if d < tol:
        raise DegenerateGeodesicError("degenerate geodesic: coincident endpoints")
    if np.pi - d < tol:
        raise DegenerateGeodesicError("degenerate geodesic: antipodal endpoints")


def geodesic_point(u, v, t):
    """
    Point at fraction t along the minimizing geodesic from u to v (slerp).

    Args:
        u (array-like): Start point
        v (array-like): End point, neither equal nor antipodal to u
        t (float or array-like): Fraction(s) in [0, 1]

    Returns:
        numpy.ndarray: Unit vector, or an array of shape (len(t), n)
    """
    u, v = _pair(u, v)
    d = float(_angle_between(u, v))
    _check_nondegenerate(d)
    t_arr = np.asarray(t, dtype=float)
    s = np.atleast_1d(t_arr)[:, None]
    points = (np.sin((1.0 - s) * d) * u + np.sin(s * d) * v) / np.sin(d)
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    # exact endpoints
    points[s[:, 0] == 0.0] = u
    points[s[:, 0] == 1.0] = v
    return points[0] if t_arr.ndim == 0 else points


def tangent_at(u, v):
    """
    Unit tangent at u of the geodesic heading toward v.

    Args:
        u (array-like): Base point
        v (array-like): Target point, neither equal nor antipodal to u

    Returns:
        numpy.ndarray: normalize(v - <u,v> u)
    """
    u, v = _pair(u, v)
    _check_nondegenerate(float(_angle_between(u, v)))
    w = v - np.dot(u, v) * u
    w = w / np.linalg.norm(w)
    # one projection step removes the rounding component along u
    w = w - np.dot(w, u) * u
    return w / np.linalg.norm(w)


def vertex_angle(a, b, c):
    """
    Angle at a between the geodesics toward b and toward c.

    Returns:
        float: Angle in [0, pi]
    """
    return float(_angle_between(tangent_at(a, b), tangent_at(a, c)))


def equilateral_side(angle):
    """
    Side length of the equilateral spherical triangle with a given angle.

    The law of cosines with three equal sides X = cos L reads
    cos(angle) = (X - X^2) / (1 - X^2) = X / (1 + X).

    Args:
        angle (float): Vertex angle in (pi/3, pi)

    Returns:
        float: Side length L
    """
    c = np.cos(angle)
    x = c / (1.0 - c)
    if not -1.0 < x < 1.0:
        raise DegenerateGeodesicError(f"no equilateral spherical triangle with angle {angle!r}")
    return float(np.arccos(x))


def random_unit_vectors(rng, count, n):
    """
    Uniform samples on S^{n-1}.

    Args:
        rng (numpy.random.Generator): Random source
        count (int): Number of samples
        n (int): Ambient dimension

    Returns:
        numpy.ndarray: Array of shape (count, n)
    """
    x = rng.standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def arc_point(start, tangent, s):
    """Point(s) at arc length s along the great circle leaving start with tangent."""
    s = np.asarray(s, dtype=float)
    return np.cos(s)[..., None] * start + np.sin(s)[..., None] * tangent


def point_to_arc_distance(points, start, tangent, length):
    """
    Exact geodesic distance from points to a great-circle arc.

    The arc is {cos(s) start + sin(s) tangent : 0 <= s <= length}.

    Args:
        points (numpy.ndarray): Unit vectors, shape (m, n)
        start (numpy.ndarray): Arc start, unit
        tangent (numpy.ndarray): Unit tangent at start, orthogonal to start
        length (float): Arc length in (0, 2 pi)

    Returns:
        numpy.ndarray: Distances, shape (m,)
    """
    points = np.atleast_2d(points)
    x = points @ start
    y = points @ tangent
    phi = np.mod(np.arctan2(y, x), 2.0 * np.pi)
    r = np.hypot(x, y)
    inside = (phi <= length) & (r > 0.0)
    # distance to the great circle: angle between p and its projection
    safe_r = np.where(r > 0.0, r, 1.0)[:, None]
    proj = (x[:, None] * start + y[:, None] * tangent) / safe_r
    d_circle = _angle_between(points, proj)
    end = np.cos(length) * start + np.sin(length) * tangent
    d_ends = np.minimum(_angle_between(points, start), _angle_between(points, end))
    return np.where(inside, d_circle, d_ends)


@dataclass(frozen=True)
class SphericalTriangle:
    """
    Spherical triangle with sides and angles derived from its vertices.

    Side l_i is opposite vertex i and angle alpha_i sits at vertex i.
    """

    vertices: tuple
    sides: tuple
    angles: tuple

    @classmethod
    def from_vertices(cls, a, b, c):
        a = unit_vector(a)
        b = unit_vector(b, dim=a.size)
        c = unit_vector(c, dim=a.size)
        sides = (geodesic_distance(b, c), geodesic_distance(c, a), geodesic_distance(a, b))
        tol = get_tolerance("TOL_DEGENERATE")
        for side in sides:
            if not tol < side < np.pi - tol:
                raise DegenerateGeodesicError(f"triangle side {side!r} outside (0, pi)")
        angles = (vertex_angle(a, b, c), vertex_angle(b, c, a), vertex_angle(c, a, b))
        return cls(vertices=(a, b, c), sides=sides, angles=angles)


def triangle_identities_residual(triangle):
    """
    Residuals of the spherical laws of sines and cosines.

    Args:
        triangle (SphericalTriangle): Triangle to check

    Returns:
        tuple: (residual_sines, residual_cosines); both near 0 when sides and
            angles agree with each other

    Raises:
        DegenerateGeodesicError: sin l_j sin l_k below SIN_PRODUCT_MIN
    """
    l = np.array(triangle.sides)
    alpha = np.array(triangle.angles)
    ratios = np.sin(l) / np.sin(alpha)
    residual_sines = float(ratios.max() - ratios.min())

    residual_cosines = 0.0
    floor = get_tolerance("SIN_PRODUCT_MIN")
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        denom = np.sin(l[j]) * np.sin(l[k])
        if denom < floor:
            raise DegenerateGeodesicError(f"degenerate side: sin l{j + 1} sin l{k + 1} = {denom!r}")
        predicted = (np.cos(l[i]) - np.cos(l[j]) * np.cos(l[k])) / denom
        residual_cosines = max(residual_cosines, float(abs(np.cos(alpha[i]) - predicted)))
    return residual_sines, residual_cosines
