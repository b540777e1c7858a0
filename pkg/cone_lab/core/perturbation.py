"""
Angle deviation of perturbed nets and the push deformation.

A VertexMap phi moves the vertices of a net; the moved net phi_*(K) has
tangents at phi(x) that no longer balance. This module measures the
deviation alpha_phi(x) at each vertex, the largest deviation alpha_+, the
length change of the net, and the area gained by pushing the cone along
the unbalanced tangent sum s with a smooth bump.

Positions are evaluated in batches of shape (B, V, n) so the certificate
sampler can score many maps at once.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateGeodesicError, NetStructureError, PreconditionError
from ..utils.quadrature import integrate_2d_with_error
from ..utils.tolerances import get_tolerance
from .cone_net import EXPECTED_DEGREE, VertexKind, apply_vertex_map
from .sphere import _angle_between, point_to_arc_distance

logger = logging.getLogger(__name__)


class NetLayout:
    """
    Index arrays of a net for batched evaluation.

    Attributes:
        ids (tuple): Vertex ids in net order
        base (numpy.ndarray): Unperturbed coordinates, shape (V, n)
        starts, ends (numpy.ndarray): Vertex index of each arc end
        base_lengths (numpy.ndarray): Unperturbed arc lengths
        v0, v1 (numpy.ndarray): Vertex indices of each kind
        v0_arcs, v0_sides, v1_arcs, v1_sides (numpy.ndarray): Incident arc
            index and side (0 start, 1 end) per vertex of each kind
    """

    def __init__(self, net):
        self.ids = tuple(v.id for v in net.vertices)
        index = {vertex_id: i for i, vertex_id in enumerate(self.ids)}
        self.base = net.coords_matrix()
        self.starts = np.array([index[a.ends[0]] for a in net.arcs], dtype=int)
        self.ends = np.array([index[a.ends[1]] for a in net.arcs], dtype=int)
        self.base_lengths = np.array([net.arc_length(a.id) for a in net.arcs])

        incidence = [[] for _ in self.ids]
        for k in range(len(net.arcs)):
            incidence[self.starts[k]].append((k, 0))
            incidence[self.ends[k]].append((k, 1))
        groups = {VertexKind.V0: [], VertexKind.V1: []}
        for i, vertex in enumerate(net.vertices):
            if len(incidence[i]) != EXPECTED_DEGREE[vertex.kind]:
                raise NetStructureError(
                    f"{vertex.kind.value} vertex {vertex.id!r} has degree {len(incidence[i])}")
            groups[vertex.kind].append(i)

        def pack(members, degree):
            table = np.array([incidence[i] for i in members], dtype=int).reshape(len(members), degree, 2)
            return np.array(members, dtype=int), table[..., 0], table[..., 1]

        self.v0, self.v0_arcs, self.v0_sides = pack(groups[VertexKind.V0], 3)
        self.v1, self.v1_arcs, self.v1_sides = pack(groups[VertexKind.V1], 2)

    def positions(self, phi):
        """Stack phi's images in layout order, shape (V, n)."""
        return np.array([phi.entries[vertex_id] for vertex_id in self.ids], dtype=float)


def batched_arcs(positions, layout):
    """
    Arc lengths and end tangents for a batch of vertex positions.

    Args:
        positions (numpy.ndarray): Shape (B, V, n)
        layout (NetLayout): Index arrays of the net

    Returns:
        tuple: lengths (B, A), tangents (B, A, 2, n); tangents[..., 0, :] sits
            at the start pointing toward the end and tangents[..., 1, :] at
            the end pointing back
    """
    a = positions[:, layout.starts]
    b = positions[:, layout.ends]
    lengths = 2.0 * np.arctan2(np.linalg.norm(a - b, axis=-1), np.linalg.norm(a + b, axis=-1))
    dot = np.sum(a * b, axis=-1, keepdims=True)
    tangents = np.stack([b - dot * a, a - dot * b], axis=2)
    norms = np.linalg.norm(tangents, axis=-1, keepdims=True)
    if np.any(norms < get_tolerance("TOL_DEGENERATE")):
        raise DegenerateGeodesicError("degenerate geodesic: moved arc ends coincide or are antipodal")
    return lengths, tangents / norms


def batched_deviation(positions, layout):
    """
    Per-vertex deviations and length changes for a batch of positions.

    V0 vertices: |w1 + w2 + w3|. V1 vertices: pi minus the angle between the
    two tangents.

    Returns:
        tuple: deviations (B, V), length_delta (B,)
    """
    lengths, tangents = batched_arcs(positions, layout)
    deviations = np.zeros(lengths.shape[:1] + (len(layout.ids),))
    if layout.v0.size:
        w = tangents[:, layout.v0_arcs, layout.v0_sides]
        deviations[:, layout.v0] = np.linalg.norm(w.sum(axis=2), axis=-1)
    if layout.v1.size:
        w = tangents[:, layout.v1_arcs, layout.v1_sides]
        deviations[:, layout.v1] = math.pi - _angle_between(w[:, :, 0], w[:, :, 1])
    length_delta = np.sum(lengths - layout.base_lengths, axis=1)
    return deviations, length_delta


@dataclass(frozen=True)
class DeviationReport:
    """
    Deviation of a perturbed net.

    ratio is length_delta / alpha_plus**2 when both are positive, else None.
    """

    per_vertex: dict
    alpha_plus: float
    length_delta: float
    ratio: float = None


def deviation_report(net, phi):
    """
    Deviations at every vertex, alpha_+ and the length change of phi_*(K).

    Args:
        net (ConeNet): Net in standard decomposition
        phi (VertexMap): Vertex perturbation

    Returns:
        DeviationReport
    """
    moved = apply_vertex_map(net, phi)
    layout = NetLayout(net)
    deviations, delta = batched_deviation(moved.coords_matrix()[None], layout)
    per_vertex = dict(zip(layout.ids, deviations[0].tolist()))
    alpha = max(per_vertex.values()) if per_vertex else 0.0
    delta = float(delta[0])
    ratio = delta / alpha ** 2 if alpha > 0 and delta > 0 else None
    return DeviationReport(per_vertex, alpha, delta, ratio)


def vertex_deviation(net, phi, x):
    """
    Deviation alpha_phi(x) of phi_*(K) at the image of vertex x.

    Args:
        net (ConeNet): Net in standard decomposition
        phi (VertexMap): Vertex perturbation
        x (str): Vertex id

    Returns:
        float: |sum of tangents| at a V0 vertex, pi minus the angle at a V1 vertex
    """
    net.vertex(x)
    return deviation_report(net, phi).per_vertex[x]


def alpha_plus(net, phi):
    """Largest vertex deviation of phi_*(K)."""
    return deviation_report(net, phi).alpha_plus


def tangent_sum(net, phi, x):
    """
    Sum s of the unit tangents of phi_*(K) at phi(x).

    Returns:
        numpy.ndarray: s = w1 + w2 + w3 (V0) or w1 + w2 (V1)
    """
    moved = apply_vertex_map(net, phi)
    s = np.zeros(net.dimension)
    for _, w in moved.incident(x):
        s += w
    return s


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _smoothstep_slope(u):
    u = np.clip(u, 0.0, 1.0)
    return 6.0 * u * (1.0 - u)


@dataclass(frozen=True)
class BumpSpec:
    """
    Bump psi(z1, rho) = A(z1) * B(rho) used by the push deformation.

    A rises from 0 at z_low to 1 over `ramp`, stays 1 on the plateau and
    falls back to 0 at z_high. B falls from 1 at rho = 0 to 0 at
    rho = eta0 / 10. Both ramps are the C1 smoothstep 3u^2 - 2u^3, so psi is
    in [0, 1], nonincreasing in rho and zero outside the support rectangle.
    """

    eta0: float = 0.01
    z_low: float = 0.25
    z_high: float = 0.5
    ramp: float = 0.025

    def __post_init__(self):
        if not self.eta0 > 0:
            raise PreconditionError(f"eta0 must be positive, got {self.eta0!r}")
        if not 0 < 2 * self.ramp < self.z_high - self.z_low:
            raise PreconditionError("bump ramps do not fit inside the support")
        limit = 100.0 / self.eta0
        if max(self.max_slope_z, self.max_slope_rho) > limit:
            raise PreconditionError(f"bump gradient exceeds 100/eta0 = {limit:.6g}")

    @property
    def height(self):
        """Radial extent h = eta0 / 10 of the support."""
        return self.eta0 / 10.0

    @property
    def plateau(self):
        return self.z_low + self.ramp, self.z_high - self.ramp

    @property
    def z_breaks(self):
        return np.array([self.z_low, self.z_low + self.ramp, self.z_high - self.ramp, self.z_high])

    @property
    def max_slope_z(self):
        return 1.5 / self.ramp

    @property
    def max_slope_rho(self):
        return 1.5 / self.height

    def profile_z(self, z1):
        up = _smoothstep((z1 - self.z_low) / self.ramp)
        down = _smoothstep((self.z_high - z1) / self.ramp)
        return up * down

    def profile_z_slope(self, z1):
        u1 = (z1 - self.z_low) / self.ramp
        u2 = (self.z_high - z1) / self.ramp
        return (_smoothstep_slope(u1) * _smoothstep(u2) - _smoothstep(u1) * _smoothstep_slope(u2)) / self.ramp

    def profile_rho(self, rho):
        return 1.0 - _smoothstep(rho / self.height)

    def profile_rho_slope(self, rho):
        return -_smoothstep_slope(rho / self.height) / self.height

    def value(self, z1, rho):
        return self.profile_z(z1) * self.profile_rho(rho)

    def gradient(self, z1, rho):
        """(d psi / d z1, d psi / d rho)."""
        return (self.profile_z_slope(z1) * self.profile_rho(rho),
                self.profile_z(z1) * self.profile_rho_slope(rho))

    # closed-form integrals over the support

    @property
    def mass_z(self):
        """a = integral of A; 9/40 for the default shape."""
        return (self.z_high - self.z_low) - self.ramp

    @property
    def energy(self):
        """Integral of |grad psi|^2 over the support rectangle."""
        w, h = self.ramp, self.height
        int_a2 = (self.z_high - self.z_low - 2 * w) + 2 * (13.0 / 35.0) * w
        int_da2 = 2 * 1.2 / w
        int_b2 = (13.0 / 35.0) * h
        int_db2 = 1.2 / h
        return int_da2 * int_b2 + int_a2 * int_db2


def _face_integrand(bump, beta, v3_sq):
    def integrand(z1, rho):
        psi_z, psi_rho = bump.gradient(z1, rho)
        x = beta * psi_rho
        y = (psi_z ** 2 + psi_rho ** 2) * v3_sq
        # J - 1 without cancellation, J^2 = (1 + x)^2 + y
        return (x * (2.0 + x) + y) / (1.0 + np.sqrt((1.0 + x) ** 2 + y))
    return integrand


def face_area_change(bump, v, w, order=16):
    """
    Area change of one planar face under z -> z + psi(z1, rho) v.

    The face is {z1 e1 + rho w}; v must be orthogonal to e1. The Jacobian of
    the pushed face is J with J^2 = (1 + beta psi_rho)^2
    + |grad psi|^2 (|v|^2 - beta^2), beta = <v, w>.

    Args:
        bump (BumpSpec): Bump shape
        v (array-like): Push vector
        w (array-like): Unit tangent of the face at the vertex
        order (int): Gauss-Legendre nodes per panel

    Returns:
        tuple: (integral of J - 1, quadrature error estimate)
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    beta = float(v @ w)
    v3_sq = max(float(v @ v) - beta ** 2, 0.0)
    if beta == 0.0 and v3_sq == 0.0:
        return 0.0, 0.0
    return integrate_2d_with_error(_face_integrand(bump, beta, v3_sq), bump.z_breaks,
                                   [0.0, bump.height], order)


@dataclass(frozen=True)
class PushReport:
    """
    Area gained by the push deformation at one vertex.

    contract_holds is gain >= (c / 10) s_norm^2 - error.
    """

    vertex: str
    c: float
    gain: float
    s_norm: float
    error: float
    a: float
    c_max: float
    face_changes: tuple
    contract_holds: bool


def _push_setup(net, phi, x, bump):
    moved = apply_vertex_map(net, phi)
    e1 = moved.vertex(x).coords
    incident = moved.incident(x)
    s = np.sum([w for _, w in incident], axis=0)
    return moved, e1, incident, s


def _coefficient_bound(bump, faces, s_norm):
    # with |v| <= eta0 / 200 the first-order Jacobian term stays below 3/40
    x_max = (bump.eta0 / 200.0) * bump.max_slope_rho
    constant = faces * bump.energy / (2.0 * (1.0 - x_max))
    return min(bump.mass_z / (2.0 * constant), bump.eta0 / (200.0 * s_norm))


def max_push_coefficient(net, phi, x, bump=None):
    """
    Largest admissible push coefficient c at vertex x.

    c_max = min(a / (2C), eta0 / (200 |s|)) where a is the mass of the bump
    profile along the axis and C = k * integral |grad psi|^2 / (2 (1 - x_max))
    bounds the quadratic part of the Jacobian over the k faces at x.

    Returns:
        float: c_max
    """
    bump = bump or BumpSpec(eta0=net.eta0)
    _, _, incident, s = _push_setup(net, phi, x, bump)
    s_norm = float(np.linalg.norm(s))
    if s_norm <= get_tolerance("ZERO_DEVIATION"):
        raise PreconditionError(f"no deviation to exploit at vertex {x!r}")
    return _coefficient_bound(bump, len(incident), s_norm)


def _check_faces(moved, x, e1, incident, bump):
    # the support {1/4 <= z1 <= 1/2, rho <= h} must meet only the faces at x
    reach = math.atan2(bump.height, bump.z_low)
    for arc_id, _ in incident:
        if moved.arc_length(arc_id) <= reach:
            raise PreconditionError(f"arc {arc_id!r} is too short to carry the bump support")
    near = {arc_id for arc_id, _ in incident}
    for arc in moved.arcs:
        if arc.id in near:
            continue
        gap = float(point_to_arc_distance(e1[None], *moved.arc_geometry(arc.id))[0])
        if gap <= reach:
            raise PreconditionError(
                f"arc {arc.id!r} passes {gap:.3g} from the vertex, inside the bump support")


def push_deformation_area_gain(net, phi, x, c, bump=None, order=8, max_order=128):
    """
    Area gained by pushing phi_*(X) along c * s near phi(x).

    The map is z -> z + psi(z1, rho) v with v = c s, z1 = <z, phi(x)> and rho
    the distance to the line through phi(x). Each face at phi(x) is the
    planar sector over an incident arc; the area change of the face is the
    integral of J - 1 over the support, computed by composite Gauss-Legendre
    quadrature. The order doubles until the error estimate is below 10% of
    the gain.

    Args:
        net (ConeNet): Net in standard decomposition
        phi (VertexMap): Vertex perturbation
        x (str): Vertex id
        c (float): Push coefficient, 0 < c <= max_push_coefficient
        bump (BumpSpec): Bump shape, default BumpSpec(net.eta0)
        order (int): Initial Gauss-Legendre order per panel
        max_order (int): Order at which refinement stops

    Returns:
        PushReport

    Raises:
        PreconditionError: Zero deviation, inadmissible c, or faces that do
            not resolve as sectors near phi(x)
    """
    bump = bump or BumpSpec(eta0=net.eta0)
    moved, e1, incident, s = _push_setup(net, phi, x, bump)
    s_norm = float(np.linalg.norm(s))
    if s_norm <= get_tolerance("ZERO_DEVIATION"):
        raise PreconditionError(f"no deviation to exploit at vertex {x!r}")
    _check_faces(moved, x, e1, incident, bump)
    c_max = _coefficient_bound(bump, len(incident), s_norm)
    if not 0 < c <= c_max:
        raise PreconditionError(f"push coefficient c = {c!r} outside (0, c_max = {c_max:.6g}]")

    v = c * s
    while True:
        changes = [face_area_change(bump, v, w, order) for _, w in incident]
        gain = -sum(value for value, _ in changes)
        error = sum(err for _, err in changes)
        if error <= 0.1 * abs(gain) or 2 * order > max_order:
            break
        order *= 2
    if error > 0.1 * abs(gain):
        logger.warning("push quadrature error %.3g is above 10%% of the gain %.3g", error, gain)

    holds = gain >= (c / 10.0) * s_norm ** 2 - error
    logger.debug("push at %s: c=%.3g |s|=%.3g gain=%.3g err=%.2g", x, c, s_norm, gain, error)
    return PushReport(x, c, gain, s_norm, error, bump.mass_z, c_max,
                      tuple(value for value, _ in changes), holds)
