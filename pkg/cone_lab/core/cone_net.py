"""
Geodesic nets K = X ∩ ∂B representing two-dimensional cones.

A ConeNet stores the vertices (triple points V0 and split points V1) and
the great-circle arcs between them; the cone X itself is the cone over the
net. This module builds the canonical nets (plane, Y, T, cube, orthogonal
unions), cuts long arcs into the standard decomposition, validates the
minimal-looking conditions, moves vertices by a VertexMap, and measures
lengths, densities and normalized Hausdorff distances.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx
import numpy as np

from ..errors import (
    DegenerateGeodesicError,
    DimensionMismatchError,
    EtaViolationError,
    NetStructureError,
    PreconditionError,
)
from ..utils.tolerances import get_tolerance
from .sphere import (
    _angle_between,
    arc_point,
    normalize,
    point_to_arc_distance,
    tangent_at,
    unit_vector,
)

logger = logging.getLogger(__name__)

DEFAULT_ETA0 = 0.01
MAX_ARC = 9.0 * math.pi / 10.0


class VertexKind(str, Enum):
    """Triple points (V0) and split points added by the decomposition (V1)."""

    V0 = "V0"
    V1 = "V1"


EXPECTED_DEGREE = {VertexKind.V0: 3, VertexKind.V1: 2}


@dataclass(frozen=True)
class Vertex:
    id: str
    coords: np.ndarray
    kind: VertexKind


@dataclass(frozen=True)
class Arc:
    """
    Great-circle arc between two vertices.

    Without `through` the arc is the minimizing geodesic between its ends.
    With `through` it is the arc of the great circle through start, through
    and end that contains `through`; this is how arcs of length >= pi are
    stored before the standard decomposition.
    """

    id: str
    ends: tuple
    through: np.ndarray = None


@dataclass(frozen=True)
class ConeNet:
    """
    Trace of a two-dimensional cone on the unit sphere.

    Construction checks the structural invariants: unique ids, a common
    dimension, unit coordinates, distinct non-antipodal arc ends. Vertex
    degrees and angles are checked by validate_minimal_looking.
    """

    dimension: int
    vertices: tuple
    arcs: tuple
    eta0: float = DEFAULT_ETA0
    _index: dict = field(init=False, repr=False, compare=False)
    _geometry: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 3:
            raise DimensionMismatchError(f"dimension must be at least 3, got {self.dimension}")
        if not self.eta0 > 0:
            raise EtaViolationError(f"eta0 must be positive, got {self.eta0!r}")
        index = {}
        for vertex in self.vertices:
            if vertex.id in index:
                raise NetStructureError(f"duplicate vertex id {vertex.id!r}")
            unit_vector(vertex.coords, dim=self.dimension)
            index[vertex.id] = vertex
        geometry = {}
        for arc in self.arcs:
            if arc.id in geometry:
                raise NetStructureError(f"duplicate arc id {arc.id!r}")
            a_id, b_id = arc.ends
            if a_id not in index or b_id not in index:
                raise NetStructureError(f"arc {arc.id!r} references an unknown vertex")
            if a_id == b_id:
                raise NetStructureError(f"arc {arc.id!r} is a closed loop; store circles as chained arcs")
            geometry[arc.id] = _arc_geometry(arc, index[a_id].coords, index[b_id].coords)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_geometry", geometry)

    def vertex(self, vertex_id):
        """Return the Vertex with the given id."""
        return self._index[vertex_id]

    def arc_geometry(self, arc_id):
        """
        Start point, unit tangent at start, and length of an arc.

        Returns:
            tuple: (start, tangent, length)
        """
        return self._geometry[arc_id]

    def arc_length(self, arc_id):
        return self._geometry[arc_id][2]

    def arc_end_tangents(self, arc_id):
        """Unit tangents at the two ends of an arc, both pointing into the arc."""
        start, tangent, length = self._geometry[arc_id]
        back = np.sin(length) * start - np.cos(length) * tangent
        return tangent, back

    def incident(self, vertex_id):
        """List of (arc id, tangent at the vertex pointing into the arc)."""
        result = []
        for arc in self.arcs:
            t_start, t_end = self.arc_end_tangents(arc.id)
            if arc.ends[0] == vertex_id:
                result.append((arc.id, t_start))
            if arc.ends[1] == vertex_id:
                result.append((arc.id, t_end))
        return result

    def degree(self, vertex_id):
        return len(self.incident(vertex_id))

    def coords_matrix(self):
        """Vertex coordinates stacked in vertex order, shape (V, n)."""
        return np.array([v.coords for v in self.vertices])


def _arc_geometry(arc, a, b):
    tol = get_tolerance("TOL_DEGENERATE")
    if arc.through is None:
        d = float(_angle_between(a, b))
        if d < tol or math.pi - d < tol:
            raise NetStructureError(f"arc {arc.id!r} has coincident or antipodal ends")
        return a, tangent_at(a, b), d
    p = unit_vector(arc.through, dim=a.size)
    tangent = tangent_at(a, p)
    # the end must lie on the great circle spanned by (a, tangent)
    off_plane = b - np.dot(b, a) * a - np.dot(b, tangent) * tangent
    if np.linalg.norm(off_plane) > get_tolerance("ORTHO_TOL"):
        raise NetStructureError(f"arc {arc.id!r}: end is not on the circle through start and through-point")
    length = float(np.mod(np.arctan2(np.dot(b, tangent), np.dot(b, a)), 2.0 * math.pi))
    through_angle = float(np.mod(np.arctan2(np.dot(p, tangent), np.dot(p, a)), 2.0 * math.pi))
    if not tol < through_angle < length or length > 2.0 * math.pi - tol:
        raise NetStructureError(f"arc {arc.id!r}: through-point is not interior to the arc")
    return a, tangent, length


def _make_vertex(vertex_id, coords, kind):
    coords = np.array(coords, dtype=float)
    coords.flags.writeable = False
    return Vertex(vertex_id, coords, VertexKind(kind))


def _check_orthonormal(vectors, n):
    m = np.array([np.asarray(v, dtype=float) for v in vectors])
    if m.shape[1] != n:
        raise DimensionMismatchError(f"frame vectors must have dimension {n}, got {m.shape[1]}")
    gram = m @ m.T
    if np.max(np.abs(gram - np.eye(len(vectors)))) > get_tolerance("ORTHO_TOL"):
        raise NetStructureError("frame is not orthonormal")
    return m


def complete_frame(vectors, n):
    """
    Extend orthonormal vectors to k+1 orthonormal vectors of R^n.

    Uses the standard basis vector least aligned with the span, then one
    Gram-Schmidt step.
    """
    m = np.array(vectors, dtype=float).reshape(-1, n)
    candidates = np.eye(n) - (np.eye(n) @ m.T) @ m
    best = int(np.argmax(np.linalg.norm(candidates, axis=1)))
    extra = candidates[best]
    extra = extra - m.T @ (m @ extra)
    return np.vstack([m, normalize(extra)])


def _basis(n, k):
    return np.eye(n)[:k]


def build_plane(n, frame=None, eta0=DEFAULT_ETA0):
    """
    Great circle of a 2-plane split at three equally spaced V1 vertices.

    Args:
        n (int): Ambient dimension
        frame (tuple): Two orthonormal vectors spanning the plane, default (e1, e2)
        eta0 (float): Structural constant

    Returns:
        ConeNet: 3 vertices, 3 arcs of length 2 pi / 3
    """
    if n < 3:
        raise DimensionMismatchError(f"dimension must be at least 3, got {n}")
    u1, u2 = _check_orthonormal(frame, n) if frame is not None else _basis(n, 2)
    vertices = []
    for k in range(3):
        angle = 2.0 * math.pi * k / 3.0
        vertices.append(_make_vertex(f"p{k}", math.cos(angle) * u1 + math.sin(angle) * u2, "V1"))
    arcs = tuple(Arc(f"a{k}", (f"p{k}", f"p{(k + 1) % 3}")) for k in range(3))
    return ConeNet(n, tuple(vertices), arcs, eta0)


def build_Y(n, axis=None, orientation=None, eta0=DEFAULT_ETA0):
    """
    Cone of type Y: three half great circles between two poles at 120 degrees.

    Args:
        n (int): Ambient dimension
        axis (array-like): Unit vector of the spine, default e1
        orientation (array-like): Unit vector orthogonal to axis giving the
            direction of the first arm, default the first completing vector
        eta0 (float): Structural constant

    Returns:
        ConeNet: poles "n", "s" (V0), midpoints "m0".."m2" (V1), 6 arcs of pi/2
    """
    if n < 3:
        raise DimensionMismatchError(f"dimension must be at least 3, got {n}")
    axis = unit_vector(axis, dim=n) if axis is not None else np.eye(n)[0]
    if orientation is None:
        frame = complete_frame(complete_frame([axis], n), n)
    else:
        _check_orthonormal([axis, orientation], n)
        frame = complete_frame([axis, orientation], n)
    _, u1, u2 = frame[:3]
    vertices = [_make_vertex("n", axis, "V0"), _make_vertex("s", -axis, "V0")]
    arcs = []
    for k in range(3):
        angle = 2.0 * math.pi * k / 3.0
        vertices.append(_make_vertex(f"m{k}", math.cos(angle) * u1 + math.sin(angle) * u2, "V1"))
        arcs.append(Arc(f"n-m{k}", ("n", f"m{k}")))
        arcs.append(Arc(f"m{k}-s", (f"m{k}", "s")))
    return ConeNet(n, tuple(vertices), tuple(arcs), eta0)


TETRAHEDRON = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]) / math.sqrt(3.0)


def _placed(points, n, placement):
    q = _basis(n, 3).T if placement is None else np.asarray(placement, dtype=float)
    if q.shape != (n, 3):
        raise DimensionMismatchError(f"placement must have shape ({n}, 3), got {q.shape}")
    if np.max(np.abs(q.T @ q - np.eye(3))) > get_tolerance("ORTHO_TOL"):
        raise NetStructureError("placement columns are not orthonormal")
    return points @ q.T


def build_T(n, placement=None, eta0=DEFAULT_ETA0):
    """
    Cone of type T over the edges of a regular tetrahedron.

    Args:
        n (int): Ambient dimension
        placement (array-like): n x 3 matrix with orthonormal columns mapping
            R^3 isometrically into R^n, default the first three axes
        eta0 (float): Structural constant

    Returns:
        ConeNet: 4 V0 vertices, 6 arcs of length arccos(-1/3)
    """
    if n < 3:
        raise DimensionMismatchError(f"dimension must be at least 3, got {n}")
    points = _placed(TETRAHEDRON, n, placement)
    vertices = tuple(_make_vertex(f"t{i}", points[i], "V0") for i in range(4))
    arcs = tuple(Arc(f"t{i}-t{j}", (f"t{i}", f"t{j}")) for i in range(4) for j in range(i + 1, 4))
    return ConeNet(n, vertices, arcs, eta0)


def build_cube(n, placement=None, eta0=DEFAULT_ETA0):
    """
    Cone over the edges of the inscribed cube: minimal-looking, not minimal.

    Returns:
        ConeNet: 8 V0 vertices, 12 arcs of length arccos(1/3)
    """
    if n < 3:
        raise DimensionMismatchError(f"dimension must be at least 3, got {n}")
    signs = [(sx, sy, sz) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)]
    points = _placed(np.array(signs, dtype=float) / math.sqrt(3.0), n, placement)
    ids = ["c" + "".join("+" if s > 0 else "-" for s in sign) for sign in signs]
    vertices = tuple(_make_vertex(ids[i], points[i], "V0") for i in range(8))
    arcs = []
    for i in range(8):
        for j in range(i + 1, 8):
            # cube edges join vertices differing in exactly one sign
            if sum(a != b for a, b in zip(signs[i], signs[j])) == 1:
                arcs.append(Arc(f"{ids[i]}|{ids[j]}", (ids[i], ids[j])))
    return ConeNet(n, vertices, tuple(arcs), eta0)


def _net_points(net):
    rows = [v.coords for v in net.vertices]
    rows.extend(arc.through for arc in net.arcs if arc.through is not None)
    return np.array(rows)


def build_union(nets):
    """
    Disjoint union of nets lying in pairwise orthogonal subspaces.

    Args:
        nets (list): ConeNet instances of a common dimension

    Returns:
        ConeNet: Union with ids prefixed "c{i}:"; eta0 is the smallest eta0

    Raises:
        NetStructureError: Components not mutually orthogonal
    """
    if not nets:
        raise NetStructureError("union of no nets")
    n = nets[0].dimension
    if any(net.dimension != n for net in nets):
        raise DimensionMismatchError("all nets in a union must share the ambient dimension")
    tol = get_tolerance("ORTHO_TOL")
    spans = [_net_points(net) for net in nets]
    for i in range(len(nets)):
        for j in range(i + 1, len(nets)):
            overlap = np.max(np.abs(spans[i] @ spans[j].T))
            if overlap > tol:
                raise NetStructureError(f"components {i} and {j} are not in orthogonal subspaces (overlap {overlap:.3g})")
    vertices, arcs = [], []
    for i, net in enumerate(nets):
        prefix = f"c{i}:"
        vertices.extend(Vertex(prefix + v.id, v.coords, v.kind) for v in net.vertices)
        arcs.extend(Arc(prefix + a.id, (prefix + a.ends[0], prefix + a.ends[1]), a.through) for a in net.arcs)
    return ConeNet(n, tuple(vertices), tuple(arcs), min(net.eta0 for net in nets))


def embed_orthogonal(nets):
    """
    Move nets given in their own coordinates into orthogonal coordinate blocks.

    Each net is expressed in an orthonormal basis of the span of its points
    (SVD) and placed in its own block of R^N, N = max(3, total rank).

    Args:
        nets (list): ConeNet instances, any dimensions

    Returns:
        list: ConeNet instances of the common dimension N
    """
    bases = []
    for net in nets:
        points = _net_points(net)
        _, sigma, vt = np.linalg.svd(points, full_matrices=False)
        rank = int(np.sum(sigma > get_tolerance("ORTHO_TOL") * sigma[0]))
        bases.append(vt[:rank])
    total = max(3, sum(b.shape[0] for b in bases))
    placed, offset = [], 0
    for net, basis in zip(nets, bases):
        k = basis.shape[0]

        def move(x, basis=basis, offset=offset, k=k):
            y = np.zeros(total)
            y[offset:offset + k] = basis @ x
            return y / np.linalg.norm(y)

        vertices = tuple(_make_vertex(v.id, move(v.coords), v.kind) for v in net.vertices)
        arcs = tuple(Arc(a.id, a.ends, None if a.through is None else move(a.through)) for a in net.arcs)
        placed.append(ConeNet(total, vertices, arcs, net.eta0))
        offset += k
    return placed


def net_graph(net):
    """networkx graph of the net: vertices as nodes, arcs as edges."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(v.id for v in net.vertices)
    graph.add_edges_from((a.ends[0], a.ends[1], a.id) for a in net.arcs)
    return graph


def net_components(net):
    """
    Connected components of a net, ordered by their first vertex.

    Returns:
        list: ConeNet per component (ids unchanged)
    """
    order = {v.id: i for i, v in enumerate(net.vertices)}
    components = sorted(nx.connected_components(net_graph(net)), key=lambda c: min(order[v] for v in c))
    result = []
    for members in components:
        vertices = tuple(v for v in net.vertices if v.id in members)
        arcs = tuple(a for a in net.arcs if a.ends[0] in members)
        result.append(ConeNet(net.dimension, vertices, arcs, net.eta0))
    return result


def net_length(net):
    """Total length of the net (sum of arc lengths)."""
    return float(sum(net.arc_length(arc.id) for arc in net.arcs))


def net_density(net):
    """Density of the cone over the net: half of its length."""
    return net_length(net) / 2.0


def standard_decompose(net):
    """
    Cut arcs longer than 9 pi / 10 into the fewest equal pieces.

    New cut points are V1 vertices "<arc>.<j>" and the pieces are arcs
    "<arc>/<j>". The point set of the net is unchanged.

    Raises:
        EtaViolationError: An arc (or a piece) shorter than 10 eta0
    """
    floor = 10.0 * net.eta0
    vertices = list(net.vertices)
    arcs = []
    for arc in net.arcs:
        start, tangent, length = net.arc_geometry(arc.id)
        if length < floor:
            raise EtaViolationError(f"eta0 violated: arc {arc.id!r} has length {length:.6g} < 10*eta0 = {floor:.6g}")
        if length <= MAX_ARC:
            arcs.append(arc if arc.through is None else Arc(arc.id, arc.ends))
            continue
        pieces = math.ceil(length / MAX_ARC)
        if length / pieces < floor:
            raise EtaViolationError(f"eta0 violated: pieces of arc {arc.id!r} would be shorter than 10*eta0")
        ends = [arc.ends[0]]
        for j in range(1, pieces):
            point = arc_point(start, tangent, j * length / pieces)
            vertex_id = f"{arc.id}.{j}"
            vertices.append(_make_vertex(vertex_id, point / np.linalg.norm(point), "V1"))
            ends.append(vertex_id)
        ends.append(arc.ends[1])
        for j in range(pieces):
            arcs.append(Arc(f"{arc.id}/{j}", (ends[j], ends[j + 1])))
        logger.debug("cut arc %s of length %.6g into %d pieces", arc.id, length, pieces)
    return ConeNet(net.dimension, tuple(vertices), tuple(arcs), net.eta0)


@dataclass(frozen=True)
class Violation:
    check: str
    subject: str
    value: float
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Findings of validate_minimal_looking; `passed` ignores ball-condition notes."""

    violations: tuple
    ball_condition: tuple
    min_arc_length: float
    max_angle_deviation: float
    min_separation: float

    @property
    def passed(self):
        return not self.violations

    def by_check(self, check):
        return [v for v in self.violations if v.check == check]


def _sample_arc(net, arc_id, step):
    start, tangent, length = net.arc_geometry(arc_id)
    count = max(16, int(math.ceil(length / step)) + 1)
    return arc_point(start, tangent, np.linspace(0.0, length, count))


def validate_minimal_looking(net, eta0=None):
    """
    Check the minimal-looking conditions and report every violation.

    Checks: (a) arc lengths >= 10 eta0; (b) angles of 2 pi / 3 at V0 and pi
    at V1 within ANGLE_TOL; (c) arcs without a common endpoint are at least
    eta0 apart (sampled, with exact point-to-arc distances); (d) vertex
    degrees 3 for V0 and 2 for V1, so no free endpoints. The ball condition
    (a close pair of arcs has a common endpoint within the distance) is
    reported separately.

    Args:
        net (ConeNet): Net to check
        eta0 (float): Override of net.eta0

    Returns:
        ValidationReport
    """
    eta0 = net.eta0 if eta0 is None else eta0
    angle_tol = get_tolerance("ANGLE_TOL")
    violations = []

    lengths = {arc.id: net.arc_length(arc.id) for arc in net.arcs}
    for arc_id, length in lengths.items():
        if length < 10.0 * eta0:
            violations.append(Violation("length", arc_id, length, f"arc length {length:.6g} < 10*eta0"))

    max_dev = 0.0
    for vertex in net.vertices:
        incident = net.incident(vertex.id)
        expected = EXPECTED_DEGREE[vertex.kind]
        if len(incident) != expected:
            violations.append(Violation("degree", vertex.id, len(incident),
                                        f"{vertex.kind.value} vertex has degree {len(incident)}, expected {expected}"))
            continue
        target = 2.0 * math.pi / 3.0 if vertex.kind is VertexKind.V0 else math.pi
        tangents = [t for _, t in incident]
        for i in range(len(tangents)):
            for j in range(i + 1, len(tangents)):
                dev = abs(float(_angle_between(tangents[i], tangents[j])) - target)
                max_dev = max(max_dev, dev)
                if dev > angle_tol:
                    violations.append(Violation("angle", vertex.id, dev, f"angle deviates from {target:.6g} by {dev:.6g}"))

    step = min(get_tolerance("SEPARATION_STEP"), eta0 / 4.0)
    samples = {arc.id: _sample_arc(net, arc.id, step) for arc in net.arcs}
    min_sep = math.inf
    ball_notes = []
    for i, arc_i in enumerate(net.arcs):
        for arc_j in net.arcs[i + 1:]:
            shared = set(arc_i.ends) & set(arc_j.ends)
            dist_ij = point_to_arc_distance(samples[arc_i.id], *net.arc_geometry(arc_j.id))
            dist_ji = point_to_arc_distance(samples[arc_j.id], *net.arc_geometry(arc_i.id))
            if not shared:
                sep = float(min(dist_ij.min(), dist_ji.min()))
                min_sep = min(min_sep, sep)
                if sep < eta0:
                    violations.append(Violation("separation", f"{arc_i.id},{arc_j.id}", sep,
                                                f"arcs without common endpoint are {sep:.6g} < eta0 apart"))
            for points, dists, other in ((samples[arc_i.id], dist_ij, arc_j), (samples[arc_j.id], dist_ji, arc_i)):
                note = _ball_condition(net, points, dists, shared, eta0)
                if note is not None:
                    ball_notes.append(Violation("ball", f"{other.id}", note, "close arcs lack a common endpoint within the distance"))

    min_length = min(lengths.values()) if lengths else math.inf
    return ValidationReport(tuple(violations), tuple(ball_notes), min_length, max_dev, min_sep)


def _ball_condition(net, points, dists, shared, eta0):
    close = dists <= eta0
    if not np.any(close):
        return None
    if not shared:
        return float(dists[close].min())
    ends = np.array([net.vertex(v).coords for v in shared])
    # distance from each close sample to the nearest common endpoint
    to_end = np.min(2.0 * np.arctan2(np.linalg.norm(points[close][:, None, :] - ends[None], axis=2),
                                     np.linalg.norm(points[close][:, None, :] + ends[None], axis=2)), axis=1)
    bad = to_end > dists[close] + get_tolerance("ANGLE_TOL")
    return float(dists[close][bad].min()) if np.any(bad) else None


@dataclass(frozen=True)
class VertexMap:
    """
    Perturbation phi of the vertices with |phi(x) - x| <= eta1 (chord norm).

    Attributes:
        entries (dict): vertex id -> unit vector
        eta1 (float): Displacement bound
    """

    entries: dict
    eta1: float

    @classmethod
    def identity(cls, net, eta1):
        return cls({v.id: v.coords for v in net.vertices}, eta1)

    @classmethod
    def from_displacements(cls, net, displacements, eta1):
        """phi(x) = normalize(x + d_x) for the given displacements, identity elsewhere."""
        entries = {}
        for v in net.vertices:
            d = displacements.get(v.id)
            entries[v.id] = v.coords if d is None else normalize(v.coords + np.asarray(d, dtype=float))
        return cls(entries, eta1)


def apply_vertex_map(net, phi):
    """
    The moved net phi_*(K): same combinatorics, arcs replaced by geodesics.

    Args:
        net (ConeNet): Net in standard decomposition (arcs <= 9 pi / 10)
        phi (VertexMap): Vertex perturbation

    Returns:
        ConeNet

    Raises:
        EtaViolationError: Some vertex moves more than eta1
        PreconditionError: Missing vertices or arcs longer than 9 pi / 10
        DegenerateGeodesicError: Moved ends coincide or become antipodal
    """
    missing = [v.id for v in net.vertices if v.id not in phi.entries]
    if missing:
        raise PreconditionError(f"vertex map does not cover {missing}")
    if phi.eta1 >= net.eta0 / 10.0:
        logger.warning("eta1 = %g is not below eta0/10 = %g", phi.eta1, net.eta0 / 10.0)
    for arc in net.arcs:
        if net.arc_length(arc.id) > MAX_ARC + get_tolerance("LENGTH_TOL"):
            raise PreconditionError(f"arc {arc.id!r} is longer than 9*pi/10; run standard_decompose first")
    vertices = []
    for v in net.vertices:
        image = unit_vector(phi.entries[v.id], dim=net.dimension)
        chord = float(np.linalg.norm(image - v.coords))
        if chord > phi.eta1:
            raise EtaViolationError(f"vertex {v.id!r} moved by {chord:.6g} > eta1 = {phi.eta1:.6g}")
        vertices.append(Vertex(v.id, v.coords if image is v.coords else _freeze(image), v.kind))
    arcs = tuple(Arc(a.id, a.ends) for a in net.arcs)
    try:
        return ConeNet(net.dimension, tuple(vertices), arcs, net.eta0)
    except NetStructureError as exc:
        raise DegenerateGeodesicError(str(exc)) from exc


def _freeze(x):
    x = np.array(x, dtype=float)
    x.flags.writeable = False
    return x


def length_gradient(net):
    """
    Gradient of net_length with respect to the vertex positions.

    Moving a vertex x along a tangent direction e changes the length of an
    incident arc at rate -<e, w> where w is the unit tangent of that arc at
    x, so the tangential gradient is -sum(w).

    Returns:
        tuple: (dict vertex id -> gradient vector, float total norm)
    """
    gradient = {}
    for v in net.vertices:
        g = np.zeros(net.dimension)
        for _, w in net.incident(v.id):
            g -= w
        gradient[v.id] = g
    norm = math.sqrt(sum(float(g @ g) for g in gradient.values()))
    return gradient, norm


def _cone_one_sided(net_from, net_to, center, r, step):
    """sup of dist(y, cone over net_to) for y on the cone over net_from inside B(center, r)."""
    center = np.asarray(center, dtype=float)
    reach = float(np.linalg.norm(center)) + r
    angular_step = step / reach
    best = 0.0
    for arc in net_from.arcs:
        points = _sample_arc(net_from, arc.id, angular_step)
        # the ray t*p meets B(center, r) for t in [t_lo, t_hi]
        pc = points @ center
        disc = pc ** 2 - float(center @ center) + r ** 2
        hits = disc >= 0.0
        t_hi = pc + np.sqrt(np.where(hits, disc, 0.0))
        hits &= t_hi > 0.0
        if not np.any(hits):
            continue
        delta = np.full(points.shape[0], math.inf)
        for other in net_to.arcs:
            delta = np.minimum(delta, point_to_arc_distance(points, *net_to.arc_geometry(other.id)))
        # dist(t p, cone) = t sin(min(delta, pi/2)), increasing in t
        dist = t_hi * np.sin(np.minimum(delta, math.pi / 2.0))
        best = max(best, float(dist[hits].max()))
    return best


def normalized_hausdorff_distance(a, b, center=None, r=1.0, step=None, one_sided=False):
    """
    Normalized distance between the cones over two nets in B(center, r).

    The sum of the two one-sided suprema of dist(y, other cone) over
    y in one cone ∩ B(center, r), divided by r. An empty intersection
    contributes 0. On each ray of a cone the supremum is attained at the
    far end of the ray inside the ball, so only the net is sampled, with
    angular step step / (|center| + r).

    Args:
        a (ConeNet): First net
        b (ConeNet): Second net, same dimension
        center (array-like): Ball center, default the origin
        r (float): Ball radius
        step (float): Sampling step, default HAUSDORFF_STEP * r
        one_sided (bool): Also return the two one-sided terms

    Returns:
        float, or tuple (total, a_to_b, b_to_a) when one_sided is set
    """
    if a.dimension != b.dimension:
        raise DimensionMismatchError("nets live in different dimensions")
    if not r > 0:
        raise PreconditionError(f"radius must be positive, got {r!r}")
    center = np.zeros(a.dimension) if center is None else np.asarray(center, dtype=float)
    step = get_tolerance("HAUSDORFF_STEP") * r if step is None else step
    a_to_b = _cone_one_sided(a, b, center, r, step) / r
    b_to_a = _cone_one_sided(b, a, center, r, step) / r
    total = a_to_b + b_to_a
    return (total, a_to_b, b_to_a) if one_sided else total
