"""
Cone net files.

Canonical versioned JSON for ConeNet and a Wavefront OBJ export of the cone
over a net, triangulated as fans from the origin.
"""

import logging
import math

import numpy as np

from ..core.cone_net import Arc, ConeNet, _make_vertex
from ..core.sphere import arc_point
from ..errors import DimensionMismatchError, NetStructureError
from .formats import format_float, read_json, write_json

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
OBJ_STEP = math.pi / 64.0


def net_to_dict(net):
    """
    Canonical JSON document of a net.

    Coordinates are written as Python floats, which read back bit-exact.

    Returns:
        dict: {"version", "dimension", "eta0", "vertices", "arcs"}
    """
    arcs = []
    for arc in net.arcs:
        entry = {"id": arc.id, "ends": list(arc.ends)}
        if arc.through is not None:
            entry["through"] = [float(c) for c in arc.through]
        arcs.append(entry)
    return {
        "version": FORMAT_VERSION,
        "dimension": net.dimension,
        "eta0": net.eta0,
        "vertices": [{"id": v.id, "kind": v.kind.value, "coords": [float(c) for c in v.coords]}
                     for v in net.vertices],
        "arcs": arcs,
    }


def net_from_dict(data):
    """
    Parse a canonical JSON document.

    Raises:
        NetStructureError: Missing fields or unsupported version
    """
    if not isinstance(data, dict):
        raise NetStructureError("cone document must be a JSON object")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise NetStructureError(f"unsupported cone format version {version!r}")
    try:
        vertices = tuple(_make_vertex(str(v["id"]), v["coords"], v["kind"]) for v in data["vertices"])
        arcs = []
        for a in data["arcs"]:
            ends = tuple(str(e) for e in a["ends"])
            if len(ends) != 2:
                raise NetStructureError(f"arc {a.get('id')!r} must have two ends")
            through = None if a.get("through") is None else np.array(a["through"], dtype=float)
            arcs.append(Arc(str(a["id"]), ends, through))
        return ConeNet(int(data["dimension"]), vertices, tuple(arcs), float(data.get("eta0", 0.01)))
    except (KeyError, TypeError) as exc:
        raise NetStructureError(f"malformed cone document: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, NetStructureError):
            raise
        raise NetStructureError(f"malformed cone document: {exc}") from None


def save_net(net, path=None):
    """Write a net as canonical JSON; stdout when path is None."""
    write_json(net_to_dict(net), path)


def load_net(path):
    """Read a net from a canonical JSON file."""
    return net_from_dict(read_json(path))


def _span_coordinates(net):
    points = net.coords_matrix()
    if net.dimension == 3:
        return np.eye(3)
    _, sigma, vt = np.linalg.svd(points, full_matrices=False)
    rank = int(np.sum(sigma > 1e-10 * sigma[0]))
    if rank > 3:
        raise DimensionMismatchError(f"OBJ export needs a net spanning at most 3 dimensions, got {rank}")
    basis = vt[:3]
    if basis.shape[0] < 3:
        basis = np.vstack([basis, np.zeros((3 - basis.shape[0], net.dimension))])
    return basis


def write_obj(net, path, radius=1.0, step=OBJ_STEP):
    """
    Export the cone over a net, truncated at a radius, as triangle fans.

    Each arc is split into pieces no longer than step; every piece and the
    origin form one triangle. Nets in R^n with n > 3 are written in an
    orthonormal basis of their span.

    Args:
        net (ConeNet): Net
        path (str): Destination .obj file
        radius (float): Truncation radius
        step (float): Largest angular piece
    """
    basis = _span_coordinates(net)
    lines = [f"# cone over {len(net.arcs)} arcs, radius {format_float(radius)}", "v 0 0 0"]
    faces = []
    count = 1
    for arc in net.arcs:
        start, tangent, length = net.arc_geometry(arc.id)
        pieces = max(1, math.ceil(length / step))
        points = arc_point(start, tangent, np.linspace(0.0, length, pieces + 1))
        first = count + 1
        for p in points:
            x, y, z = radius * (basis @ p)
            lines.append(f"v {format_float(x)} {format_float(y)} {format_float(z)}")
            count += 1
        faces.extend(f"f 1 {first + k} {first + k + 1}" for k in range(pieces))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines + faces) + "\n")
    logger.debug("wrote %d triangles to %s", len(faces), path)
