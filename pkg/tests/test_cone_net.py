import logging
import math

import numpy as np
import pytest

from cone_lab.core.cone_net import (
    MAX_ARC,
    Arc,
    ConeNet,
    VertexKind,
    VertexMap,
    _make_vertex,
    apply_vertex_map,
    build_cube,
    build_plane,
    build_T,
    build_union,
    build_Y,
    embed_orthogonal,
    length_gradient,
    net_components,
    net_density,
    net_length,
    normalized_hausdorff_distance,
    standard_decompose,
    validate_minimal_looking,
)
from cone_lab.errors import (
    DimensionMismatchError,
    EtaViolationError,
    NetStructureError,
    PreconditionError,
)


def _long_arc_net():
    # a great circle stored as one arc of length 5.9 and one short arc
    far = np.array([math.cos(5.9), math.sin(5.9), 0.0])
    through = np.array([math.cos(2.95), math.sin(2.95), 0.0])
    vertices = (_make_vertex("p0", [1.0, 0.0, 0.0], "V1"), _make_vertex("p1", far, "V1"))
    arcs = (Arc("long", ("p0", "p1"), through), Arc("short", ("p1", "p0")))
    return ConeNet(3, vertices, arcs)


def test_t_density_matches_tetrahedral_value(t_net):
    density = net_density(t_net)
    assert abs(density - 3.0 * math.acos(-1.0 / 3.0)) < 1e-9
    assert 1.824 <= density / math.pi <= 1.825


@pytest.mark.parametrize("n", [3, 4, 6])
def test_plane_and_y_densities(n):
    assert net_density(build_plane(n)) == pytest.approx(math.pi, abs=1e-12)
    assert net_density(build_Y(n)) == pytest.approx(1.5 * math.pi, abs=1e-12)


def test_cube_has_twelve_arcs():
    cube = build_cube(3)
    assert len(cube.vertices) == 8
    assert len(cube.arcs) == 12
    for arc in cube.arcs:
        assert cube.arc_length(arc.id) == pytest.approx(math.acos(1.0 / 3.0), abs=1e-12)


@pytest.mark.parametrize("builder", [build_plane, build_Y, build_T, build_cube])
def test_canonical_nets_are_minimal_looking(builder):
    report = validate_minimal_looking(builder(3))
    assert report.passed, report.violations
    assert report.max_angle_deviation < 1e-9
    assert not report.ball_condition


def test_missing_arc_is_a_degree_violation(t_net):
    broken = ConeNet(3, t_net.vertices, tuple(a for a in t_net.arcs if a.id != "t2-t3"))
    report = validate_minimal_looking(broken)
    assert not report.passed
    assert sorted(v.subject for v in report.by_check("degree")) == ["t2", "t3"]


def test_bent_circle_is_an_angle_violation():
    vertices = [_make_vertex("p0", [1.0, 0.0, 0.0], "V1")]
    for k, z in ((1, 0.1), (2, 0.0)):
        angle = 2.0 * math.pi * k / 3.0
        x = np.array([math.cos(angle), math.sin(angle), z])
        vertices.append(_make_vertex(f"p{k}", x / np.linalg.norm(x), "V1"))
    arcs = tuple(Arc(f"a{k}", (f"p{k}", f"p{(k + 1) % 3}")) for k in range(3))
    report = validate_minimal_looking(ConeNet(3, tuple(vertices), arcs))
    assert {v.subject for v in report.by_check("angle")} == {"p0", "p1", "p2"}


def test_crossing_circles_are_a_separation_violation():
    beta = 0.005
    a = build_plane(3)
    b = build_plane(3, frame=([0.0, math.cos(beta), math.sin(beta)], [-1.0, 0.0, 0.0]))
    vertices = tuple(v for v in a.vertices) + tuple(
        _make_vertex("q" + v.id, v.coords, v.kind.value) for v in b.vertices)
    arcs = a.arcs + tuple(Arc("q" + arc.id, ("q" + arc.ends[0], "q" + arc.ends[1])) for arc in b.arcs)
    report = validate_minimal_looking(ConeNet(3, vertices, arcs))
    assert report.by_check("separation")
    assert report.min_separation < 1e-3


def test_construction_errors():
    e = np.eye(3)
    with pytest.raises(NetStructureError, match="duplicate vertex"):
        ConeNet(3, (_make_vertex("a", e[0], "V1"), _make_vertex("a", e[1], "V1")), ())
    with pytest.raises(NetStructureError, match="unknown vertex"):
        ConeNet(3, (_make_vertex("a", e[0], "V1"),), (Arc("x", ("a", "b")),))
    with pytest.raises(NetStructureError, match="antipodal"):
        ConeNet(3, (_make_vertex("a", e[0], "V1"), _make_vertex("b", -e[0], "V1")), (Arc("x", ("a", "b")),))
    with pytest.raises(DimensionMismatchError):
        build_T(2)


def test_standard_decomposition_cuts_long_arc():
    net = _long_arc_net()
    assert net.arc_length("long") == pytest.approx(5.9, abs=1e-12)
    decomposed = standard_decompose(net)
    ids = {arc.id for arc in decomposed.arcs}
    assert ids == {"long/0", "long/1", "long/2", "short"}
    assert decomposed.vertex("long.1").kind is VertexKind.V1
    for arc in decomposed.arcs:
        assert decomposed.arc_length(arc.id) <= MAX_ARC
    assert net_length(decomposed) == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert validate_minimal_looking(decomposed).passed


def test_standard_decomposition_keeps_short_arcs(t_net):
    assert standard_decompose(t_net).arcs == t_net.arcs


def test_eta0_violation():
    with pytest.raises(EtaViolationError, match="eta0 violated"):
        standard_decompose(build_T(3, eta0=0.2))


def test_union_of_orthogonal_parts():
    parts = embed_orthogonal([build_plane(3), build_Y(3)])
    assert all(part.dimension == 5 for part in parts)
    union = build_union(parts)
    assert net_density(union) == pytest.approx(math.pi + 1.5 * math.pi, abs=1e-12)
    assert validate_minimal_looking(union).passed
    components = net_components(union)
    assert [len(c.vertices) for c in components] == [3, 5]
    assert net_density(components[1]) == pytest.approx(1.5 * math.pi, abs=1e-12)


def test_union_rejects_overlapping_parts():
    with pytest.raises(NetStructureError, match="orthogonal"):
        build_union([build_plane(3), build_Y(3)])


@pytest.mark.parametrize("builder", [build_plane, build_Y, build_T])
def test_minimal_cones_are_critical(builder):
    _, norm = length_gradient(builder(3))
    assert norm < 1e-8


def test_bent_circle_is_not_critical():
    net = _long_arc_net()
    _, norm = length_gradient(standard_decompose(net))
    assert norm < 1e-8
    moved = apply_vertex_map(standard_decompose(net), VertexMap.from_displacements(
        standard_decompose(net), {"long.1": [0.0, 0.0, 0.01]}, 0.05))
    _, norm = length_gradient(moved)
    assert norm > 1e-3


def test_identity_map_keeps_lengths(t_net):
    moved = apply_vertex_map(t_net, VertexMap.identity(t_net, 1e-3))
    assert net_length(moved) == pytest.approx(net_length(t_net), abs=1e-14)


def test_vertex_map_limits(t_net):
    far = VertexMap.from_displacements(t_net, {"t0": [0.1, -0.1, 0.0]}, 0.05)
    with pytest.raises(EtaViolationError, match="eta1"):
        apply_vertex_map(t_net, far)
    with pytest.raises(PreconditionError, match="does not cover"):
        apply_vertex_map(t_net, VertexMap({}, 0.05))
    with pytest.raises(PreconditionError, match="standard_decompose"):
        apply_vertex_map(_long_arc_net(), VertexMap.identity(_long_arc_net(), 1e-3))


def test_large_eta1_warns(t_net, caplog):
    with caplog.at_level(logging.WARNING, logger="cone_lab.core.cone_net"):
        apply_vertex_map(t_net, VertexMap.identity(t_net, 0.05))
    assert "not below eta0/10" in caplog.text


def test_hausdorff_distance_of_identical_nets(t_net):
    assert normalized_hausdorff_distance(t_net, build_T(3)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("beta", [0.01, 0.1, 0.5])
def test_hausdorff_distance_of_tilted_planes(beta):
    flat = build_plane(3)
    tilted = build_plane(3, frame=([1.0, 0.0, 0.0], [0.0, math.cos(beta), math.sin(beta)]))
    total, a_to_b, b_to_a = normalized_hausdorff_distance(flat, tilted, one_sided=True)
    assert a_to_b == pytest.approx(math.sin(beta), abs=1e-6)
    assert b_to_a == pytest.approx(math.sin(beta), abs=1e-6)
    assert total == pytest.approx(2.0 * math.sin(beta), abs=2e-6)


def test_hausdorff_distance_scales_with_ball():
    flat = build_plane(3)
    tilted = build_plane(3, frame=([1.0, 0.0, 0.0], [0.0, math.cos(0.2), math.sin(0.2)]))
    inner = normalized_hausdorff_distance(flat, tilted, r=0.25)
    outer = normalized_hausdorff_distance(flat, tilted, r=1.0)
    assert inner == pytest.approx(outer, abs=1e-6)
