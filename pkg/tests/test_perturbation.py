import math

import numpy as np
import pytest
from scipy.optimize import brentq

from cone_lab.core.cone_net import Arc, ConeNet, VertexMap, _make_vertex, build_T
from cone_lab.core.perturbation import (
    BumpSpec,
    NetLayout,
    alpha_plus,
    deviation_report,
    face_area_change,
    max_push_coefficient,
    push_deformation_area_gain,
    tangent_sum,
    vertex_deviation,
)
from cone_lab.errors import NetStructureError, PreconditionError
from cone_lab.utils.quadrature import integrate_2d

TILT_ETA1 = 0.2


def _tilt_pole(net, delta):
    # rotate the pole "n" toward the first arm m0 by delta
    entries = dict(VertexMap.identity(net, TILT_ETA1).entries)
    axis = net.vertex("n").coords
    arm = net.vertex("m0").coords
    entries["n"] = math.cos(delta) * axis + math.sin(delta) * arm
    return VertexMap(entries, TILT_ETA1)


def _tilt_for(net, target):
    return brentq(lambda d: np.linalg.norm(tangent_sum(net, _tilt_pole(net, d), "n")) - target, 1e-3, 0.19,
                  xtol=1e-14)


def test_identity_map_has_no_deviation(t_net):
    report = deviation_report(t_net, VertexMap.identity(t_net, 1e-3))
    assert report.alpha_plus < 1e-12
    assert abs(report.length_delta) < 1e-12
    assert report.ratio is None


def test_single_vertex_move_deviates(t_net):
    phi = VertexMap.from_displacements(t_net, {"t0": [0.01, -0.01, 0.0]}, 0.05)
    report = deviation_report(t_net, phi)
    assert report.per_vertex["t0"] > 1e-3
    assert report.alpha_plus == max(report.per_vertex.values())
    assert alpha_plus(t_net, phi) == report.alpha_plus
    assert vertex_deviation(t_net, phi, "t0") == report.per_vertex["t0"]
    assert np.linalg.norm(tangent_sum(t_net, phi, "t0")) == pytest.approx(report.per_vertex["t0"], rel=1e-12)


def test_v1_deviation_is_bend_angle(y_net):
    # a V1 point stays on a great circle through both poles, so moving it bends nothing
    phi = VertexMap.from_displacements(y_net, {"m1": [0.01, 0.0, 0.0]}, 0.05)
    assert vertex_deviation(y_net, phi, "m1") == pytest.approx(0.0, abs=1e-12)


def test_layout_rejects_wrong_degrees(t_net):
    broken = ConeNet(3, t_net.vertices, tuple(a for a in t_net.arcs if a.id != "t0-t1"))
    with pytest.raises(NetStructureError, match="degree"):
        NetLayout(broken)


def test_bump_closed_forms_match_quadrature():
    bump = BumpSpec()
    assert bump.mass_z == pytest.approx(9.0 / 40.0, abs=1e-15)
    assert bump.plateau == pytest.approx((0.275, 0.475))
    mass = integrate_2d(lambda z, rho: bump.profile_z(z) / bump.height,
                        bump.z_breaks, [0.0, bump.height], 8)
    assert mass == pytest.approx(bump.mass_z, rel=1e-12)

    def grad_sq(z, rho):
        gz, grho = bump.gradient(z, rho)
        return gz ** 2 + grho ** 2

    energy = integrate_2d(grad_sq, bump.z_breaks, [0.0, bump.height], 8)
    assert energy == pytest.approx(bump.energy, rel=1e-10)


def test_bump_shape_limits():
    with pytest.raises(PreconditionError, match="ramps"):
        BumpSpec(ramp=0.2)
    with pytest.raises(PreconditionError, match="gradient"):
        BumpSpec(ramp=1e-4)


def test_face_area_change_zero_push():
    assert face_area_change(BumpSpec(), np.zeros(3), np.array([0.0, 1.0, 0.0])) == (0.0, 0.0)


def test_face_area_change_first_order():
    bump = BumpSpec()
    w = np.array([0.0, 1.0, 0.0])
    beta = 1e-7
    value, error = face_area_change(bump, beta * w, w)
    # integral of beta * dpsi/drho is -beta * a
    assert value == pytest.approx(-beta * bump.mass_z, rel=1e-6)
    assert error < 1e-12


def test_tilted_y_pole_deviates_at_second_order(y_net):
    small = np.linalg.norm(tangent_sum(y_net, _tilt_pole(y_net, 0.01), "n"))
    large = np.linalg.norm(tangent_sum(y_net, _tilt_pole(y_net, 0.02), "n"))
    assert large / small == pytest.approx(4.0, rel=0.02)


def test_push_gain_on_y_tilt_family(y_net):
    reports = []
    for target in (0.01, 0.005, 0.0025):
        phi = _tilt_pole(y_net, _tilt_for(y_net, target))
        c_max = max_push_coefficient(y_net, phi, "n")
        reports.append((phi, c_max))
    c = min(c_max for _, c_max in reports) / 2.0
    ratios = []
    for phi, _ in reports:
        report = push_deformation_area_gain(y_net, phi, "n", c)
        assert report.contract_holds, report
        assert report.gain >= (c / 10.0) * report.s_norm ** 2 - report.error
        ratios.append(report.gain / report.s_norm ** 2)
    assert max(ratios) <= 1.1 * min(ratios)


@pytest.mark.parametrize("delta", [0.004, 0.008, 0.016])
def test_push_gain_on_tetrahedral_vertex(t_net, delta):
    direction = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    phi = VertexMap.from_displacements(t_net, {"t0": delta * direction}, 0.05)
    c = max_push_coefficient(t_net, phi, "t0") / 2.0
    report = push_deformation_area_gain(t_net, phi, "t0", c)
    assert report.contract_holds
    assert report.gain > 0.1 * c * report.s_norm ** 2
    assert report.gain <= report.a * c * report.s_norm ** 2 * 1.001


def test_push_coefficient_is_bounded(y_net):
    phi = _tilt_pole(y_net, _tilt_for(y_net, 0.01))
    with pytest.raises(PreconditionError, match="outside"):
        push_deformation_area_gain(y_net, phi, "n", 0.05)


def test_push_needs_deviation(t_net):
    with pytest.raises(PreconditionError, match="no deviation"):
        push_deformation_area_gain(t_net, VertexMap.identity(t_net, 1e-3), "t0", 1e-4)


def test_push_refuses_crowded_vertex():
    # a fourth arc passing right by the pushed vertex
    base = build_T(3)
    near = base.vertex("t0").coords + np.array([0.0, 0.0, 1e-4])
    far = -base.vertex("t0").coords + np.array([0.5, 0.0, 0.0])
    vertices = base.vertices + (_make_vertex("x", near / np.linalg.norm(near), "V1"),
                                _make_vertex("y", far / np.linalg.norm(far), "V1"))
    net = ConeNet(3, vertices, base.arcs + (Arc("x-y", ("x", "y")),))
    phi = VertexMap.from_displacements(net, {"t0": [0.001, -0.001, 0.0]}, 0.05)
    with pytest.raises(PreconditionError, match="inside the bump support"):
        push_deformation_area_gain(net, phi, "t0", 1e-5)
