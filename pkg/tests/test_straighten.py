import math

import numpy as np
import pytest

from cone_lab.core.straighten import (
    _cell_terms,
    bad_set,
    energy_diagnostics,
    parameterize,
    random_admissible_curve,
    straighten,
    to_sector_profile,
)
from cone_lab.errors import CurveHypothesisError, PreconditionError

PLANE = np.eye(3)[:2]
TAU1 = 5e-3
# 32 * 14 from the |v'| threshold and 4 * 30 * eta^2 from f, with room for f slightly below 0
C_HAT_BOUND = 450.0


def _geodesic(length, points=501, sign=1.0):
    s = np.linspace(0.0, length, points)
    return np.column_stack([np.cos(s), sign * np.sin(s), np.zeros_like(s)])


def _check_straightened(result):
    assert result.lipschitz_margin >= 0.0, result.summary()
    assert result.theta_increasing
    assert result.added_measure <= result.replaced_measure + 1e-12
    assert result.bad_measure <= result.replaced_measure + 1e-12
    assert result.length_out <= result.curve.length + 1e-12
    for a, b in result.intervals:
        assert 0 <= a < b <= result.bad_cells.size


def _bad_measure_bound(curve, eta):
    # weak type (1, 1) of the maximal function, constant 2, for |v'|^2 at eta^2/16 and f+ at 1/2
    dv, f = _cell_terms(curve)
    h = curve.step
    return 32.0 * np.sum(dv ** 2) * h / eta ** 2 + 4.0 * np.sum(np.maximum(f, 0.0)) * h


def test_geodesic_has_empty_bad_set():
    curve = parameterize(_geodesic(1.0), PLANE, TAU1)
    assert curve.length == pytest.approx(1.0, abs=1e-12)
    assert curve.delta_length == pytest.approx(0.0, abs=1e-12)
    assert not bad_set(curve, 0.1).any()
    result = straighten(curve, 0.1)
    assert result.intervals == ()
    assert result.bad_measure == 0.0
    assert np.array_equal(result.points, curve.points)


def test_geodesic_energies_vanish():
    report = energy_diagnostics(parameterize(_geodesic(1.0), PLANE, TAU1))
    assert report.v_energy < 1e-20
    assert abs(report.f_integral) < 1e-9
    assert report.f_nonnegative


def test_bumpy_curve_energy_margins(rng):
    polyline, plane = random_admissible_curve(rng)
    curve = parameterize(polyline, plane, TAU1)
    report = energy_diagnostics(curve)
    assert report.delta_length > 0.0
    assert report.margin_v >= 0.0
    assert report.margin_f >= 0.0
    assert report.f_min > -1e-6


def test_bumpy_curve_is_straightened(rng):
    polyline, plane = random_admissible_curve(rng)
    curve = parameterize(polyline, plane, TAU1)
    result = straighten(curve, 0.1)
    _check_straightened(result)
    assert result.bad_cells.size == curve.samples
    assert result.c_hat is None or result.c_hat >= 0.0
    assert set(result.summary()) >= {"intervals", "c_hat", "lipschitz_margin"}


def test_straightened_curve_becomes_a_profile(rng):
    polyline, plane = random_admissible_curve(rng)
    result = straighten(parameterize(polyline, plane, TAU1), 0.1)
    profile = to_sector_profile(result, samples=1024)
    assert profile.T == pytest.approx(1.0, abs=1e-9)
    assert profile.lipschitz <= 0.1 * (1.0 + 1e-12)
    assert profile.v[0, 0] == 0.0 and profile.v[-1, 0] == 0.0


def test_clockwise_curve_is_reversed():
    curve = parameterize(_geodesic(1.0, sign=-1.0), PLANE, TAU1)
    assert curve.reversed
    assert curve.theta[-1] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(curve.theta) > 0.0)


@pytest.mark.parametrize("polyline, tau1, message", [
    (_geodesic(0.05), TAU1, "below 9 eta0"),
    (_geodesic(2.9), TAU1, "exceeds 10 pi / 11"),
    (1.01 * _geodesic(1.0), TAU1, "not on the unit sphere"),
])
def test_hypothesis_failures(polyline, tau1, message):
    with pytest.raises(CurveHypothesisError, match=message):
        parameterize(polyline, PLANE, tau1)


def test_endpoint_off_the_plane():
    s = np.linspace(0.0, 1.0, 101)
    polyline = np.column_stack([np.cos(s), np.zeros_like(s), np.sin(s)])
    with pytest.raises(CurveHypothesisError, match="away from the plane P"):
        parameterize(polyline, PLANE, TAU1)


def test_length_excess_above_tau1(rng):
    polyline, plane = random_admissible_curve(rng)
    with pytest.raises(CurveHypothesisError, match="plus tau1"):
        parameterize(polyline, plane, 1e-6)


def test_height_above_tau1(rng):
    polyline, plane = random_admissible_curve(rng)
    with pytest.raises(CurveHypothesisError, match="strays"):
        parameterize(polyline, plane, 2e-4)


@pytest.mark.parametrize("eta", [0.0, 0.2])
def test_eta_out_of_range(eta):
    curve = parameterize(_geodesic(1.0), PLANE, TAU1)
    with pytest.raises(PreconditionError, match="outside"):
        straighten(curve, eta)


def test_higher_codimension(rng):
    polyline, plane = random_admissible_curve(rng, n=5, length=1.5)
    curve = parameterize(polyline, plane, TAU1)
    assert curve.v.shape == (curve.samples + 1, 3)
    _check_straightened(straighten(curve, 0.1))


@pytest.mark.slow
def test_random_curves_battery():
    rng = np.random.default_rng(11)
    c_hats = []
    for _ in range(100):
        n = int(rng.integers(3, 6))
        length = rng.uniform(0.5, 10.0 * math.pi / 11.0 - 0.1)
        polyline, plane = random_admissible_curve(rng, n=n, length=length)
        curve = parameterize(polyline, plane, TAU1)
        report = energy_diagnostics(curve)
        assert report.margin_v >= 0.0 and report.margin_f >= 0.0
        result = straighten(curve, 0.1)
        _check_straightened(result)
        assert result.bad_measure <= _bad_measure_bound(curve, 0.1) * (1.0 + 1e-9)
        c_hats.append(result.c_hat)
    assert max(c_hats[:50]) <= C_HAT_BOUND
    assert max(c_hats[50:]) <= C_HAT_BOUND


@pytest.mark.parametrize("seed", range(5))
def test_bad_set_shrinks_as_eta_grows(seed):
    polyline, plane = random_admissible_curve(np.random.default_rng(seed))
    curve = parameterize(polyline, plane, TAU1)
    masks = [bad_set(curve, eta) for eta in (0.01, 0.02, 0.05, 0.1)]
    for tighter, looser in zip(masks, masks[1:]):
        assert not np.any(looser & ~tighter)


@pytest.mark.parametrize("eta", [0.02, 0.05, 0.1])
def test_bad_set_measure_bound(rng, eta):
    for _ in range(4):
        polyline, plane = random_admissible_curve(rng)
        curve = parameterize(polyline, plane, TAU1)
        measure = np.count_nonzero(bad_set(curve, eta)) * curve.step
        assert measure <= _bad_measure_bound(curve, eta) * (1.0 + 1e-9)
        assert measure * eta ** 2 / curve.delta_length <= C_HAT_BOUND
