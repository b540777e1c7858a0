import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cone_lab.core.harmonic import (
    ConeGraph,
    FourierSineSeries,
    HarmonicExtension,
    SectorProfile,
    area_saving,
    boundary_function,
    build_replacement,
    cone_energy,
    contraction_factor,
    curve_length,
    dirichlet_energy,
    harmonic_energy,
    random_sector_profile,
    sine_expand,
)
from cone_lab.errors import PreconditionError, ProfileError

T_MAX = 10.0 * math.pi / 11.0


def _single_mode(T, k, m=1):
    beta = np.zeros((k, m))
    beta[k - 1, 0] = 1.0
    return FourierSineSeries(T, beta)


def _sine_profile(T, amplitude, samples=4096, eta=0.05):
    t = np.linspace(0.0, T, samples + 1)
    v = amplitude * np.sin(math.pi * t / T)
    v[0] = 0.0
    v[-1] = 0.0
    return SectorProfile(T, v, eta)


def test_sine_expand_recovers_one_mode():
    T, samples = 2.0, 512
    t = np.linspace(0.0, T, samples + 1)
    f = np.sin(math.pi * t / T)
    f[-1] = 0.0
    series = sine_expand(f, T, modes=16)
    assert series.coefficients[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(series.coefficients[1:])) < 1e-12
    assert series.reconstruction_error < 1e-12
    assert series.frequencies[0] == pytest.approx(math.pi / T)


def test_sine_expand_limits():
    f = np.zeros(33)
    with pytest.raises(PreconditionError, match="Nyquist"):
        sine_expand(f, 1.0, modes=32)
    f[-1] = 1e-3
    with pytest.raises(ProfileError, match="f\\(0\\) = f\\(T\\) = 0"):
        sine_expand(f, 1.0, modes=8)


def test_contraction_factor_at_largest_aperture():
    assert abs(contraction_factor(T_MAX) - 220.0 / 221.0) < 1e-9
    assert contraction_factor(math.pi) == pytest.approx(1.0)


@pytest.mark.parametrize("T", [1.0, 1.4, 1.7, 2.3, T_MAX])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_single_mode_energies_match_quadrature(T, k):
    series = _single_mode(T, k)
    lam = math.pi * k / T
    cone, _ = dirichlet_energy(ConeGraph(series))
    harmonic, _ = dirichlet_energy(HarmonicExtension(series))
    assert cone == pytest.approx(cone_energy(series), rel=1e-10)
    assert harmonic == pytest.approx(harmonic_energy(series), rel=1e-7)
    assert harmonic / cone == pytest.approx(2.0 * lam / (1.0 + lam * lam), rel=1e-7)


@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=8),
       st.floats(min_value=0.3, max_value=T_MAX))
@settings(max_examples=200, deadline=None)
def test_harmonic_extension_saves_energy(raw, T):
    """Property: the harmonic extension has at most contraction_factor(T) times the cone energy."""
    series = FourierSineSeries(T, np.array(raw)[:, None])
    bound = contraction_factor(T) * cone_energy(series)
    assert harmonic_energy(series) <= bound * (1.0 + 1e-12) + 1e-300


def test_profile_validation():
    t = np.linspace(0.0, 1.0, 65)
    with pytest.raises(ProfileError, match="aperture"):
        SectorProfile(0.05, np.zeros(65), 0.05)
    with pytest.raises(ProfileError, match="aperture"):
        SectorProfile(3.0, np.zeros(65), 0.05)
    bad_end = 1e-3 * t
    with pytest.raises(ProfileError, match="vanish"):
        SectorProfile(1.0, bad_end, 0.05)
    steep = 0.1 * np.sin(math.pi * t)
    steep[-1] = 0.0
    with pytest.raises(ProfileError, match="Lipschitz"):
        SectorProfile(1.0, steep, 0.05)
    with pytest.raises(ProfileError, match="shape"):
        SectorProfile(1.0, np.zeros(2), 0.05)


def test_random_profile_is_admissible(rng):
    profile = random_sector_profile(rng, 2.0, 0.05, codim=3, samples=1024)
    assert profile.codim == 3
    assert profile.samples == 1024
    assert profile.lipschitz == pytest.approx(0.99 * 0.05, rel=1e-12)
    assert not profile.v.flags.writeable


def test_energies_of_a_profile_match_its_series():
    profile = _sine_profile(2.0, 0.02)
    series = sine_expand(boundary_function(profile), profile.T, 256)
    assert cone_energy(profile, modes=256) == cone_energy(series)
    assert harmonic_energy(profile, modes=256) == harmonic_energy(series)
    assert harmonic_energy(profile) / cone_energy(profile) == pytest.approx(contraction_factor(2.0), rel=1e-3)


def test_flat_profile_curve_length():
    assert curve_length(_sine_profile(2.0, 0.0)) == pytest.approx(2.0, abs=1e-14)
    assert curve_length(_sine_profile(2.0, 0.02)) > 2.0


def test_replacement_audits():
    graph = build_replacement(_sine_profile(2.0, 0.02))
    assert graph.seam_error <= 1e-9
    assert graph.boundary_error < 1e-12
    assert graph.annulus_energy <= graph.annulus_bound
    assert graph.lipschitz_estimate < 0.1
    assert graph.collar_energy < 1e-6


@pytest.mark.parametrize("kappa", [0.0, 0.02])
def test_kappa_out_of_range(kappa):
    with pytest.raises(PreconditionError, match="kappa"):
        build_replacement(_sine_profile(2.0, 0.02), kappa=kappa)


def test_eta_above_admissible():
    with pytest.raises(PreconditionError, match="admissible"):
        area_saving(_sine_profile(2.0, 0.02, eta=0.1))


def test_flat_profile_saves_nothing():
    report = area_saving(_sine_profile(2.0, 0.0))
    assert report.saving == pytest.approx(0.0, abs=1e-14)
    assert report.cone_energy == 0.0
    assert report.ratio == 0.0


def test_single_mode_profile_saves_area():
    report = area_saving(_sine_profile(2.0, 0.02))
    assert report.contract_holds, report.summary()
    assert report.saving > 0.0
    assert report.ratio == pytest.approx(contraction_factor(2.0), rel=1e-3)
    assert report.lipschitz_estimate < 0.1


def _battery(rng, count, samples):
    for _ in range(count):
        T = rng.uniform(1.0, T_MAX)
        codim = int(rng.integers(1, 3))
        profile = random_sector_profile(rng, T, 0.05, codim=codim, samples=samples)
        report = area_saving(profile, modes=256)
        assert report.contract_holds, report.summary()
        assert report.ratio <= contraction_factor(T) + 1e-12


def test_random_profiles_save_area(rng):
    _battery(rng, 3, 1024)


@pytest.mark.slow
def test_random_profiles_save_area_full_battery():
    _battery(np.random.default_rng(7), 100, 4096)
