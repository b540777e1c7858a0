"""
Harmonic replacement of a cone graph over a sector.

A sector profile v on [0, T] describes a curve on the sphere; its cone is
the graph of the degree-one homogeneous function F(rho, t) = rho f(t),
f = v / (1 - |v|^2)^(1/2). Replacing F inside the ball by a rescaled
harmonic extension G1 of f (interpolated in a thin annulus and cut off near
the origin) lowers the area by an amount controlled from below by the
energy of v'.

Surfaces are evaluated in polar form: each zone returns the radial
derivative a = dG/drho and the angular derivative b = rho^-1 dG/dt, and the
graph area element is J with J^2 = (1 + |a|^2)(1 + |b|^2) - <a, b>^2.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import fft, integrate

from ..errors import PreconditionError, ProfileError
from ..utils.quadrature import composite_rule, geometric_breaks
from ..utils.tolerances import get_tolerance

logger = logging.getLogger(__name__)

R_INTERP = 1.0 - 1e-6
OUTER_RADIUS = 0.9
KAPPA_MAX = 1e-2
ETA_MAX = 0.05
DEFAULT_SAMPLES = 4096
DEFAULT_MODES = 512
SAVING_FACTOR = 1e-4


@dataclass(frozen=True)
class SectorProfile:
    """
    Sampled map v: [0, T] -> R^m on the uniform grid t_j = j T / M.

    Attributes:
        T (float): Aperture, 8 eta0 <= T <= 10 pi / 11
        v (numpy.ndarray): Samples, shape (M + 1, m), v[0] = v[M] = 0
        eta (float): Lipschitz bound, checked on the grid
        eta0 (float): Structural constant bounding T from below
    """

    T: float
    v: np.ndarray
    eta: float
    eta0: float = 0.01

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 3:
            raise ProfileError(f"profile samples must have shape (M+1, m) with M >= 2, got {v.shape}")
        if not 8.0 * self.eta0 <= self.T <= 10.0 * math.pi / 11.0:
            raise ProfileError(f"aperture T = {self.T!r} outside [8 eta0, 10 pi/11]")
        if np.any(v[0] != 0.0) or np.any(v[-1] != 0.0):
            raise ProfileError("profile must vanish exactly at both ends")
        lipschitz = self._lipschitz(v)
        if lipschitz > self.eta * (1.0 + 1e-12):
            raise ProfileError(f"discrete Lipschitz constant {lipschitz:.6g} exceeds eta = {self.eta:.6g}")
        if np.max(np.linalg.norm(v, axis=1)) >= 1.0:
            raise ProfileError("profile leaves the unit ball: |v| >= 1")
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    def _lipschitz(self, v):
        return float(np.max(np.linalg.norm(np.diff(v, axis=0), axis=1)) / self.step)

    @property
    def samples(self):
        """M, the number of grid intervals."""
        return self.v.shape[0] - 1

    @property
    def step(self):
        return self.T / (self.v.shape[0] - 1)

    @property
    def codim(self):
        return self.v.shape[1]

    @property
    def grid(self):
        return np.linspace(0.0, self.T, self.samples + 1)

    @property
    def lipschitz(self):
        return self._lipschitz(self.v)

    def derivative_energy(self):
        """Discrete integral of |v'|^2."""
        return float(np.sum(np.diff(self.v, axis=0) ** 2) / self.step)


def random_sector_profile(rng, T, eta, codim=1, modes=4, samples=DEFAULT_SAMPLES, eta0=0.01):
    """
    Seeded smooth profile with a few sine modes and Lipschitz constant 0.99 eta.

    Coefficients are N(0, 1) / k^2 per mode and codomain direction.

    Returns:
        SectorProfile
    """
    t = np.linspace(0.0, T, samples + 1)
    k = np.arange(1, modes + 1)
    coefficients = rng.standard_normal((modes, codim)) / (k ** 2)[:, None]
    v = np.sin(np.outer(t, k * math.pi / T)) @ coefficients
    v[0] = 0.0
    v[-1] = 0.0
    lipschitz = np.max(np.linalg.norm(np.diff(v, axis=0), axis=1)) / (T / samples)
    v *= 0.99 * eta / lipschitz
    return SectorProfile(T, v, eta, eta0)


def boundary_function(profile):
    """
    f = v / (1 - |v|^2)^(1/2) on the profile grid.

    Returns:
        numpy.ndarray: Shape (M + 1, m), zero at both ends
    """
    w = np.sqrt(1.0 - np.sum(profile.v ** 2, axis=1, keepdims=True))
    return profile.v / w


@dataclass(frozen=True)
class FourierSineSeries:
    """
    f(t) = sum_k beta_k sin(pi k t / T), beta_k in R^m.

    Attributes:
        T (float): Aperture
        coefficients (numpy.ndarray): beta, shape (K, m)
        reconstruction_error (float): Max error at the grid points
        parseval_residual (float): |(pi^2 / 2T) sum k^2 |beta_k|^2 - discrete energy of f'|
        derivative_energy (float): Discrete integral of |f'|^2
    """

    T: float
    coefficients: np.ndarray
    reconstruction_error: float = 0.0
    parseval_residual: float = 0.0
    derivative_energy: float = 0.0

    @property
    def frequencies(self):
        """lambda_k = pi k / T."""
        return math.pi * np.arange(1, self.coefficients.shape[0] + 1) / self.T

    def trimmed(self):
        """
        Coefficients without trailing modes below MODE_TRIM * max |beta|.

        Returns:
            tuple: (frequencies, coefficients) of the kept modes
        """
        norms = np.linalg.norm(self.coefficients, axis=1)
        if not np.any(norms > 0.0):
            return self.frequencies[:0], self.coefficients[:0]
        kept = np.flatnonzero(norms >= get_tolerance("MODE_TRIM") * norms.max())
        last = int(kept[-1]) + 1
        return self.frequencies[:last], self.coefficients[:last]

    def __call__(self, t):
        lam, beta = self.trimmed()
        return np.sin(np.outer(np.atleast_1d(t), lam)) @ beta

    def series_derivative_energy(self):
        """(pi^2 / 2T) sum k^2 |beta_k|^2, the integral of |f'|^2 of the series."""
        return float(self.T / 2.0 * np.sum(self.frequencies ** 2 * np.sum(self.coefficients ** 2, axis=1)))


def sine_expand(f, T, modes=DEFAULT_MODES):
    """
    Sine coefficients of grid samples by the type-1 discrete sine transform.

    beta_k = (2/T) * integral of f(t) sin(pi k t / T), by the trapezoid rule
    on the grid.

    Args:
        f (array-like): Samples on t_j = j T / M, shape (M + 1,) or (M + 1, m)
        T (float): Aperture
        modes (int): K <= M - 1

    Returns:
        FourierSineSeries

    Raises:
        PreconditionError: K above the grid Nyquist limit
        ProfileError: f does not vanish at the ends
    """
    f = np.asarray(f, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    m_intervals = f.shape[0] - 1
    if not 1 <= modes <= m_intervals - 1:
        raise PreconditionError(f"mode count {modes} exceeds the Nyquist limit {m_intervals - 1} of the grid")
    if np.max(np.abs(f[[0, -1]])) > get_tolerance("SEAM_TOL"):
        raise ProfileError("sine expansion needs f(0) = f(T) = 0")
    beta = fft.dst(f[1:-1], type=1, axis=0)[:modes] / m_intervals

    t = np.linspace(0.0, T, m_intervals + 1)
    lam = math.pi * np.arange(1, modes + 1) / T
    reconstruction = np.sin(np.outer(t, lam)) @ beta
    reconstruction_error = float(np.max(np.abs(reconstruction - f)))
    h = T / m_intervals
    discrete = float(np.sum(np.diff(f, axis=0) ** 2) / h)
    series = FourierSineSeries(T, beta, reconstruction_error, 0.0, discrete)
    residual = abs(series.series_derivative_energy() - discrete)
    if residual > get_tolerance("PARSEVAL_TARGET"):
        logger.warning("Parseval residual %.3g above target %.1g (K=%d, M=%d)",
                       residual, get_tolerance("PARSEVAL_TARGET"), modes, m_intervals)
    return FourierSineSeries(T, beta, reconstruction_error, residual, discrete)


def _series_of(source, modes):
    if isinstance(source, SectorProfile):
        return sine_expand(boundary_function(source), source.T, modes)
    return source


def cone_energy(source, modes=DEFAULT_MODES):
    """
    Integral of |grad F|^2 over the unit sector, F(rho, t) = rho f(t).

    Equal to (T/4) sum (1 + lambda_k^2) |beta_k|^2.

    Args:
        source (SectorProfile or FourierSineSeries): Boundary profile, expanded
            with `modes` sine modes, or its sine series
        modes (int): Sine modes used when `source` is a profile

    Returns:
        float
    """
    series = _series_of(source, modes)
    lam = series.frequencies
    return float(series.T / 4.0 * np.sum((1.0 + lam ** 2) * np.sum(series.coefficients ** 2, axis=1)))


def harmonic_energy(source, modes=DEFAULT_MODES):
    """
    Integral of |grad G1|^2 over the unit sector for the harmonic extension
    G1(rho, t) = sum beta_k rho^lambda_k sin(lambda_k t).

    Equal to (pi/2) sum k |beta_k|^2.

    Accepts a SectorProfile or its FourierSineSeries, like cone_energy.
    """
    series = _series_of(source, modes)
    k = np.arange(1, series.coefficients.shape[0] + 1)
    return float(math.pi / 2.0 * np.sum(k * np.sum(series.coefficients ** 2, axis=1)))


def contraction_factor(T):
    """(2T/pi) / (1 + (T/pi)^2); 220/221 at T = 10 pi / 11."""
    q = T / math.pi
    return 2.0 * q / (1.0 + q * q)


class _Modes:
    # trig tables of the kept modes at a set of angles
    def __init__(self, series, t):
        self.lam, self.beta = series.trimmed()
        phase = np.outer(t, self.lam)
        self.sin = np.sin(phase)
        self.cos = np.cos(phase)

    def combine(self, radial, table):
        """sum_k radial[r, k] beta_k table[t, k] -> shape (R, Nt, m)."""
        return np.einsum("rk,tk,km->rtm", radial, table, self.beta, optimize=True)


class SectorSurface:
    """
    Graph over the sector {0 <= rho <= 1, 0 <= t <= T} given zone by zone.

    Subclasses define zones(): (rho_lo, rho_hi, gradient, panels) where
    gradient(rho, t) returns (a, b) of shape (len(rho), len(t), m), and
    value(rho, t) for pointwise checks.
    """

    def __init__(self, series):
        self.series = series
        self.T = series.T
        lam, _ = series.trimmed()
        self.effective_modes = lam.size
        self.codim = series.coefficients.shape[1]

    def zones(self):
        raise NotImplementedError

    def value(self, rho, t):
        raise NotImplementedError

    def angle_panels(self):
        return max(8, math.ceil(self.effective_modes / 2))

    def _zero(self, rho, t):
        shape = (np.size(rho), np.size(t), self.codim)
        return np.zeros(shape), np.zeros(shape)


class ConeGraph(SectorSurface):
    """F(rho, t) = rho f(t), f the sine series."""

    def zones(self):
        return [(0.0, 1.0, self._gradient, 1)]

    def _gradient(self, rho, t):
        modes = _Modes(self.series, t)
        ones = np.ones((np.size(rho), modes.lam.size))
        return modes.combine(ones, modes.sin), modes.combine(ones * modes.lam, modes.cos)

    def value(self, rho, t):
        return np.multiply.outer(np.atleast_1d(rho), self.series(t))


class HarmonicExtension(SectorSurface):
    """G1(rho, t) = sum beta_k rho^lambda_k sin(lambda_k t)."""

    def zones(self):
        return [(0.0, 1.0, self._gradient, 12)]

    def _gradient(self, rho, t):
        modes = _Modes(self.series, t)
        radial = modes.lam * np.power.outer(np.atleast_1d(rho), modes.lam - 1.0)
        return modes.combine(radial, modes.sin), modes.combine(radial, modes.cos)

    def value(self, rho, t):
        modes = _Modes(self.series, t)
        return modes.combine(np.power.outer(np.atleast_1d(rho), modes.lam), modes.sin)


class ReplacementGraph(SectorSurface):
    """
    Competitor G over the sector.

    Zones by radius rho, with sigma = rho / 0.9:
      outer   0.9 <= rho <= 1       G = F
      annulus 0.9 r <= rho <= 0.9   G = 0.9 [(1 - sigma) G1(r) + (sigma - r) f] / (1 - r)
      middle  3 kappa <= rho <= 0.9 r  G = 0.9 G1(sigma)
      collar  2 kappa <= rho <= 3 kappa  G = (rho - 2 kappa) / kappa * 0.9 G1(10 kappa / 3)
      core    rho <= 2 kappa        G = 0
    """

    def __init__(self, series, kappa, r_interp=R_INTERP):
        super().__init__(series)
        self.kappa = kappa
        self.r = r_interp
        self.seam_error = None
        self.boundary_error = None
        self.lipschitz_estimate = None
        self.annulus_energy = None
        self.annulus_bound = None
        self.collar_energy = None

    @property
    def interfaces(self):
        return (2.0 * self.kappa, 3.0 * self.kappa, OUTER_RADIUS * self.r, OUTER_RADIUS)

    def zones(self):
        k2, k3, inner, outer = self.interfaces
        return [
            (k2, k3, self._collar_gradient, 1),
            (k3, inner, self._middle_gradient, 8),
            (inner, outer, self._annulus_gradient, 1),
            (outer, 1.0, self._outer_gradient, 1),
        ]

    def _outer_gradient(self, rho, t):
        return ConeGraph(self.series)._gradient(rho, t)

    def _annulus_weights(self, sigma, lam):
        # (1 - r^lam)/(1 - r) and ((1 - sigma) r^lam + sigma - r)/(1 - r) without cancellation
        log_r = math.log1p(-(1.0 - self.r))
        gap = 1.0 - self.r
        radial = -np.expm1(lam * log_r) / gap
        sigma = np.atleast_1d(sigma)[:, None]
        angular = (-sigma * np.expm1(lam * log_r) + self.r * np.expm1((lam - 1.0) * log_r)) / gap
        return np.broadcast_to(radial, angular.shape), angular / sigma

    def _annulus_gradient(self, rho, t):
        modes = _Modes(self.series, t)
        radial, angular = self._annulus_weights(np.atleast_1d(rho) / OUTER_RADIUS, modes.lam)
        return modes.combine(radial, modes.sin), modes.combine(angular * modes.lam, modes.cos)

    def _middle_gradient(self, rho, t):
        modes = _Modes(self.series, t)
        sigma = np.atleast_1d(rho) / OUTER_RADIUS
        radial = modes.lam * np.power.outer(sigma, modes.lam - 1.0)
        return modes.combine(radial, modes.sin), modes.combine(radial, modes.cos)

    def _collar_gradient(self, rho, t):
        modes = _Modes(self.series, t)
        rho = np.atleast_1d(rho)
        power = (10.0 * self.kappa / 3.0) ** modes.lam
        scale = OUTER_RADIUS / self.kappa
        radial = np.ones((rho.size, 1)) * (scale * power)
        angular = ((rho - 2.0 * self.kappa) / rho)[:, None] * (scale * power * modes.lam)
        return modes.combine(radial, modes.sin), modes.combine(angular, modes.cos)

    def zone_value(self, zone, rho, t):
        """Value of a zone's formula at radii rho (may lie outside the zone)."""
        modes = _Modes(self.series, t)
        rho = np.atleast_1d(rho)
        sigma = rho / OUTER_RADIUS
        if zone == "outer":
            return ConeGraph(self.series).value(rho, t)
        if zone == "annulus":
            at_r = modes.combine(np.ones((1, modes.lam.size)) * self.r ** modes.lam, modes.sin)[0]
            at_1 = modes.combine(np.ones((1, modes.lam.size)), modes.sin)[0]
            lo = ((1.0 - sigma) / (1.0 - self.r))[:, None, None]
            hi = ((sigma - self.r) / (1.0 - self.r))[:, None, None]
            return OUTER_RADIUS * (lo * at_r + hi * at_1)
        if zone == "middle":
            return OUTER_RADIUS * modes.combine(np.power.outer(sigma, modes.lam), modes.sin)
        if zone == "collar":
            power = np.ones((rho.size, 1)) * (10.0 * self.kappa / 3.0) ** modes.lam
            factor = ((rho - 2.0 * self.kappa) / self.kappa)[:, None, None]
            return factor * OUTER_RADIUS * modes.combine(power, modes.sin)
        if zone == "core":
            return np.zeros((rho.size, np.size(t), self.codim))
        raise ValueError(f"unknown zone {zone!r}")

    def value(self, rho, t):
        rho = np.atleast_1d(rho)
        k2, k3, inner, outer = self.interfaces
        result = np.zeros((rho.size, np.size(t), self.codim))
        for name, lo, hi in (("collar", k2, k3), ("middle", k3, inner), ("annulus", inner, outer),
                             ("outer", outer, 1.0)):
            mask = (rho >= lo) & (rho <= hi)
            if np.any(mask):
                result[mask] = self.zone_value(name, rho[mask], t)
        return result


def _polar_integral(surface, integrand, rho_max, order):
    t_nodes, t_weights = composite_rule(np.linspace(0.0, surface.T, surface.angle_panels() + 1), order)
    total = 0.0
    for lo, hi, gradient, panels in surface.zones():
        hi = min(hi, rho_max)
        if hi <= lo:
            continue
        breaks = geometric_breaks(lo, hi, panels) if panels > 1 else np.array([lo, hi])
        rho_nodes, rho_weights = composite_rule(breaks, order)
        a, b = gradient(rho_nodes, t_nodes)
        total += float((rho_weights * rho_nodes) @ integrand(a, b) @ t_weights)
    return total


def _excess_integrand(a, b):
    aa = np.sum(a * a, axis=-1)
    bb = np.sum(b * b, axis=-1)
    ab = np.sum(a * b, axis=-1)
    u = aa + bb + aa * bb - ab * ab
    # J - 1 with J^2 = 1 + u
    return u / (1.0 + np.sqrt(1.0 + u))


def _energy_integrand(a, b):
    return np.sum(a * a, axis=-1) + np.sum(b * b, axis=-1)


@dataclass(frozen=True)
class AreaEstimate:
    """area = flat sector area + excess; error from doubling the order."""

    area: float
    excess: float
    error: float


def graph_area(surface, rho_max=1.0, order=8):
    """
    Area of the graph over the sector D_T cut at radius rho_max.

    Args:
        surface (SectorSurface): ConeGraph, HarmonicExtension or ReplacementGraph
        rho_max (float): Outer radius of the region
        order (int): Gauss-Legendre nodes per panel; the estimate uses 2*order

    Returns:
        AreaEstimate
    """
    coarse = _polar_integral(surface, _excess_integrand, rho_max, order)
    fine = _polar_integral(surface, _excess_integrand, rho_max, 2 * order)
    flat = surface.T * rho_max ** 2 / 2.0
    return AreaEstimate(flat + fine, fine, abs(fine - coarse))


def dirichlet_energy(surface, rho_max=1.0, order=8):
    """
    Integral of |grad G|^2 over the sector cut at rho_max.

    Returns:
        tuple: (energy, error estimate)
    """
    coarse = _polar_integral(surface, _energy_integrand, rho_max, order)
    fine = _polar_integral(surface, _energy_integrand, rho_max, 2 * order)
    return fine, abs(fine - coarse)


class _Restricted(SectorSurface):
    # a single zone of a replacement graph
    def __init__(self, parent, lo, hi, gradient):
        super().__init__(parent.series)
        self._zone = (lo, hi, gradient, 1)

    def zones(self):
        return [self._zone]


def _audit(graph, samples=257):
    t = np.linspace(0.0, graph.T, samples)
    k2, k3, inner, outer = graph.interfaces
    seams = (("core", "collar", k2), ("collar", "middle", k3), ("middle", "annulus", inner),
             ("annulus", "outer", outer))
    graph.seam_error = max(
        float(np.max(np.abs(graph.zone_value(left, [radius], t) - graph.zone_value(right, [radius], t))))
        for left, right, radius in seams)
    radii = np.linspace(0.0, 1.0, samples)
    edges = graph.value(radii, np.array([0.0, graph.T]))
    graph.boundary_error = float(np.max(np.abs(edges)))

    lipschitz = 0.0
    for lo, hi, gradient, _ in graph.zones():
        a, b = gradient(np.linspace(lo, hi, 33), t)
        lipschitz = max(lipschitz, float(np.sqrt(np.max(_energy_integrand(a, b)))))
    graph.lipschitz_estimate = lipschitz

    annulus = _Restricted(graph, inner, outer, graph._annulus_gradient)
    graph.annulus_energy = dirichlet_energy(annulus)[0] / OUTER_RADIUS ** 2
    graph.annulus_bound = 14.0 * (1.0 - graph.r) * graph.series.series_derivative_energy()
    collar = _Restricted(graph, k2, k3, graph._collar_gradient)
    graph.collar_energy = dirichlet_energy(collar)[0]


def build_replacement(profile, kappa=KAPPA_MAX, modes=DEFAULT_MODES, kappa_max=KAPPA_MAX):
    """
    Build the replacement graph G of a sector profile.

    Args:
        profile (SectorProfile): Boundary data
        kappa (float): Cutoff radius parameter, 0 < kappa <= kappa_max
        modes (int): Sine modes K
        kappa_max (float): Largest accepted kappa

    Returns:
        ReplacementGraph: with seam, boundary, Lipschitz and energy audits filled in

    Raises:
        PreconditionError: kappa out of range or overlapping zones
        ProfileError: G fails to be continuous across a zone seam
    """
    if not 0 < kappa <= kappa_max:
        raise PreconditionError(f"kappa = {kappa!r} outside (0, {kappa_max}]")
    if 3.0 * kappa >= OUTER_RADIUS * R_INTERP:
        raise PreconditionError(f"zones overlap: 3 kappa = {3 * kappa:.6g} >= 9/10")
    series = sine_expand(boundary_function(profile), profile.T, modes)
    graph = ReplacementGraph(series, kappa)
    _audit(graph)
    if graph.seam_error > get_tolerance("SEAM_TOL"):
        raise ProfileError(f"replacement is discontinuous across a seam: gap {graph.seam_error:.3g}")
    logger.debug("replacement: K_eff=%d lipschitz=%.4g collar energy=%.3g",
                 graph.effective_modes, graph.lipschitz_estimate, graph.collar_energy)
    return graph


def curve_length(profile):
    """
    Length of the spherical curve z(t) = (w cos t, w sin t, v(t)), w = (1 - |v|^2)^(1/2).

    |z'|^2 = w^2 + w'^2 + |v'|^2 integrated by Simpson's rule on the grid.
    """
    v = profile.v
    t = profile.grid
    dv = np.gradient(v, t, axis=0, edge_order=2)
    w = np.sqrt(1.0 - np.sum(v ** 2, axis=1))
    dw = -np.sum(v * dv, axis=1) / w
    speed = np.sqrt(w ** 2 + dw ** 2 + np.sum(dv ** 2, axis=1))
    return float(integrate.simpson(speed, x=t))


@dataclass(frozen=True)
class SavingReport:
    """
    Area saved by the replacement inside B(0, 9/10).

    contract_holds is saving >= lower_bound - error.
    """

    saving: float
    lower_bound: float
    error: float
    contract_holds: bool
    cone_energy: float
    harmonic_energy: float
    ratio: float
    parseval_residual: float
    lipschitz_estimate: float
    curve_excess: float
    derivative_energy: float

    def summary(self):
        return {
            "cone_energy": self.cone_energy,
            "harmonic_energy": self.harmonic_energy,
            "ratio": self.ratio,
            "saving": self.saving,
            "lower_bound": self.lower_bound,
            "parseval_residual": self.parseval_residual,
            "lipschitz_estimate": self.lipschitz_estimate,
        }


def area_saving(profile, kappa=KAPPA_MAX, modes=DEFAULT_MODES, eta_max=ETA_MAX, order=8):
    """
    Area of the cone graph minus area of the replacement over D_T ∩ B(0, 9/10).

    lower_bound = 1e-4 * max(integral |v'|^2, length(curve) - T).

    Returns:
        SavingReport

    Raises:
        PreconditionError: profile.eta above eta_max
    """
    if profile.eta > eta_max:
        raise PreconditionError(f"eta = {profile.eta!r} above the admissible {eta_max}")
    graph = build_replacement(profile, kappa, modes)
    series = graph.series
    cone = graph_area(ConeGraph(series), OUTER_RADIUS, order)
    replaced = graph_area(graph, OUTER_RADIUS, order)
    saving = cone.excess - replaced.excess
    error = cone.error + replaced.error

    derivative = profile.derivative_energy()
    excess = curve_length(profile) - profile.T
    lower = SAVING_FACTOR * max(derivative, excess)
    e_cone = cone_energy(series)
    e_harm = harmonic_energy(series)
    ratio = e_harm / e_cone if e_cone > 0 else 0.0
    holds = saving >= lower - error
    logger.info("area saving %.6g (lower bound %.3g, error %.2g)", saving, lower, error)
    return SavingReport(saving, lower, error, holds, e_cone, e_harm, ratio, series.parseval_residual,
                        graph.lipschitz_estimate, excess, derivative)
