"""
Density-excess decay calculus.

Gauge functions h (power and logarithmic), the Dini integral h1, the
near-monotonicity check of tabulated density profiles, and explicit decay
bounds obtained by integrating the differential inequalities
r f'(r) >= a f(r) - 24 h(2r) and r f'(r) >= 2 alpha f(r)_+^N - C h(2r).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from ..errors import GaugeError, PreconditionError, ProfileError
from ..utils.tolerances import get_tolerance

logger = logging.getLogger(__name__)

DECAY_CONSTANT = 24.0
ENVELOPE_POINTS = 1000
ENVELOPE_MARGIN = 1.01

GAUGE_KINDS = {
    "power": "h(r) = C0 r^b",
    "log": "h(r) = C [log(A / r)]^(-b)",
}


@dataclass(frozen=True)
class GaugeSpec:
    """
    Gauge function of an almost-minimal set.

    Attributes:
        kind (str): "power" or "log"
        coefficient (float): C0 for power, C for log; nonnegative
        exponent (float): b; in (0, 1] for power, positive for log
        scale (float): A, log kind only
    """

    kind: str
    coefficient: float
    exponent: float
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in GAUGE_KINDS:
            raise GaugeError(f"unknown gauge kind {self.kind!r}, expected one of {sorted(GAUGE_KINDS)}")
        if self.coefficient < 0:
            raise GaugeError(f"gauge coefficient must be nonnegative, got {self.coefficient!r}")
        if self.kind == "power" and not 0 < self.exponent <= 1:
            raise GaugeError(f"power gauge exponent must lie in (0, 1], got {self.exponent!r}")
        if self.kind == "log" and not (self.exponent > 0 and self.scale > 0):
            raise GaugeError("log gauge needs positive exponent and scale")

    @classmethod
    def power(cls, coefficient, exponent):
        return cls("power", coefficient, exponent)

    @classmethod
    def log(cls, coefficient, exponent, scale):
        return cls("log", coefficient, exponent, scale)

    @classmethod
    def zero(cls):
        return cls("power", 0.0, 1.0)

    @property
    def is_zero(self):
        return self.coefficient == 0

    def _check_range(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise GaugeError("gauge evaluated at a nonpositive radius")
        if self.kind == "log" and not self.is_zero and np.any(r >= self.scale):
            raise GaugeError(f"log gauge is defined for r < A = {self.scale:g}")
        return r

    def h(self, r):
        """Gauge value, scalar or array."""
        r = self._check_range(r)
        if self.is_zero:
            return np.zeros_like(r) if r.ndim else 0.0
        if self.kind == "power":
            value = self.coefficient * r ** self.exponent
        else:
            value = self.coefficient * np.log(self.scale / r) ** (-self.exponent)
        return value if r.ndim else float(value)

    def h1(self, r):
        """
        Dini integral h1(r) = integral_0^r h(2t) dt / t.

        Closed form for power gauges; quadrature for log gauges, which
        require b > 1.

        Raises:
            GaugeError: Log gauge with b <= 1, or r >= A/2
        """
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise GaugeError("h1 evaluated at a nonpositive radius")
        if self.is_zero:
            return np.zeros_like(r) if r.ndim else 0.0
        if self.kind == "power":
            value = self.coefficient * 2.0 ** self.exponent * r ** self.exponent / self.exponent
            return value if r.ndim else float(value)
        if self.exponent <= 1:
            raise GaugeError(f"Dini condition fails for a log gauge with b = {self.exponent:g} <= 1")
        self._check_range(2.0 * r)
        values = np.array([self._log_h1(float(x)) for x in np.atleast_1d(r)])
        return values.reshape(r.shape) if r.ndim else float(values[0])

    def _log_h1(self, r):
        # u = log(A / 2t) turns the integral into C * int_L^inf u^(-b) du
        lower = math.log(self.scale / (2.0 * r))
        value, error = quad(lambda u: u ** (-self.exponent), lower, math.inf,
                            epsabs=0.0, epsrel=get_tolerance("LOG_QUAD_TOL"), limit=200)
        if error > 1e3 * get_tolerance("LOG_QUAD_TOL") * abs(value):
            raise GaugeError(f"h1 quadrature did not converge at r = {r:g} (error {error:.3g})")
        return self.coefficient * value

    def describe(self):
        fields = {"kind": self.kind, "coefficient": self.coefficient, "exponent": self.exponent}
        if self.kind == "log":
            fields["scale"] = self.scale
        return fields


def alpha_to_a(alpha):
    """Decay exponent a = 4 alpha / (1 - 2 alpha) for alpha in (0, 1/2)."""
    if not 0 < alpha < 0.5:
        raise PreconditionError(f"alpha must lie in (0, 1/2), got {alpha!r}")
    return 4.0 * alpha / (1.0 - 2.0 * alpha)


def _check_interval(a, x, y):
    if not a > 0:
        raise PreconditionError(f"decay exponent a must be positive, got {a!r}")
    if not 0 < x < y:
        raise PreconditionError(f"need 0 < x < y, got x = {x!r}, y = {y!r}")


def decay_integral(a, gauge, x, y, method="auto"):
    """
    Integral of r^(-a-1) h(2r) over (x, y).

    Args:
        a (float): Decay exponent
        gauge (GaugeSpec): Gauge
        x, y (float): 0 < x < y
        method (str): "auto" (closed form for power gauges) or "quad"

    Returns:
        float: Integral value
    """
    _check_interval(a, x, y)
    if gauge.is_zero:
        return 0.0
    gauge.h(2.0 * y)
    if gauge.kind == "power" and method == "auto":
        c, b = gauge.coefficient * 2.0 ** gauge.exponent, gauge.exponent
        if math.isclose(a, b):
            return c * math.log(y / x)
        return c * (y ** (b - a) - x ** (b - a)) / (b - a)
    # s = log r keeps the integrand smooth over many decades
    value, error = quad(lambda s: math.exp(-a * s) * gauge.h(2.0 * math.exp(s)), math.log(x), math.log(y),
                        epsabs=0.0, epsrel=get_tolerance("LOG_QUAD_TOL"), limit=200)
    if error > 1e3 * get_tolerance("LOG_QUAD_TOL") * abs(value):
        logger.warning("decay integral quadrature error %.3g on value %.6g", error, value)
    return value


def decay_bound(f_y, a, gauge, x, y):
    """
    Bound on the density excess at x from its value at y.

    f(x) <= (x/y)^a f(y) + 24 x^a integral_x^y r^(-a-1) h(2r) dr

    Raises:
        PreconditionError: a <= 0 or not 0 < x < y
    """
    _check_interval(a, x, y)
    return (x / y) ** a * f_y + DECAY_CONSTANT * x ** a * decay_integral(a, gauge, x, y)


def split_decay_bound(f_y, a, gauge, x, y, z):
    """
    Decay bound with the gauge frozen at 2z on (x, z) and at 2y on (z, y).

    f(x) <= (x/y)^a f(y) + (24/a) h(2z) + (24/a) (x/z)^a h(2y) for any z in [x, y].
    """
    _check_interval(a, x, y)
    if not x <= z <= y:
        raise PreconditionError(f"split point z = {z!r} outside [x, y]")
    scale = DECAY_CONSTANT / a
    return (x / y) ** a * f_y + scale * gauge.h(2.0 * z) + scale * (x / z) ** a * gauge.h(2.0 * y)


@dataclass(frozen=True)
class LogDecayReport:
    """
    Decay bound under h(r) = C [log(A/r)]^(-b).

    value = power_term + near_constant * [log(A/2x)]^(-b) + far_constant * (2x/A)^(a/2)
    """

    value: float
    power_term: float
    near_constant: float
    near_term: float
    far_constant: float
    far_term: float

    def summary(self):
        return {
            "value": self.value,
            "power_term": self.power_term,
            "near_constant": self.near_constant,
            "near_term": self.near_term,
            "far_constant": self.far_constant,
            "far_term": self.far_term,
        }


def log_gauge_decay(f_y, a, A, b, x, y, C=1.0):
    """
    Explicit decay bound for a logarithmic gauge.

    The integral is split where log(A/2r) = log(A/2x)/2. Near x the gauge is
    at most 2^b C [log(A/2x)]^(-b); beyond sqrt(Ax/2) it is at most
    C [log(A/2y)]^(-b). Both pieces are bounded by x^(-a)/a and
    (Ax/2)^(-a/2)/a.

    Args:
        f_y (float): Density excess at y
        a (float): Decay exponent
        A, b (float): Gauge scale and exponent
        x, y (float): 0 < x < y < A/3
        C (float): Gauge coefficient

    Returns:
        LogDecayReport
    """
    _check_interval(a, x, y)
    if not y < A / 3.0:
        raise PreconditionError(f"log gauge decay needs y < A/3, got y = {y!r}, A = {A!r}")
    if C < 0 or b <= 0:
        raise GaugeError("log gauge needs C >= 0 and b > 0")
    power = (x / y) ** a * f_y
    near_constant = DECAY_CONSTANT * C * 2.0 ** b / a
    far_constant = DECAY_CONSTANT * C * math.log(A / (2.0 * y)) ** (-b) / a
    near = math.log(A / (2.0 * x)) ** (-b)
    far = (2.0 * x / A) ** (a / 2.0)
    value = power + near_constant * near + far_constant * far
    return LogDecayReport(value, power, near_constant, near, far_constant, far)


def envelope(C1, N, y, r):
    """phi(r) = C1 [log(2y/r)]^(-1/(N-1)) for 0 < r <= y."""
    r = np.asarray(r, dtype=float)
    return C1 * np.log(2.0 * y / r) ** (-1.0 / (N - 1.0))


@dataclass(frozen=True)
class EnvelopeReport:
    """
    Weak decay envelope and its certification against the worst-case ODE.

    Attributes:
        value (float): phi(x)
        C1 (float): Envelope constant
        constraints (dict): The three lower bounds C1 must exceed
        solution_at_x (float): Integrated worst-case f(x)
        margin (float): min over the check grid of phi - f
        dominated (bool): margin >= 0
    """

    value: float
    C1: float
    constraints: dict
    solution_at_x: float
    margin: float
    dominated: bool
    radii: np.ndarray
    solution: np.ndarray

    def summary(self):
        return {
            "value": self.value,
            "C1": self.C1,
            "constraints": dict(self.constraints),
            "solution_at_x": self.solution_at_x,
            "margin": self.margin,
            "dominated": self.dominated,
        }


def weak_decay_envelope(f_y, alpha, N, y, x, C_h):
    """
    Envelope C1 [log(2y/x)]^(-1/(N-1)) for r f' >= 2 alpha f_+^N - C h(2r).

    C1 exceeds f(y) (log 2)^(1/(N-1)), 2 (N-1) C_h and
    (3 / (4 alpha (N-1)))^(1/(N-1)), by the factor ENVELOPE_MARGIN. The gauge
    is taken at its largest admissible size
    h(2r) = [log(2y/r)]^(-N/(N-1)), and the equality case of the
    inequality is integrated from y down to x with RK45.

    Returns:
        EnvelopeReport

    Raises:
        PreconditionError: N <= 1, alpha outside (0, 1/2), C_h < 0 or not 0 < x < y
    """
    if not N > 1:
        raise PreconditionError(f"N must exceed 1, got {N!r}")
    if not 0 < alpha < 0.5:
        raise PreconditionError(f"alpha must lie in (0, 1/2), got {alpha!r}")
    if C_h < 0:
        raise PreconditionError(f"gauge constant must be nonnegative, got {C_h!r}")
    if not 0 < x < y:
        raise PreconditionError(f"need 0 < x < y, got x = {x!r}, y = {y!r}")

    k = 1.0 / (N - 1.0)
    constraints = {
        "boundary": max(f_y, 0.0) * math.log(2.0) ** k,
        "gauge": 2.0 * (N - 1.0) * C_h,
        "contradiction": (3.0 / (4.0 * alpha * (N - 1.0))) ** k,
    }
    C1 = ENVELOPE_MARGIN * max(constraints.values())

    def rhs(s, f):
        r = math.exp(s)
        forcing = C_h * math.log(2.0 * y / r) ** (-N * k)
        return [2.0 * alpha * max(f[0], 0.0) ** N - forcing]

    s_grid = np.linspace(math.log(y), math.log(x), ENVELOPE_POINTS)
    solved = solve_ivp(rhs, (s_grid[0], s_grid[-1]), [f_y], method="RK45", t_eval=s_grid,
                       rtol=get_tolerance("ODE_RTOL"), atol=get_tolerance("ODE_ATOL"))
    if not solved.success:
        raise PreconditionError(f"envelope ODE integration failed: {solved.message}")
    radii = np.exp(solved.t)
    solution = solved.y[0]
    phi = envelope(C1, N, y, radii)
    margin = float(np.min(phi - solution))
    value = float(envelope(C1, N, y, x))
    logger.debug("weak envelope C1=%.6g phi(x)=%.6g f(x)=%.6g", C1, value, solution[-1])
    return EnvelopeReport(value, C1, constraints, float(solution[-1]), margin, margin >= 0.0, radii, solution)


@dataclass(frozen=True)
class DensityProfile:
    """
    Tabulated density ratio theta(r) with its limit density d0.

    Raises:
        ProfileError: r not positive and increasing, theta negative, or
            r^2 theta(r) decreasing beyond MONOTONE_TOL
    """

    r: np.ndarray
    theta: np.ndarray
    d0: float

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        theta = np.array(self.theta, dtype=float)
        if r.ndim != 1 or r.shape != theta.shape or r.size < 2:
            raise ProfileError("density profile needs matching 1-d arrays of at least two samples")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ProfileError("radii must be positive and strictly increasing")
        if np.any(theta < 0):
            raise ProfileError("density ratio must be nonnegative")
        v = r ** 2 * theta
        drops = np.diff(v) < -get_tolerance("MONOTONE_TOL") * np.maximum(1.0, np.abs(v[:-1]))
        if np.any(drops):
            i = int(np.argmax(drops))
            raise ProfileError(f"r^2 theta(r) decreases between r = {r[i]:.6g} and r = {r[i + 1]:.6g}")
        r.flags.writeable = False
        theta.flags.writeable = False
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)

    @property
    def excess(self):
        """f(r) = theta(r) - d0."""
        return self.theta - self.d0

    @property
    def ball_measure(self):
        """v(r) = r^2 theta(r)."""
        return self.r ** 2 * self.theta


@dataclass(frozen=True)
class MonotonicityReport:
    """
    Near-monotonicity of theta(r) e^(lambda h1(r)) and the excess bounds.

    first_violation is the index i where the weighted density drops from
    sample i to i + 1, or None. upper_ok and lower_ok are None when no
    constant C was supplied.
    """

    passed: bool
    monotone: bool
    first_violation: object
    violation_radius: object
    worst_drop: float
    upper_ok: object
    lower_ok: object
    lam: float
    C: object

    def summary(self):
        return {
            "pass": self.passed,
            "monotone": self.monotone,
            "first_violation": self.first_violation,
            "violation_radius": self.violation_radius,
            "worst_drop": self.worst_drop,
            "upper_ok": self.upper_ok,
            "lower_ok": self.lower_ok,
            "lambda": self.lam,
            "C": self.C,
        }


def check_near_monotonicity(profile, gauge, lam, C=None):
    """
    Check theta(r) e^(lambda h1(r)) nondecreasing across samples.

    With a constant C also checks f(r) <= f(s) + C h1(s) for r < s and
    f(s) >= -C h1(s) at every sample.

    Args:
        profile (DensityProfile): Tabulated profile
        gauge (GaugeSpec): Gauge with finite h1
        lam (float): lambda
        C (float): Constant of the excess bounds, optional

    Returns:
        MonotonicityReport
    """
    tol = get_tolerance("MONOTONE_TOL")
    h1 = np.asarray(gauge.h1(profile.r), dtype=float)
    weighted = profile.theta * np.exp(lam * h1)
    drops = weighted[:-1] - weighted[1:]
    bad = drops > tol * np.maximum(1.0, np.abs(weighted[:-1]))
    monotone = not np.any(bad)
    first = None if monotone else int(np.argmax(bad))
    radius = None if first is None else float(profile.r[first])
    worst = float(max(np.max(drops), 0.0))
    if first is not None:
        logger.debug("weighted density drops by %.3g after r = %.6g", drops[first], radius)

    upper_ok = lower_ok = None
    if C is not None:
        f = profile.excess
        earlier = np.maximum.accumulate(f)[:-1]
        upper_ok = bool(np.all(earlier <= f[1:] + C * h1[1:] + tol))
        lower_ok = bool(np.all(f >= -C * h1 - tol))
    passed = monotone and upper_ok is not False and lower_ok is not False
    return MonotonicityReport(passed, monotone, first, radius, worst, upper_ok, lower_ok, lam, C)


def synthesize_profile(theta, d0=None, r_min=1e-3, r_max=0.5, samples=200, spacing="log"):
    """
    Tabulate a closed-form density ratio.

    Args:
        theta (callable): theta(r) on arrays
        d0 (float): Limit density, default theta(0)
        r_min, r_max (float): Radius range
        samples (int): Number of radii
        spacing (str): "log" or "linear"

    Returns:
        DensityProfile

    Raises:
        ProfileError: The model makes r^2 theta(r) decrease
    """
    if not 0 < r_min < r_max:
        raise ProfileError(f"need 0 < r_min < r_max, got {r_min!r}, {r_max!r}")
    if spacing == "log":
        r = np.geomspace(r_min, r_max, samples)
    elif spacing == "linear":
        r = np.linspace(r_min, r_max, samples)
    else:
        raise ProfileError(f"unknown spacing {spacing!r}")
    values = np.broadcast_to(np.asarray(theta(r), dtype=float), r.shape)
    if d0 is None:
        d0 = float(np.asarray(theta(np.zeros(1)), dtype=float).reshape(-1)[0])
    return DensityProfile(r, values, d0)
