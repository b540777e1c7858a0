"""
Sampling certificate of the full-length property.

Draws vertex perturbations phi with |phi(x) - x| <= eta1, keeps those that
lengthen the net, and estimates the constant C of
length_delta <= C * alpha_+(phi)^2 as the largest observed ratio. The
estimate passes when it is finite and stable under doubling the budget.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import CertificateError, EtaViolationError, NetValidationError
from ..utils.tolerances import get_tolerance
from .battery import BatteryRunner
from .cone_net import length_gradient, net_components, standard_decompose, validate_minimal_looking
from .perturbation import NetLayout, batched_deviation

logger = logging.getLogger(__name__)

BLOCK_SIZE = 256
GAUSSIAN_SCALE_DECADES = 3.0


@dataclass(frozen=True)
class SampleRecord:
    sample_id: int
    alpha_plus: float
    length_delta: float
    ratio: float


@dataclass(frozen=True)
class CertificateReport:
    """
    Outcome of full_length_certificate for one connected net.

    Attributes:
        c_hat (float): Largest ratio over all 2B draws
        c_hat_half (float): Largest ratio over the first B draws
        stable (bool): The two estimates agree within CERTIFICATE_STABILITY
        gradient_norm (float): Norm of the length gradient at the net
        critical (bool): gradient_norm below CRITICAL_GRADIENT
        samples (tuple): SampleRecord of every kept draw
    """

    component: int
    budget: int
    seed: int
    eta1: float
    c_hat: float
    c_hat_half: float
    stable: bool
    passed: bool
    gradient_norm: float
    critical: bool
    drawn: int
    samples: tuple

    def summary(self):
        """JSON-ready summary of the certificate."""
        return {
            "component": self.component,
            "C_hat": self.c_hat,
            "C_hat_half": self.c_hat_half,
            "budget": self.budget,
            "seed": self.seed,
            "eta1": self.eta1,
            "kept": len(self.samples),
            "gradient_norm": self.gradient_norm,
            "critical": self.critical,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ComponentwiseReport:
    """Certificates of every connected component; passes iff all pass."""

    components: tuple
    c_hat: float
    passed: bool

    def summary(self):
        return {
            "C_hat": self.c_hat,
            "pass": self.passed,
            "components": [report.summary() for report in self.components],
        }


class PerturbationSampler:
    """
    Seeded stream of vertex perturbations of a net.

    Draw k uses the generator of block k // 256, seeded by
    SeedSequence([seed, component, block]), so any block can be produced
    independently. Even draws move every vertex by a Gaussian tangent
    displacement at a random global scale; odd draws move one vertex
    tangentially (inside the span of its arcs), normally (off that span) or
    along one of its arcs.
    """

    def __init__(self, net, eta1, seed, component=0):
        self.layout = NetLayout(net)
        self.eta1 = eta1
        self.seed = seed
        self.component = component
        self.max_angle = 2.0 * math.asin(min(eta1 / 2.0, 1.0))
        self.tangents = [np.array([w for _, w in net.incident(vertex_id)]) for vertex_id in self.layout.ids]

    def block(self, index, count=BLOCK_SIZE):
        """
        Positions of draws index*256 .. index*256 + count - 1.

        Returns:
            numpy.ndarray: Shape (count, V, n)
        """
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, self.component, index]))
        base = self.layout.base
        positions = np.repeat(base[None], count, axis=0)
        for k in range(count):
            if (index * BLOCK_SIZE + k) % 2 == 0:
                positions[k] = self._gaussian(rng, base)
            else:
                j, moved = self._structured(rng, base)
                positions[k, j] = moved
        return positions

    def _gaussian(self, rng, base):
        xi = rng.standard_normal(base.shape)
        tau = xi - np.sum(xi * base, axis=1, keepdims=True) * base
        tau *= self.eta1 * 10.0 ** rng.uniform(-GAUSSIAN_SCALE_DECADES, 0.0)
        norm = np.linalg.norm(tau, axis=1, keepdims=True)
        theta = np.minimum(np.arctan(norm), self.max_angle)
        direction = tau / np.where(norm > 0.0, norm, 1.0)
        return np.cos(theta) * base + np.sin(theta) * direction

    def _structured(self, rng, base):
        j = int(rng.integers(base.shape[0]))
        mode = int(rng.integers(3))
        u = 10.0 ** rng.uniform(-GAUSSIAN_SCALE_DECADES, 0.0)
        x = base[j]
        tangents = self.tangents[j]
        if mode == 2:
            direction = tangents[int(rng.integers(len(tangents)))] * rng.choice([-1.0, 1.0])
        else:
            direction = None
            if mode == 1:
                # component of a random vector off span(x, tangents)
                q, _ = np.linalg.qr(np.vstack([x, tangents]).T)
                xi = rng.standard_normal(x.size)
                normal = xi - q @ (q.T @ xi)
                if np.linalg.norm(normal) > 1e-9:
                    direction = normal
            if direction is None:
                direction = rng.standard_normal(len(tangents)) @ tangents
            direction = direction - np.dot(direction, x) * x
            direction = direction / np.linalg.norm(direction)
        theta = 2.0 * math.asin(self.eta1 * u / 2.0)
        return j, math.cos(theta) * x + math.sin(theta) * direction


def _score_block(sampler, index, count):
    positions = sampler.block(index, count)
    deviations, delta = batched_deviation(positions, sampler.layout)
    return deviations.max(axis=1), delta


def _sup_ratio(alpha, delta, keep):
    if not np.any(keep):
        return 0.0
    return float(np.max(delta[keep] / alpha[keep] ** 2))


def full_length_certificate(net, eta1, budget, seed=0, component=0, threads=None, on_progress=None):
    """
    Estimate the full-length constant of a minimal-looking net by sampling.

    Draws 2 * budget perturbations; the constant from the first budget draws
    and from all draws must agree within CERTIFICATE_STABILITY (or both be
    numerically zero) for the certificate to pass. Draws with
    alpha_+ < ALPHA_DISCARD or no length increase are not used.

    Args:
        net (ConeNet): Net to certify
        eta1 (float): Displacement bound of the sampled maps
        budget (int): B, the base number of draws
        seed (int): Seed of the draw stream
        component (int): Component index mixed into the seed
        threads (int): Worker count for block evaluation
        on_progress (callable): Percentage callback

    Returns:
        CertificateReport

    Raises:
        NetValidationError: The net is not minimal-looking
        EtaViolationError: eta1 not positive
        CertificateError: A scoring block failed or the run was aborted
    """
    if not eta1 > 0:
        raise EtaViolationError(f"eta1 must be positive, got {eta1!r}")
    if budget < 1:
        raise EtaViolationError(f"budget must be at least 1, got {budget!r}")
    report = validate_minimal_looking(net)
    if not report.passed:
        first = report.violations[0]
        raise NetValidationError(f"net is not minimal-looking: {first.check} at {first.subject}: {first.message}",
                                 report)
    if eta1 >= net.eta0 / 10.0:
        logger.warning("eta1 = %g is not below eta0/10 = %g", eta1, net.eta0 / 10.0)
    net = standard_decompose(net)
    _, gradient_norm = length_gradient(net)
    critical = gradient_norm < get_tolerance("CRITICAL_GRADIENT")

    sampler = PerturbationSampler(net, eta1, seed, component)
    total = 2 * budget
    blocks = math.ceil(total / BLOCK_SIZE)
    jobs = []
    for index in range(blocks):
        count = min(BLOCK_SIZE, total - index * BLOCK_SIZE)
        jobs.append((index, lambda index=index, count=count: _score_block(sampler, index, count)))
    outcome = BatteryRunner(jobs, threads=threads, on_progress=on_progress).run()
    if outcome.failures:
        failed = ", ".join(f"{i} ({message})" for i, message in sorted(outcome.failures.items()))
        raise CertificateError(f"component {component}: scoring failed for blocks {failed}")
    if outcome.aborted:
        raise CertificateError(f"component {component}: aborted after {len(outcome.results)} of {blocks} blocks")
    alpha = np.concatenate([outcome.results[i][0] for i in range(blocks)])
    delta = np.concatenate([outcome.results[i][1] for i in range(blocks)])

    keep = (delta > 0.0) & (alpha >= get_tolerance("ALPHA_DISCARD"))
    first_half = np.arange(total) < budget
    c_half = _sup_ratio(alpha, delta, keep & first_half)
    c_full = _sup_ratio(alpha, delta, keep)
    zero = get_tolerance("LENGTH_TOL")
    if c_half <= zero and c_full <= zero:
        stable = True
    else:
        stable = abs(c_full - c_half) <= get_tolerance("CERTIFICATE_STABILITY") * c_full
    passed = bool(np.isfinite(c_full) and stable)

    ids = np.flatnonzero(keep)
    samples = tuple(SampleRecord(int(i), float(alpha[i]), float(delta[i]), float(delta[i] / alpha[i] ** 2))
                    for i in ids)
    logger.info("component %d: C_hat(B)=%.6g C_hat(2B)=%.6g kept %d/%d -> %s",
                component, c_half, c_full, ids.size, total, "PASS" if passed else "FAIL")
    return CertificateReport(component, budget, seed, eta1, c_full, c_half, stable, passed,
                             gradient_norm, critical, total, samples)


def componentwise_certificate(net, eta1, budget, seed=0, threads=None):
    """
    Run full_length_certificate on every connected component.

    Returns:
        ComponentwiseReport: passes iff every component passes; c_hat is the
            largest component constant
    """
    reports = tuple(full_length_certificate(part, eta1, budget, seed=seed, component=i, threads=threads)
                    for i, part in enumerate(net_components(net)))
    c_hat = max(report.c_hat for report in reports)
    return ComponentwiseReport(reports, c_hat, all(report.passed for report in reports))
