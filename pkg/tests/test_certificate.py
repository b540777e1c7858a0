import math

import numpy as np
import pytest

from cone_lab.core import certificate
from cone_lab.core.certificate import (
    BLOCK_SIZE,
    PerturbationSampler,
    componentwise_certificate,
    full_length_certificate,
)
from cone_lab.core.cone_net import ConeNet, build_plane, build_T, build_union, build_Y, embed_orthogonal
from cone_lab.errors import CertificateError, EtaViolationError, NetValidationError, PreconditionError

ETA1 = 5e-4


def test_plane_is_never_lengthened(plane_net):
    report = full_length_certificate(plane_net, ETA1, 300, seed=1)
    assert report.passed
    assert report.c_hat == 0.0
    assert report.samples == ()
    assert report.critical
    assert report.drawn == 600


@pytest.mark.parametrize("builder", [build_Y, build_T])
def test_certificate_is_deterministic(builder):
    net = builder(3)
    first = full_length_certificate(net, ETA1, 400, seed=11, threads=1)
    second = full_length_certificate(net, ETA1, 400, seed=11, threads=4)
    assert first.c_hat == second.c_hat
    assert first.c_hat_half == second.c_hat_half
    assert first.samples == second.samples
    assert math.isfinite(first.c_hat)
    assert 0.0 <= first.c_hat_half <= first.c_hat
    assert all(record.alpha_plus >= 1e-6 and record.length_delta > 0 for record in first.samples)


def test_summary_fields(t_net):
    summary = full_length_certificate(t_net, ETA1, 100, seed=3).summary()
    assert summary["budget"] == 100
    assert summary["seed"] == 3
    assert summary["C_hat"] >= summary["C_hat_half"]
    assert isinstance(summary["pass"], bool)


def test_sampler_respects_eta1(t_net):
    sampler = PerturbationSampler(t_net, ETA1, seed=5)
    positions = sampler.block(0)
    assert positions.shape == (BLOCK_SIZE, 4, 3)
    assert np.allclose(np.linalg.norm(positions, axis=-1), 1.0, atol=1e-14)
    chords = np.linalg.norm(positions - sampler.layout.base[None], axis=-1)
    assert chords.max() <= ETA1 + 1e-12


def test_sampler_blocks_are_independent(y_net):
    sampler = PerturbationSampler(y_net, ETA1, seed=5)
    later = sampler.block(3)
    sampler.block(0)
    assert np.array_equal(sampler.block(3), later)
    other = PerturbationSampler(y_net, ETA1, seed=5, component=1)
    assert not np.array_equal(other.block(3), later)


def test_odd_draws_move_one_vertex(y_net):
    sampler = PerturbationSampler(y_net, ETA1, seed=2)
    positions = sampler.block(0, 8)
    moved = np.any(positions != sampler.layout.base[None], axis=-1)
    assert all(moved[k].sum() <= 1 for k in range(1, 8, 2))


def test_invalid_net_is_rejected(t_net):
    broken = ConeNet(3, t_net.vertices, tuple(a for a in t_net.arcs if a.id != "t2-t3"))
    with pytest.raises(NetValidationError, match="not minimal-looking") as info:
        full_length_certificate(broken, ETA1, 10)
    assert not info.value.report.passed


@pytest.mark.parametrize("eta1", [0.0, -1e-3])
def test_eta1_must_be_positive(t_net, eta1):
    with pytest.raises(EtaViolationError):
        full_length_certificate(t_net, eta1, 10)


def test_failed_scoring_block_is_named(monkeypatch, t_net):
    score = certificate._score_block

    def scoring(sampler, index, count):
        if index == 1:
            raise PreconditionError("degenerate block")
        return score(sampler, index, count)

    monkeypatch.setattr(certificate, "_score_block", scoring)
    with pytest.raises(CertificateError, match=r"blocks 1 \(degenerate block\)"):
        full_length_certificate(t_net, ETA1, 300, seed=3)


def test_union_is_certified_componentwise():
    union = build_union(embed_orthogonal([build_plane(3), build_Y(3)]))
    report = componentwise_certificate(union, ETA1, 200, seed=4)
    assert len(report.components) == 2
    assert [c.component for c in report.components] == [0, 1]
    assert report.components[0].c_hat == 0.0
    assert report.components[0].passed
    assert report.c_hat == max(c.c_hat for c in report.components)
    assert report.passed == all(c.passed for c in report.components)
    assert len(report.summary()["components"]) == 2


@pytest.mark.slow
@pytest.mark.parametrize("builder", [build_plane, build_Y, build_T])
def test_canonical_cones_pass_full_budget(builder):
    report = full_length_certificate(builder(3), ETA1, 100_000, seed=0)
    assert report.passed, report.summary()
