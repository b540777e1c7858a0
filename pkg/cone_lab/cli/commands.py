"""
Command handlers.

Each handler takes the parsed arguments and the RunConfig, writes its
report, and returns the exit code: 0 on success or PASS, 2 when a checked
contract fails. Errors propagate to the caller, which maps them to 1.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np

from ..core.battery import BatteryRunner
from ..core.certificate import componentwise_certificate
from ..core.cone_net import (
    build_cube,
    build_plane,
    build_T,
    build_union,
    build_Y,
    embed_orthogonal,
    net_density,
    net_length,
    validate_minimal_looking,
)
from ..core.decay import (
    DECAY_CONSTANT,
    GaugeSpec,
    check_near_monotonicity,
    decay_bound,
    log_gauge_decay,
    weak_decay_envelope,
)
from ..core.harmonic import area_saving, random_sector_profile
from ..core.straighten import default_tau1, parameterize, straighten
from ..errors import ConfigError
from ..utils.cone_io import load_net, save_net, write_obj
from ..utils.data_io import load_curve, load_density, load_profile, save_curve
from ..utils.formats import detect_format, format_float, write_csv, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONTRACT = 2

BUILDERS = {
    "plane": build_plane,
    "Y": build_Y,
    "T": build_T,
    "cube": build_cube,
}


def _emit(report, config):
    write_json(report, config.output)


def _exit_for(passed):
    return EXIT_OK if passed else EXIT_CONTRACT


def cmd_build(args, config):
    """Build a cone net and write it as JSON (or OBJ)."""
    if args.kind == "union":
        if not args.parts:
            raise ConfigError("build union needs --parts CONE [CONE ...]")
        net = build_union(embed_orthogonal([load_net(path) for path in args.parts]))
    else:
        net = BUILDERS[args.kind](args.dim, eta0=args.eta0)
    if config.output is not None and detect_format(config.output, config.format) == "obj":
        write_obj(net, config.output, radius=args.radius)
    else:
        save_net(net, config.output)
    density = net_density(net)
    stream = sys.stderr if config.output is None else sys.stdout
    print(f"length {format_float(net_length(net))} density {format_float(density)} "
          f"density/pi {format_float(density / math.pi)}", file=stream)
    return EXIT_OK


def cmd_validate(args, config):
    """Print the minimal-looking report of a net; exit 2 when it fails."""
    report = validate_minimal_looking(load_net(args.cone))
    _emit({
        "pass": report.passed,
        "violations": [{"check": v.check, "subject": v.subject, "value": v.value, "message": v.message}
                       for v in report.violations],
        "ball_condition": [{"check": v.check, "subject": v.subject, "value": v.value, "message": v.message}
                           for v in report.ball_condition],
        "min_arc_length": report.min_arc_length,
        "max_angle_deviation": report.max_angle_deviation,
        "min_separation": report.min_separation,
    }, config)
    return _exit_for(report.passed)


def cmd_full_length(args, config):
    """
    Run the componentwise full-length certificate.

    With --output DIR the per-component samples go to DIR/samples.csv (or
    DIR/samples_c<i>.csv for several components) and the summary to
    DIR/certificate.json; without it the summary goes to stdout.
    """
    net = load_net(args.cone)
    result = componentwise_certificate(net, args.eta1, config.budget, seed=config.seed, threads=config.workers)
    summary = result.summary()
    if config.output is None:
        write_json(summary)
        return _exit_for(result.passed)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    for report in result.components:
        name = "samples.csv" if len(result.components) == 1 else f"samples_c{report.component}.csv"
        rows = [(s.sample_id, s.alpha_plus, s.length_delta, s.ratio) for s in report.samples]
        write_csv(out / name, ["sample_id", "alpha_plus", "length_delta", "ratio"], rows)
    write_json(summary, out / "certificate.json")
    return _exit_for(result.passed)


def _epi_battery(args, config):
    def case(index):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
        T = rng.uniform(1.0, 10.0 * math.pi / 11.0)
        profile = random_sector_profile(rng, T, args.eta)
        report = area_saving(profile, kappa=args.kappa, modes=args.modes, order=args.order)
        return dict(report.summary(), **{"case": index, "T": T, "pass": report.contract_holds})

    jobs = [(index, lambda index=index: case(index)) for index in range(args.battery)]
    runner = BatteryRunner(jobs, threads=config.workers)
    outcome = runner.run()
    cases = []
    for index, summary in outcome.results.items():
        cases.append(summary)
        if not summary["pass"]:
            runner.tracker.error(f"[case {index}] FAIL saving {summary['saving']:.6g} below {summary['lower_bound']:.6g}")
    passed = outcome.ok and all(c["pass"] for c in cases)
    _emit({"battery": args.battery, "seed": config.seed, "pass": passed, "cases": cases,
           "errors": {str(k): v for k, v in outcome.failures.items()}}, config)
    return _exit_for(passed)


def cmd_epi(args, config):
    """Area saving of one profile, or of a seeded battery with --battery."""
    if args.battery:
        return _epi_battery(args, config)
    if args.profile is None:
        raise ConfigError("epi needs a profile file or --battery COUNT")
    profile = load_profile(args.profile, args.eta)
    report = area_saving(profile, kappa=args.kappa, modes=args.modes, order=args.order)
    _emit(dict(report.summary(), **{"pass": report.contract_holds}), config)
    return _exit_for(report.contract_holds)


def cmd_straighten(args, config):
    """Straighten a curve; exit 2 when the Lipschitz certificate or length bound fails."""
    points, plane = load_curve(args.curve)
    tau1 = default_tau1(args.eta) if args.tau1 is None else args.tau1
    curve = parameterize(points, plane, tau1, eta0=args.eta0)
    result = straighten(curve, args.eta)
    summary = dict(result.summary(), tau1=tau1)
    passed = (result.lipschitz_margin >= 0.0 and result.theta_increasing
              and result.added_measure <= result.replaced_measure + 1e-12)
    summary["pass"] = passed
    _emit(summary, config)
    if args.curve_out:
        save_curve(result.points, args.curve_out, plane=curve.frame)
    return _exit_for(passed)


def _gauge(args):
    if args.kind == "log":
        return GaugeSpec.log(args.C0, args.b, args.A)
    return GaugeSpec.power(args.C0, args.b)


def cmd_decay_bound(args, config):
    gauge = _gauge(args)
    value = decay_bound(args.fy, args.a, gauge, args.x, args.y)
    _emit({"value": value, "fy": args.fy, "a": args.a, "x": args.x, "y": args.y, "gauge": gauge.describe(),
           "constant": DECAY_CONSTANT}, config)
    return EXIT_OK


def cmd_decay_log_bound(args, config):
    report = log_gauge_decay(args.fy, args.a, args.A, args.b, args.x, args.y, C=args.C)
    _emit(dict(report.summary(), fy=args.fy, a=args.a, A=args.A, b=args.b, C=args.C, x=args.x, y=args.y), config)
    return EXIT_OK


def cmd_decay_weak_envelope(args, config):
    report = weak_decay_envelope(args.fy, args.alpha, args.N, args.y, args.x, args.Ch)
    _emit(dict(report.summary(), fy=args.fy, alpha=args.alpha, N=args.N, x=args.x, y=args.y, Ch=args.Ch), config)
    return _exit_for(report.dominated)


def cmd_decay_check_monotone(args, config):
    profile = load_density(args.profile, d0=args.d0)
    gauge = _gauge(args)
    report = check_near_monotonicity(profile, gauge, args.lam, C=args.C)
    _emit(dict(report.summary(), d0=profile.d0, gauge=gauge.describe()), config)
    return _exit_for(report.passed)
