"""
Argument parser for the cone-lab command line.
"""

import argparse

from .. import __version__
from . import commands


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance (repeatable)")
    common.add_argument("--seed", type=int, help="seed of every stochastic stream")
    common.add_argument("-o", "--output", help="output file or directory (default: stdout)")
    common.add_argument("--format", help="output format: json, csv or obj")
    common.add_argument("--threads", type=int, help="worker threads (default: $CONELAB_THREADS or 1)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    return common


def _add_build(sub, common):
    p = sub.add_parser("build", parents=[common], help="build a cone net")
    p.add_argument("kind", choices=["plane", "Y", "T", "cube", "union"])
    p.add_argument("--dim", type=int, default=3, help="ambient dimension n")
    p.add_argument("--eta0", type=float, default=0.01)
    p.add_argument("--parts", nargs="+", metavar="CONE", help="cone files joined by 'union'")
    p.add_argument("--radius", type=float, default=1.0, help="truncation radius of OBJ output")
    p.set_defaults(handler=commands.cmd_build)


def _add_validate(sub, common):
    p = sub.add_parser("validate", parents=[common], help="check that a net is minimal-looking")
    p.add_argument("cone")
    p.set_defaults(handler=commands.cmd_validate)


def _add_full_length(sub, common):
    p = sub.add_parser("full-length", parents=[common], help="sampling certificate of the full-length property")
    p.add_argument("cone")
    p.add_argument("--eta1", type=float, default=0.05)
    p.add_argument("--budget", type=int, help="base draw count B; 2B draws are made")
    p.set_defaults(handler=commands.cmd_full_length)


def _add_epi(sub, common):
    p = sub.add_parser("epi", parents=[common], help="harmonic replacement area saving")
    p.add_argument("profile", nargs="?", help="sector profile, CSV or JSON")
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--kappa", type=float, default=0.01)
    p.add_argument("--modes", type=int, default=512)
    p.add_argument("--order", type=int, default=8, help="Gauss-Legendre order per panel")
    p.add_argument("--battery", type=int, metavar="COUNT", help="run COUNT seeded random profiles instead")
    p.set_defaults(handler=commands.cmd_epi)


def _add_straighten(sub, common):
    p = sub.add_parser("straighten", parents=[common], help="straighten a near-geodesic curve")
    p.add_argument("curve", help="polyline, CSV or JSON")
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--tau1", type=float, help="closeness parameter (default: 1e-4 eta^2)")
    p.add_argument("--eta0", type=float, default=0.01)
    p.add_argument("--curve-out", help="write the straightened curve here")
    p.set_defaults(handler=commands.cmd_straighten)


def _add_gauge_options(p):
    p.add_argument("--kind", choices=["power", "log"], default="power")
    p.add_argument("--C0", type=float, default=0.0, help="gauge coefficient")
    p.add_argument("--b", type=float, default=1.0, help="gauge exponent")
    p.add_argument("--A", type=float, default=1.0, help="log gauge scale")


def _add_decay(sub, common):
    p = sub.add_parser("decay", help="density-excess decay bounds")
    decay = p.add_subparsers(dest="decay_command", required=True)

    bound = decay.add_parser("bound", parents=[common], help="decay bound from the differential inequality")
    bound.add_argument("--fy", type=float, required=True)
    bound.add_argument("--a", type=float, required=True)
    bound.add_argument("--x", type=float, required=True)
    bound.add_argument("--y", type=float, required=True)
    _add_gauge_options(bound)
    bound.set_defaults(handler=commands.cmd_decay_bound)

    log_bound = decay.add_parser("log-bound", parents=[common], help="explicit bound for a log gauge")
    log_bound.add_argument("--fy", type=float, required=True)
    log_bound.add_argument("--a", type=float, required=True)
    log_bound.add_argument("--A", type=float, required=True)
    log_bound.add_argument("--b", type=float, required=True)
    log_bound.add_argument("--C", type=float, default=1.0)
    log_bound.add_argument("--x", type=float, required=True)
    log_bound.add_argument("--y", type=float, required=True)
    log_bound.set_defaults(handler=commands.cmd_decay_log_bound)

    weak = decay.add_parser("weak-envelope", parents=[common], help="envelope of the weak decay inequality")
    weak.add_argument("--fy", type=float, required=True)
    weak.add_argument("--alpha", type=float, required=True)
    weak.add_argument("--N", type=float, required=True)
    weak.add_argument("--x", type=float, required=True)
    weak.add_argument("--y", type=float, required=True)
    weak.add_argument("--Ch", type=float, default=0.0)
    weak.set_defaults(handler=commands.cmd_decay_weak_envelope)

    monotone = decay.add_parser("check-monotone", parents=[common], help="near-monotonicity of a density profile")
    monotone.add_argument("profile", help="CSV with columns r, theta")
    monotone.add_argument("--lambda", dest="lam", type=float, required=True)
    monotone.add_argument("--C", type=float, help="constant of the excess bounds")
    monotone.add_argument("--d0", type=float, help="limit density (default: theta at the smallest r)")
    _add_gauge_options(monotone)
    monotone.set_defaults(handler=commands.cmd_decay_check_monotone)


def build_parser():
    """
    Build the argument parser with all subcommands.

    Returns:
        argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(prog="cone-lab", description="Numerical experiments on two-dimensional minimal cones.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True)
    _add_build(sub, common)
    _add_validate(sub, common)
    _add_full_length(sub, common)
    _add_epi(sub, common)
    _add_straighten(sub, common)
    _add_decay(sub, common)
    return parser
