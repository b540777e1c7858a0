"""
Run configuration for command-line runs.

A RunConfig is assembled from three layers: a key = value config file, the
command-line flags, and --tol NAME=VALUE overrides, each layer overriding
the previous one.
"""

import logging
import re
from dataclasses import dataclass, field, fields, replace

from ..core.battery import resolve_threads
from ..errors import ConfigError
from ..utils.formats import get_format_alias_map
from ..utils.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

_LINE = re.compile(r"^\s*(?P<key>[A-Za-z_][A-Za-z0-9_.]*)\s*=\s*(?P<value>.*?)\s*$")
_SECTION = re.compile(r"^\s*\[[^\]]*\]\s*$")


@dataclass(frozen=True)
class RunConfig:
    """
    Settings shared by every command.

    Attributes:
        seed (int): Seed of every stochastic stream
        budget (int): Base draw count of full-length certificates
        threads (int): Worker count; None defers to CONELAB_THREADS
        output (str): Output file or directory, None for stdout
        format (str): Output format override, "json", "csv" or "obj"
        tolerances (dict): Tolerance overrides by name
    """

    seed: int = 0
    budget: int = 10000
    threads: int = None
    output: str = None
    format: str = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("seed", "budget"):
            if not isinstance(getattr(self, name), int):
                raise ConfigError(f"{name} must be an integer, got {getattr(self, name)!r}")
        if self.budget < 1:
            raise ConfigError(f"budget must be at least 1, got {self.budget}")
        if self.format is not None and self.format not in get_format_alias_map():
            raise ConfigError(f"unknown format {self.format!r}")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {name!r}")
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be positive, got {value!r}")

    @property
    def workers(self):
        return resolve_threads(self.threads)


def _parse_value(raw):
    raw = raw.split("#", 1)[0].strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def parse_config_text(text, source="<config>"):
    """
    Parse key = value lines.

    Comments start with #, [section] headers are ignored, values become int,
    float or str. Keys naming a tolerance go to the tolerance table.

    Returns:
        dict: Settings with a "tolerances" sub-dict

    Raises:
        ConfigError: Malformed line or unknown key
    """
    known = {f.name for f in fields(RunConfig)} - {"tolerances"}
    settings = {"tolerances": {}}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or _SECTION.match(stripped):
            continue
        match = _LINE.match(line)
        if not match:
            raise ConfigError(f"{source}:{number}: expected 'key = value', got {stripped!r}")
        key, value = match.group("key"), _parse_value(match.group("value"))
        if key in DEFAULT_TOLERANCES:
            settings["tolerances"][key] = float(value)
        elif key in known:
            settings[key] = value
        else:
            raise ConfigError(f"{source}:{number}: unknown setting {key!r}")
    return settings


def load_config_file(path):
    with open(path, encoding="utf-8") as handle:
        return parse_config_text(handle.read(), source=str(path))


def parse_tolerance_overrides(items):
    """
    Turn ["NAME=VALUE", ...] into a dict.

    Raises:
        ConfigError: Item without "=" or a non-numeric value
    """
    result = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            result[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--tol {name.strip()}: {value!r} is not a number") from None
    return result


def build_run_config(args):
    """
    Merge the config file, command-line flags and --tol overrides.

    Args:
        args (argparse.Namespace): Parsed arguments; flags left at None do
            not override the file

    Returns:
        RunConfig
    """
    settings = load_config_file(args.config) if getattr(args, "config", None) else {"tolerances": {}}
    tolerances = settings.pop("tolerances")
    config = RunConfig(**settings)
    flags = {}
    for name in ("seed", "budget", "threads", "output", "format"):
        value = getattr(args, name, None)
        if value is not None:
            flags[name] = value
    tolerances.update(parse_tolerance_overrides(getattr(args, "tol", None)))
    config = replace(config, tolerances=tolerances, **flags)
    logger.debug("run config: %s", config)
    return config
