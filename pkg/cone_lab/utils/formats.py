"""
Output format handling for reports and data files.

Maps user-facing format names and file suffixes to the writers used by
every command, and holds the number formatting shared by all of them.
"""

import json
import logging
import re
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def get_format_alias_map():
    """
    Get mapping from accepted format names to canonical format names.

    Returns:
        dict: Alias to canonical name
    """
    return {
        "json": "json", "JSON": "json",
        "csv": "csv", "CSV": "csv", "txt": "csv",
        "obj": "obj", "OBJ": "obj", "wavefront": "obj",
    }


def detect_format(path, explicit=None):
    """
    Decide the format of a data file.

    Args:
        path (str): File name
        explicit (str): Format name given by the user, takes precedence

    Returns:
        str: "json", "csv" or "obj"

    Raises:
        ConfigError: Unknown format name or suffix
    """
    aliases = get_format_alias_map()
    if explicit is not None:
        if explicit not in aliases:
            raise ConfigError(f"unknown format {explicit!r}")
        return aliases[explicit]
    match = re.search(r"\.([A-Za-z]+)$", str(path))
    if match and match.group(1) in aliases:
        return aliases[match.group(1)]
    raise ConfigError(f"cannot tell the format of {path!r}; pass it explicitly")


def format_float(value):
    """Seventeen significant digits, so written numbers read back exactly."""
    return FLOAT_FORMAT % value


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps_json(data):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def write_json(data, path=None):
    """
    Write a JSON document to a file, or to stdout when path is None.

    Args:
        data (dict): Document
        path (str): Destination file
    """
    text = dumps_json(data)
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.debug("wrote %s", path)


def read_json(path):
    with open(path, encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None


def write_csv(path, header, rows):
    """
    Write a numeric table with a header line.

    Args:
        path (str): Destination file
        header (list): Column names
        rows (array-like): Shape (count, len(header))
    """
    table = np.asarray(rows, dtype=float).reshape(-1, len(header))
    np.savetxt(path, table, delimiter=",", header=",".join(header), comments="", fmt=FLOAT_FORMAT)
    logger.debug("wrote %d rows to %s", table.shape[0], path)


def read_csv(path):
    """
    Read a numeric table written by write_csv.

    Returns:
        tuple: (header list, numpy.ndarray of shape (count, columns))
    """
    with open(path, encoding="utf-8") as handle:
        first = handle.readline().strip()
    header = [name.strip() for name in first.split(",")]
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if table.size and table.shape[1] != len(header):
        raise ConfigError(f"{path}: header has {len(header)} columns, rows have {table.shape[1]}")
    return header, table
