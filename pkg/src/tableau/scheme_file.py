"""Plain-text scheme files for user-supplied double tableaus.

Format, one ``key = value`` per line, ``#`` starts a comment::

    name = my_scheme
    stages = 2
    declared_order = 1
    explicit_a = 0, 0, 1, 0          # row-major, s*s values
    explicit_c = 0, 1
    explicit_b = 1, 0
    implicit_a = 0, 0, 0, 1
    implicit_c = 0, 1
    implicit_b = 0, 0, 1             # s+1 values
"""
import logging
import os

import numpy as np

from src.tableau.butcher_pair import ButcherPair
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

REQUIRED_KEYS = (
    "name", "stages", "declared_order",
    "explicit_a", "explicit_c", "explicit_b",
    "implicit_a", "implicit_c", "implicit_b",
)


def _format_values(values, digits):
    return ", ".join(f"{float(v):.{digits}g}" for v in np.ravel(values))


def write_scheme_file(tb, path):
    """Write a tableau with 17 significant digits per coefficient.

    Args:
        tb (ButcherPair): Scheme to serialize.
        path (str): Destination file.
    """
    digits = ConfigLoader().get_config()["LOSSLESS_DIGITS"]
    lines = [
        f"# {tb.description}" if tb.description else "# semi-IMEX double tableau",
        f"name = {tb.name}",
        f"stages = {tb.s}",
        f"declared_order = {tb.declared_order}",
    ]
    for key in REQUIRED_KEYS[3:]:
        lines.append(f"{key} = {_format_values(getattr(tb, key), digits)}")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    logger.info(f"Wrote scheme '{tb.name}' to {path}")


def parse_scheme_text(text, source="<text>"):
    """Parse scheme-file text into a validated ButcherPair."""
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in REQUIRED_KEYS:
            raise ConfigurationError(f"{source}:{number}: unknown key '{key}'")
        entries[key] = value
    missing = [key for key in REQUIRED_KEYS if key not in entries]
    if missing:
        logger.error(f"Scheme file {source} is missing {missing}")
        raise ConfigurationError(f"{source}: missing keys {', '.join(missing)}")

    try:
        s = int(entries["stages"])
        order = int(entries["declared_order"])
        values = {
            key: np.array([float(v) for v in entries[key].split(",") if v.strip()])
            for key in REQUIRED_KEYS[3:]
        }
    except ValueError as e:
        logger.error(f"Bad number in scheme file {source}: {e}")
        raise ConfigurationError(f"{source}: {e}")

    expected = {"explicit_a": s * s, "implicit_a": s * s, "explicit_c": s,
                "explicit_b": s, "implicit_c": s, "implicit_b": s + 1}
    for key, count in expected.items():
        if values[key].size != count:
            raise ConfigurationError(f"{source}: {key} has {values[key].size} values, expected {count}")

    return ButcherPair(
        name=entries["name"],
        explicit_a=values["explicit_a"].reshape(s, s),
        explicit_c=values["explicit_c"],
        explicit_b=values["explicit_b"],
        implicit_a=values["implicit_a"].reshape(s, s),
        implicit_c=values["implicit_c"],
        implicit_b=values["implicit_b"],
        declared_order=order,
        description=f"loaded from {source}",
    )


def read_scheme_file(path):
    """Read and validate a scheme file.

    Args:
        path (str): Scheme file path.

    Returns:
        ButcherPair: The validated pair.
    """
    if not os.path.exists(path):
        logger.error(f"Scheme file not found: {path}")
        raise ConfigurationError(f"scheme file not found: {path}")
    with open(path, "r") as f:
        text = f.read()
    tb = parse_scheme_text(text, source=path)
    logger.info(f"Loaded scheme '{tb.name}' from {path}")
    return tb
