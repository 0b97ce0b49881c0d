"""Utilities for input validation and parsing."""
import re
import logging
from fractions import Fraction

from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

def sanitize_input(text):
    """Strip characters that never occur in names, numbers or h lists.

    Args:
        text (str): Input text to sanitize.

    Returns:
        str: Sanitized, lower-cased text.
    """
    sanitized = re.sub(r'[^a-zA-Z0-9_.,/+^\-]', '', text.strip()).lower()
    logger.debug(f"Sanitized input: {text} -> {sanitized}")
    return sanitized

def parse_fraction(text):
    """Parse '1/16', '0.0625', '2^-4' or '1e-3' into a float.

    Args:
        text (str): Number text.

    Returns:
        float: Parsed value.
    """
    raw = str(text).strip()
    power = re.fullmatch(r'([0-9.]+)\^(-?[0-9]+)', raw)
    try:
        if power:
            return float(power.group(1)) ** int(power.group(2))
        return float(Fraction(raw))
    except (ValueError, ZeroDivisionError):
        logger.warning(f"Invalid numeric value: {text}")
        raise ConfigurationError(f"invalid number '{text}'")

def parse_number_list(text):
    """Parse a comma-separated list of numbers.

    Args:
        text (str): e.g. '1/16,1/32,1/64'.

    Returns:
        list[float]: Parsed values in the given order.
    """
    items = [item for item in sanitize_input(text).split(",") if item]
    if not items:
        raise ConfigurationError("empty number list")
    return [parse_fraction(item) for item in items]

def parse_h_list(text):
    """Parse a step-size list and check it refines by a factor of two.

    Args:
        text (str or list): Comma-separated list or list of numbers/strings.

    Returns:
        list[float]: Strictly decreasing positive step sizes.
    """
    if isinstance(text, str):
        values = parse_number_list(text)
    else:
        values = [parse_fraction(v) for v in text]
    if any(h <= 0 for h in values):
        raise ConfigurationError("step sizes must be positive")
    for coarse, fine in zip(values, values[1:]):
        if abs(coarse / fine - 2.0) > 1e-9:
            raise ConfigurationError(
                f"step sizes must halve successively, got {coarse:g} then {fine:g}")
    return values

def parse_bool(text):
    """Parse a yes/no style flag value.

    Args:
        text (str): Value such as 'true', '1', 'yes'.

    Returns:
        bool: Parsed flag.
    """
    value = sanitize_input(str(text))
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ConfigurationError(f"invalid boolean '{text}'")
