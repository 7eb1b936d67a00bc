"""
Utility functions for riesz-lab.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Tuple
import logging
import sys

from .errors import SchemaError


# Stage search for sequence-generated ideals
DEFAULT_SEQUENCE_CUTOFF = 64

# Largest downset lattice the generator will build
DEFAULT_DOWNSET_LIMIT = 2 ** 20

# Candidate bounds in the dominating-bound search
DEFAULT_SEARCH_BREAKPOINTS = 16
DEFAULT_SEARCH_CANDIDATES = 32

# Bumps checked exactly before the analytic tail takes over
DEFAULT_BUMP_PREFIX = 50

# (r, s) pairs for bump families
DEFAULT_GRID: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(1, 2), Fraction(1)),
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(3, 4), Fraction(1, 2)),
)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 100


LOG_FORMAT = '%(asctime)s %(levelname)-7s rieszlab: %(message)s'
LOG_DATE_FORMAT = '%H:%M:%S'


def setup_logging(level: int = logging.INFO) -> logging.Logger:
    """
    Configure the "rieszlab" logger.

    Log lines go to stderr so stdout carries only the JSON report. Calling
    again (e.g. with --verbose) re-levels the existing handler instead of
    adding a second one.
    """
    logger = logging.getLogger("rieszlab")
    logger.setLevel(level)
    logger.propagate = False

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
        logger.addHandler(handler)
    for handler in logger.handlers:
        handler.setLevel(level)

    return logger


def to_rational(value: Any) -> Fraction:
    """
    Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are refused: every scalar in the lab is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Cannot read {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """
    Render a Fraction as "p/q" (or "p" for integers).
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_grid(text: str) -> Tuple[Tuple[Fraction, Fraction], ...]:
    """
    Parse a grid option of the form "r:s,r:s,...".
    """
    pairs = []
    for chunk in text.split(','):
        chunk = chunk.strip()
        if not chunk:
            continue
        r, _, s = chunk.partition(':')
        if not s:
            raise ValueError(f"Grid entry {chunk!r} is not of the form r:s")
        pairs.append((to_rational(r), to_rational(s)))
    return tuple(pairs)


def canonical_json(data: Any) -> str:
    """
    Serialize data the same way every time.
    """
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True)


def ensure_output_dir(directory: Path) -> Path:
    """
    Create a report directory and its parents.

    Raises:
        SchemaError: if the path exists and is not a directory
    """
    if directory.exists() and not directory.is_dir():
        raise SchemaError(f"{directory} exists and is not a directory", "--out")
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def pairwise(items: Iterable[Any]):
    """
    Yield consecutive pairs (a, b), (b, c), ...
    """
    items = list(items)
    return zip(items, items[1:])


def read_rational(value: Any, location: str = "$") -> Fraction:
    """
    Decode a JSON rational ("p/q" string or integer), raising SchemaError
    with the offending location.
    """
    from .errors import SchemaError

    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"expected a rational like \"p/q\", got {value!r}", location)
