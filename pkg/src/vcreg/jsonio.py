"""Exact-rational JSON serialization and the on-disk schemas.

Every rational crosses the boundary as a "num/den" string. Decimal floats are
rejected on input so no tolerance can sneak in through parsing.

Hypergraph JSON: {"k": int, "part_sizes": [int], "edges": [[int, ...]], "symmetric": bool}
Measure JSON:    {"part": int, "weights": ["num/den", ...]}
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction

from .errors import InputError


def parse_rational(s) -> Fraction:
    """Parse "num/den" (or a bare integer string) into an exact Fraction."""
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputError(f"rational must be a 'num/den' string, got {type(s).__name__}")
    t = s.strip()
    if "." in t or "e" in t.lower():
        raise InputError(f"decimal rationals are not accepted: {s!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational {s!r}: {exc}") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_of(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def dump_json(obj, path) -> None:
    """Write JSON atomically (tmp file + rename) so readers never see a torn file."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)
