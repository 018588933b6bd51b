"""Deterministic JSON artifacts: sorted keys, newline-terminated, fractions
as "p/q" strings.  Identical inputs must produce byte-identical files."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"not JSON-serialisable: {type(obj)!r}")


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_default) + "\n"


def write(path, payload) -> None:
    Path(path).write_text(dumps(payload), encoding="ascii", newline="\n")


def read(path):
    return json.loads(Path(path).read_text(encoding="ascii"))


def parse_fraction(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str) and "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)
