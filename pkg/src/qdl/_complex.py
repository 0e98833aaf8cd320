"""Small helpers for moving complex numbers in and out of JSON-ish structures."""

from __future__ import annotations

from typing import Any, Sequence

from .errors import InvalidInput


def to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def from_pair(value: Any, field: str = "value") -> complex:
    """Parse ``[re, im]`` (or a bare real number) into a complex number."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if isinstance(value, Sequence) and not isinstance(value, str) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    raise InvalidInput(f"field '{field}': expected [re, im], got {value!r}")
