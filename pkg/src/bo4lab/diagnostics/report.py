"""Uniform pass/fail record for every verification check."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """One verification outcome.

    For plain upper-bound checks, passed == (measured <= bound).  Checks on a
    fitted exponent use comparison 'ge' (measured >= bound) or 'window'
    (|measured - center| <= halfwidth, carried in details); the comparison
    mode is recorded in details["comparison"].
    """

    name: str
    passed: bool
    measured: float
    bound: float
    details: dict = field(default_factory=dict)

    @classmethod
    def le(
        cls, name: str, measured: float, bound: float, details: dict | None = None
    ) -> "CheckReport":
        details = {"comparison": "le", **(details or {})}
        return cls(name, bool(measured <= bound), float(measured), float(bound), details)

    @classmethod
    def ge(
        cls, name: str, measured: float, bound: float, details: dict | None = None
    ) -> "CheckReport":
        details = {"comparison": "ge", **(details or {})}
        return cls(name, bool(measured >= bound), float(measured), float(bound), details)

    @classmethod
    def window(
        cls,
        name: str,
        measured: float,
        center: float,
        halfwidth: float,
        details: dict | None = None,
    ) -> "CheckReport":
        details = {"comparison": "window", "center": float(center), **(details or {})}
        passed = abs(measured - center) <= halfwidth
        return cls(name, bool(passed), float(measured), float(halfwidth), details)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "bound": self.bound,
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    """Coerce numpy scalars/arrays nested in details to plain python."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj
