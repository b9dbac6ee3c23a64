"""Brute-force integer scans of the bilinear symbol inequalities.

The commutator bounds reduce to pointwise inequalities between
polynomial-fractional symbols on the integer lattice, of the shape

    |cancelling combination of |xi|^s terms|  <=  C * (mixed lower-order RHS)

with C independent of (xi, eta).  Since no numerical constant is given,
the check is fit-then-verify: C is fitted as the max LHS/RHS ratio over
a small box |xi|, |eta| <= r, then LHS <= margin * C * RHS must hold on
the full box |xi|, |eta| <= R with R >= 4r (margins per inequality below).  Points where
the RHS vanishes must have LHS exactly zero -- the expressions below are
factored so that this holds bit-exactly in floating point (every LHS
term carries an explicit zero factor on those lines, and the one genuine
cancellation is between bit-identical products), making RHS = 0, LHS > 0
a hard contradiction rather than a tolerance question.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grid import pow_abs
from .report import CheckReport

__all__ = [
    "INEQUALITY_IDS",
    "SymbolScanError",
    "SymbolScanSpec",
    "symbol_scan",
]

#: Permitted verification margin on the fitted constant, per inequality.
#: The first-order remainder's ratio saturates only like 1/sqrt(|eta|)
#: along |xi - eta| = 1 for fractional s (the sup there is s(s+1)/2), so
#: its inner-box fit carries a larger bias than the fast-saturating
#: third-order remainders; a genuinely unbounded constant still overshoots
#: the wider margin at 4x the fit radius.
_FIT_MARGINS = {
    "Eq41": 1.05,
    "CommEst3": 1.05,
    "CommEst0_symbol": 1.15,
}


class SymbolScanError(ArithmeticError):
    """LHS > 0 at a point where the RHS vanishes: contradicts the bound."""


def _signed_pow(x: np.ndarray, s: float) -> np.ndarray:
    """sigma(x) = |x|^s x; sigma(0) = 0 for every s >= 0."""
    return pow_abs(x, s) * x


def _eq41(xi: np.ndarray, eta: np.ndarray, s: float):
    # remainder of the second-order Leibniz expansion of D^s dx (f g'')
    d = xi - eta
    sig_eta = _signed_pow(eta, s)
    eta2 = eta * eta
    lhs = np.abs(
        _signed_pow(xi, s) * eta2
        - _signed_pow(d, s) * eta2
        - sig_eta * eta2
        - (s + 1.0) * d * sig_eta * eta
        - 0.5 * s * (s + 1.0) * (d * d) * sig_eta
    )
    rhs = np.abs(eta) ** 3 * pow_abs(d, s) + pow_abs(eta, s) * np.abs(d) ** 3
    return lhs, rhs


def _comm_est3(xi: np.ndarray, eta: np.ndarray, s: float):
    # zeroth-order expansions of D^{s+1} and D^s dx; both must obey the bound
    d = xi - eta
    lhs_even = np.abs(pow_abs(xi, s + 1.0) - pow_abs(d, s + 1.0) - pow_abs(eta, s + 1.0))
    lhs_odd = np.abs(_signed_pow(xi, s) - _signed_pow(d, s) - _signed_pow(eta, s))
    rhs = np.abs(eta) * pow_abs(d, s) + np.abs(d) * pow_abs(eta, s)
    return np.maximum(lhs_even, lhs_odd), rhs


def _first_order(xi: np.ndarray, eta: np.ndarray, s: float):
    # remainder of the first-order Leibniz expansion of D^s dx (f g')
    d = xi - eta
    sig_eta = _signed_pow(eta, s)
    lhs = np.abs(
        _signed_pow(xi, s) * eta
        - _signed_pow(d, s) * eta
        - sig_eta * eta
        - (s + 1.0) * d * sig_eta
    )
    rhs = (d * d) * pow_abs(eta, s) + pow_abs(d, s) * (eta * eta)
    return lhs, rhs


_INEQUALITIES = {
    "Eq41": _eq41,
    "CommEst3": _comm_est3,
    "CommEst0_symbol": _first_order,
}

INEQUALITY_IDS = tuple(_INEQUALITIES)


@dataclass(frozen=True)
class SymbolScanSpec:
    """Fit-then-verify scan of one symbol inequality on |xi|, |eta| <= box."""

    inequality_id: str
    s: float
    box: int = 256
    fit_radius: int = 64

    def __post_init__(self) -> None:
        if self.inequality_id not in _INEQUALITIES:
            raise ValueError(
                f"unknown inequality {self.inequality_id!r}; choose from {INEQUALITY_IDS}"
            )
        if self.s < 0:
            raise ValueError(f"s must be >= 0, got {self.s}")
        if self.fit_radius < 16:
            raise ValueError(f"fit_radius must be >= 16, got {self.fit_radius}")
        if self.box < 4 * self.fit_radius:
            raise ValueError(
                f"box must be >= 4*fit_radius = {4 * self.fit_radius}, got {self.box}"
            )


def symbol_scan(spec: SymbolScanSpec) -> CheckReport:
    """Exhaustive scan: fit C on the small box, verify on the full box."""
    n = np.arange(-spec.box, spec.box + 1, dtype=float)
    xi, eta = np.meshgrid(n, n, indexing="ij")
    lhs, rhs = _INEQUALITIES[spec.inequality_id](xi, eta, spec.s)

    degenerate = rhs == 0.0
    if np.any(lhs[degenerate] > 0.0):
        bad = np.argwhere(degenerate & (lhs > 0.0))[0]
        raise SymbolScanError(
            f"{spec.inequality_id}: LHS > 0 with vanishing RHS at "
            f"(xi, eta) = ({n[bad[0]]:g}, {n[bad[1]]:g})"
        )

    ratio = np.zeros_like(lhs)
    np.divide(lhs, rhs, out=ratio, where=~degenerate)
    in_fit = (np.abs(xi) <= spec.fit_radius) & (np.abs(eta) <= spec.fit_radius)
    fitted = float(ratio[in_fit].max())
    global_max = float(ratio.max())
    return CheckReport.le(
        f"symbol:{spec.inequality_id}:s={spec.s:g}",
        measured=global_max,
        bound=_FIT_MARGINS[spec.inequality_id] * fitted,
        details={
            "fitted_constant": fitted,
            "fit_radius": spec.fit_radius,
            "box": spec.box,
            "s": spec.s,
            "degenerate_points": int(degenerate.sum()),
        },
    )
