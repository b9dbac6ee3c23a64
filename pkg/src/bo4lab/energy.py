"""Modified energies with cubic/quartic correction terms.

For a pair of states (f, g), w = f - g, the corrected H^s energy is

    E_s(f, g) = 1/2 ||w||^2 (1 + C_s ||f||^2 + C_s ||f||^{4s})
              + 1/2 ||D^s w||^2 + M1 + M2 + M3,

with correction integrals (lam_j = lambda_j(s) from the coefficient set)

    M1 = lam1/4 * int f (H D^s w)(H D^{s-1} w) dx
    M2 = lam2/4 * int (H f_x) (D^{s-1} w)^2 dx
    M3 = (lam1*lam4 + 4*lam3)/32 * int f^2 (D^{s-1} w)^2 dx.

The L2-level energy replaces D^{s-1} by the tail-inverse-derivative J, the
H^s leading term by the H^-1 weighted norm, and evaluates lambda_j at s = 0.
The weights C_s are chosen (per run, from the initial pair) as the smallest
power of two for which the two-sided comparison

    E_s <= ||w||^2 (1 + C_s ||f||^2 + C_s ||f||^{4s}) + ||D^s w||^2 <= 4 E_s

holds; both correction families vanish when f = 0 and are exactly quadratic
in w, so such a constant always exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .equations import CoefficientSet
from .grid import (
    ConfigError,
    Field,
    deriv,
    frac_deriv,
    hilbert,
    integral,
    j_op,
    norm_hneg1,
    norm_hs,
    norm_l2,
)


class NumericsError(ArithmeticError):
    """A numeric search or check could not be completed."""

__all__ = [
    "EnergyParams",
    "Lambdas",
    "lambdas",
    "corrections_hs",
    "corrections_l2",
    "energy_hs",
    "energy_l2",
    "comparison_mid_hs",
    "comparison_mid_l2",
    "choose_big_constant",
    "i_factor",
    "NumericsError",
]

_MAX_CONSTANT = 2.0**64


@dataclass(frozen=True)
class EnergyParams:
    """Sobolev index s, low index s0, and comparison weights."""

    s: float = 4.0
    s0: float = 3.6
    cs: float = 1.0
    c0: float = 1.0

    def __post_init__(self):
        if self.s < 1.0:
            raise ConfigError(f"s must be >= 1, got {self.s}")
        if self.s0 <= 3.5:
            raise ConfigError(f"s0 must exceed 3.5, got {self.s0}")
        if self.cs <= 0.0 or self.c0 <= 0.0:
            raise ConfigError("comparison weights must be positive")


@dataclass(frozen=True)
class Lambdas:
    l1: float
    l2: float
    l3: float
    l4: float

    def as_tuple(self) -> tuple:
        return (self.l1, self.l2, self.l3, self.l4)


def lambdas(s: float, coeffs: CoefficientSet) -> Lambdas:
    """Correction weights lambda_1..lambda_4 as affine functions of s."""
    c = coeffs
    return Lambdas(
        l1=(c.c1 - c.c4) * s - c.c1 / 2.0 + 2.0 * c.c2 + c.c4 / 2.0,
        l2=-2.0 * c.c3 * s - c.c4,
        l3=-2.0 * (c.c5 + c.c6 + c.c7) * s - 2.0 * c.c5 - c.c6,
        l4=2.0 * (c.c1 - c.c4) * s - 5.0 * c.c1 + 4.0 * c.c2 + 5.0 * c.c4,
    )


def _m3_weight(lam: Lambdas) -> float:
    return (lam.l1 * lam.l4 + 4.0 * lam.l3) / 32.0


def corrections_hs(f: Field, g: Field, s: float, coeffs: CoefficientSet) -> tuple[float, float, float]:
    """(M1, M2, M3) at Sobolev level s >= 1."""
    if s < 1.0:
        raise ConfigError(f"corrections_hs needs s >= 1, got {s}")
    lam = lambdas(s, coeffs)
    w = f - g
    dsm1w = frac_deriv(w, s - 1.0)
    m1 = 0.25 * lam.l1 * integral([f, hilbert(frac_deriv(w, s)), hilbert(dsm1w)])
    m2 = 0.25 * lam.l2 * integral([hilbert(deriv(f, 1)), dsm1w, dsm1w])
    m3 = _m3_weight(lam) * integral([f, f, dsm1w, dsm1w])
    return m1, m2, m3


def corrections_l2(f: Field, g: Field, coeffs: CoefficientSet) -> tuple[float, float, float]:
    """(M1, M2, M3) at the L2 level: lambda_j(0) and J in place of D^{s-1}."""
    lam = lambdas(0.0, coeffs)
    w = f - g
    jw = j_op(w)
    m1 = 0.25 * lam.l1 * integral([f, hilbert(w), hilbert(jw)])
    m2 = 0.25 * lam.l2 * integral([hilbert(deriv(f, 1)), jw, jw])
    m3 = _m3_weight(lam) * integral([f, f, jw, jw])
    return m1, m2, m3


def _hs_weight_factor(f: Field, s: float, cs: float) -> float:
    nf = norm_l2(f)
    return 1.0 + cs * nf**2 + cs * nf ** (4.0 * s)


def comparison_mid_hs(f: Field, g: Field, s: float, cs: float) -> float:
    """Middle quantity of the H^s comparison: ||w||^2 (...) + ||D^s w||^2."""
    w = f - g
    return norm_l2(w) ** 2 * _hs_weight_factor(f, s, cs) + norm_l2(frac_deriv(w, s)) ** 2


def energy_hs(f: Field, g: Field, params: EnergyParams, coeffs: CoefficientSet) -> float:
    """Corrected H^s energy E_s(f, g)."""
    s, cs = params.s, params.cs
    w = f - g
    lead = 0.5 * norm_l2(w) ** 2 * _hs_weight_factor(f, s, cs)
    lead += 0.5 * norm_l2(frac_deriv(w, s)) ** 2
    return lead + sum(corrections_hs(f, g, s, coeffs))


def _l2_weight_factor(f: Field, c0: float) -> float:
    nf = norm_l2(f)
    return 1.0 + c0 * nf**2 + c0 * nf**4


def comparison_mid_l2(f: Field, g: Field, c0: float) -> float:
    """Middle quantity of the L2 comparison: ||w||_{H^-1}^2 (...) + ||w||^2."""
    w = f - g
    return norm_hneg1(w) ** 2 * _l2_weight_factor(f, c0) + norm_l2(w) ** 2


def energy_l2(f: Field, g: Field, params: EnergyParams, coeffs: CoefficientSet) -> float:
    """Corrected L2-level energy E(f, g)."""
    w = f - g
    lead = 0.5 * norm_l2(w) ** 2
    lead += 0.5 * norm_hneg1(w) ** 2 * _l2_weight_factor(f, params.c0)
    return lead + sum(corrections_l2(f, g, coeffs))


def choose_big_constant(
    f: Field, g: Field, coeffs: CoefficientSet, s: float | None = None
) -> float:
    """Smallest power of two making the two-sided comparison hold.

    s = None selects the L2-level comparison.  Both sides are monotone in the
    candidate constant, so the doubling search stops at the minimal choice;
    capped at 2^64 (a failure there signals pathological inputs).
    """
    if s is None:
        corr = sum(corrections_l2(f, g, coeffs))
    else:
        corr = sum(corrections_hs(f, g, s, coeffs))
    c = 1.0
    while c <= _MAX_CONSTANT:
        if s is None:
            mid = comparison_mid_l2(f, g, c)
        else:
            mid = comparison_mid_hs(f, g, s, c)
        energy = 0.5 * mid + corr
        if energy <= mid and mid <= 4.0 * energy:
            return c
        c *= 2.0
    raise NumericsError("no comparison constant up to 2^64 closes the sandwich")


def i_factor(f: Field, g: Field, s0: float) -> float:
    """Growth factor 1 + ||f||_{H^s0} + ||g||_{H^s0}."""
    return 1.0 + norm_hs(f, s0) + norm_hs(g, s0)
