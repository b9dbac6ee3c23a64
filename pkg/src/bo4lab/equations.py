"""The fourth-order Benjamin-Ono-type flux K(u) and the evolution right-hand side.

The equation is  u_t = d/dx K(u) - time_direction * epsilon * u_xxxx  with

    K(u) = H u_xxx
         + c1 u u_xx + c2 (u_x)^2 + c3 (H u_x)^2 + c4 H(u H u_xx)
         + c5 H(u^2 u_x) + c6 u H(u u_x) + c7 u^2 H u_x
         - c8 u^4,

H the Hilbert transform.  split_F groups K by nonlinearity degree: F1 the
linear dispersive part, F2 the quadratic block (c1..c4), F3 the cubic block
(c5..c7), F4 the quartic -c8 u^4.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import (
    PAD_FACTOR,
    ConfigError,
    Field,
    NonFiniteError,
    TorusGrid,
    dealiased_product,
    deriv,
    hilbert,
)

__all__ = [
    "CoefficientSet",
    "SolverParams",
    "split_F",
    "nonlinearity_K",
    "rhs",
    "NonlinearEvaluator",
]


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients of the quadratic/cubic/quartic blocks of K."""

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0
    c7: float = 0.0
    c8: float = 0.0

    @classmethod
    def integrable(cls) -> "CoefficientSet":
        """The completely integrable preset."""
        return cls(c1=3.0, c2=2.0, c3=-1.0, c4=-1.0, c5=-2.0, c6=-2.0, c7=-2.0, c8=1.0)

    @classmethod
    def zero(cls) -> "CoefficientSet":
        return cls()

    def replace(self, **kw) -> "CoefficientSet":
        return replace(self, **kw)

    def as_tuple(self) -> tuple:
        return (self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7, self.c8)

    @property
    def is_linear(self) -> bool:
        return all(c == 0.0 for c in self.as_tuple())


@dataclass(frozen=True)
class SolverParams:
    """Equation parameters: coefficients, viscosity, and time direction."""

    coeffs: CoefficientSet
    epsilon: float = 0.0
    time_direction: int = 1

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ConfigError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.time_direction not in (1, -1):
            raise ConfigError(f"time_direction must be +1 or -1, got {self.time_direction}")


def _c6_term(u: Field, ux: Field) -> Field:
    """Band-exact u * H(u u_x).

    The inner product u u_x reaches twice the band limit, and its tail modes
    re-enter the band after the outer multiplication, so the intermediate must
    stay at padded resolution: truncating it first loses in-band coefficients.
    """
    n = u.grid.n_points
    m = PAD_FACTOR * n
    band = u.grid.spectrum_size

    def pad_phys(spec):
        padded = np.zeros(m // 2 + 1, dtype=complex)
        padded[:band] = spec
        return np.fft.irfft(padded * m, n=m)

    uu = pad_phys(u.spectrum)
    inner = np.fft.rfft(uu * pad_phys(ux.spectrum)) / m
    hilb = -1j * np.sign(np.arange(m // 2 + 1, dtype=float))
    outer = np.fft.rfft(uu * np.fft.irfft(inner * hilb * m, n=m)) / m
    return Field(u.grid, spectrum=outer[:band])


def split_F(u: Field, coeffs: CoefficientSet) -> tuple[Field, Field, Field, Field]:
    """K(u) grouped by degree: (F1, F2, F3, F4) with K = F1 + F2 + F3 + F4."""
    c = coeffs
    ux = deriv(u, 1)
    uxx = deriv(u, 2)
    hux = hilbert(ux)

    f1 = hilbert(deriv(u, 3))

    f2 = Field.zero(u.grid)
    if c.c1 != 0.0:
        f2 = f2 + c.c1 * dealiased_product([u, uxx])
    if c.c2 != 0.0:
        f2 = f2 + c.c2 * dealiased_product([ux, ux])
    if c.c3 != 0.0:
        f2 = f2 + c.c3 * dealiased_product([hux, hux])
    if c.c4 != 0.0:
        f2 = f2 + c.c4 * hilbert(dealiased_product([u, hilbert(uxx)]))

    f3 = Field.zero(u.grid)
    if c.c5 != 0.0:
        f3 = f3 + c.c5 * hilbert(dealiased_product([u, u, ux]))
    if c.c6 != 0.0:
        f3 = f3 + c.c6 * _c6_term(u, ux)
    if c.c7 != 0.0:
        f3 = f3 + c.c7 * dealiased_product([u, u, hux])

    f4 = Field.zero(u.grid)
    if c.c8 != 0.0:
        f4 = f4 - c.c8 * dealiased_product([u, u, u, u])

    return f1, f2, f3, f4


def nonlinearity_K(u: Field, coeffs: CoefficientSet) -> Field:
    f1, f2, f3, f4 = split_F(u, coeffs)
    return f1 + f2 + f3 + f4


def rhs(u: Field, params: SolverParams) -> Field:
    """d/dx K(u) - time_direction * epsilon * u_xxxx.

    The x-derivative kills the zero mode, so the mean (mass) is invariant.
    """
    out = deriv(nonlinearity_K(u, params.coeffs), 1)
    if params.epsilon != 0.0:
        out = out - params.time_direction * params.epsilon * deriv(u, 4)
    return out


class NonlinearEvaluator:
    """Fused evaluation of d/dx (F2 + F3 + F4) on raw rfft spectra.

    Used by the time steppers; equal (to rounding) to the Field-level route
    through split_F.  All products are formed once on the 3x padded grid and
    truncated a single time at the end, so in-band coefficients are exact --
    including the nested Hilbert transform in the c6 term, whose inner product
    u*u_x is kept at padded resolution before H is applied.
    """

    def __init__(self, grid: TorusGrid, coeffs: CoefficientSet):
        self.grid = grid
        self.coeffs = coeffs
        n = grid.n_points
        self.n = n
        self.m = PAD_FACTOR * n
        k_pad = np.arange(self.m // 2 + 1, dtype=float)
        self._d1 = 1j * k_pad
        self._d2 = -(k_pad**2)
        self._hilb = -1j * np.sign(k_pad)
        self._band = grid.spectrum_size
        k_band = grid.wavenumbers
        self._d1_band = 1j * k_band
        c = coeffs
        self._need_ux = any(x != 0.0 for x in (c.c2, c.c5, c.c6))
        self._need_hux = c.c3 != 0.0 or c.c7 != 0.0

    def _pad(self, spec: np.ndarray) -> np.ndarray:
        padded = np.zeros(self.m // 2 + 1, dtype=complex)
        padded[: self._band] = spec
        return padded

    def _phys(self, padded_spec: np.ndarray) -> np.ndarray:
        return np.fft.irfft(padded_spec * self.m, n=self.m)

    def flux_spectrum(self, spec: np.ndarray) -> np.ndarray:
        """Band spectrum of F2 + F3 + F4 at state spec (band rfft layout)."""
        c = self.coeffs
        if c.is_linear:
            return np.zeros(self._band, dtype=complex)

        sp = self._pad(spec)
        u = self._phys(sp)
        ux = self._phys(sp * self._d1) if self._need_ux else None
        hux = self._phys(sp * self._d1 * self._hilb) if self._need_hux else None
        direct = np.zeros(self.m)  # terms summed before one forward transform
        after_h = None  # terms that receive an outer Hilbert transform

        if c.c1 != 0.0 or c.c4 != 0.0:
            uxx = self._phys(sp * self._d2)
            if c.c1 != 0.0:
                direct += c.c1 * u * uxx
            if c.c4 != 0.0:
                huxx = self._phys(sp * self._d2 * self._hilb)
                after_h = c.c4 * u * huxx
        if c.c2 != 0.0:
            direct += c.c2 * ux * ux
        if c.c3 != 0.0:
            direct += c.c3 * hux * hux
        if c.c5 != 0.0:
            term = c.c5 * u * u * ux
            after_h = term if after_h is None else after_h + term
        if c.c6 != 0.0:
            q = np.fft.rfft(u * ux) / self.m
            hq = self._phys(q * self._hilb)
            direct += c.c6 * u * hq
        if c.c7 != 0.0:
            direct += c.c7 * u * u * hux
        if c.c8 != 0.0:
            direct -= c.c8 * u**4

        out = np.fft.rfft(direct) / self.m
        if after_h is not None:
            out = out + self._hilb * (np.fft.rfft(after_h) / self.m)
        out = out[: self._band].copy()
        out[-1] = 0.0
        return out

    def __call__(self, spec: np.ndarray) -> np.ndarray:
        """Band spectrum of d/dx (F2 + F3 + F4)."""
        return self._d1_band * self.flux_spectrum(spec)


def rhs_spectrum(spec: np.ndarray, grid: TorusGrid, params: SolverParams,
                 evaluator: NonlinearEvaluator | None = None) -> np.ndarray:
    """Full right-hand side on a raw spectrum (linear + nonlinear parts)."""
    if evaluator is None:
        evaluator = NonlinearEvaluator(grid, params.coeffs)
    k = grid.wavenumbers
    lin = (-1j * np.sign(k) * k**4 - params.time_direction * params.epsilon * k**4)
    out = lin * spec + evaluator(spec)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("right-hand side is non-finite")
    return out
