"""Spectral core: torus grid, real fields, Fourier multipliers, and exact
dealiased products.

Conventions
-----------
The domain is the 2*pi torus sampled at x_j = 2*pi*j/N.  Fourier coefficients
follow u_hat(k) = (2*pi)^-1 * integral(u(x) exp(-i k x) dx), i.e. the plain
trigonometric-polynomial coefficients; numerically u_hat = rfft(values)/N.
Parseval then reads ||u||_{L2}^2 = 2*pi * sum_k |u_hat(k)|^2 over all of Z.

The retained band is |k| <= k_max = N/2 - 1; the unmatched Nyquist mode N/2 is
forcibly zeroed after every multiplier application and every product so the
band stays symmetric.  Products of up to four fields are evaluated on a 3x
zero-padded grid, which makes every retained coefficient of the product (and
in particular every integral of a product of <= 4 band-limited fields) exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi
PAD_FACTOR = 3  # uniform zero-padding factor; covers products up to quartic

_MIN_POINTS = 8
_MAX_POINTS = 2**20


class ConfigError(ValueError):
    """A parameter is outside its documented domain."""


class GridMismatchError(ValueError):
    """Fields living on different grids were combined."""


class NonFiniteError(ValueError):
    """An operation received or produced non-finite samples."""


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid of n_points samples on the 2*pi torus."""

    n_points: int

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ConfigError(f"n_points must be an integer, got {n!r}")
        if n % 2 != 0 or not (_MIN_POINTS <= n <= _MAX_POINTS):
            raise ConfigError(
                f"n_points must be even and in [{_MIN_POINTS}, {_MAX_POINTS}], got {n}"
            )

    @property
    def k_max(self) -> int:
        """Largest retained wavenumber, N/2 - 1."""
        return self.n_points // 2 - 1

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_points) / self.n_points

    @property
    def wavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers 0..N/2 of the rfft layout, as floats."""
        return np.arange(self.n_points // 2 + 1, dtype=float)

    @property
    def spectrum_size(self) -> int:
        return self.n_points // 2 + 1


def make_grid(n_points: int) -> TorusGrid:
    """Validated TorusGrid constructor."""
    return TorusGrid(int(n_points))


class Field:
    """Immutable real-valued function on a TorusGrid.

    Holds physical samples and/or rfft-layout coefficients (u_hat = rfft/N),
    computing the missing view lazily.  The Nyquist coefficient is always
    zero in the spectral view; construct from band-limited data (|k| <= k_max)
    for the two views to agree exactly.
    """

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: TorusGrid, *, values=None, spectrum=None):
        if values is None and spectrum is None:
            raise ValueError("Field needs values or spectrum")
        self.grid = grid
        if values is not None:
            values = np.asarray(values, dtype=float)
            if values.shape != (grid.n_points,):
                raise GridMismatchError(
                    f"values shape {values.shape} does not match grid ({grid.n_points},)"
                )
            values = values.copy()
            values.setflags(write=False)
        if spectrum is not None:
            spectrum = np.asarray(spectrum, dtype=complex)
            if spectrum.shape != (grid.spectrum_size,):
                raise GridMismatchError(
                    f"spectrum shape {spectrum.shape} does not match grid "
                    f"({grid.spectrum_size},)"
                )
            spectrum = spectrum.copy()
            spectrum[0] = spectrum[0].real  # mean of a real field is real
            spectrum[-1] = 0.0  # Nyquist mode is outside the retained band
            spectrum.setflags(write=False)
        self._values = values
        self._spectrum = spectrum

    @classmethod
    def from_values(cls, grid: TorusGrid, values) -> "Field":
        return cls(grid, values=values)

    @classmethod
    def from_spectrum(cls, grid: TorusGrid, spectrum) -> "Field":
        return cls(grid, spectrum=spectrum)

    @classmethod
    def from_function(cls, grid: TorusGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return cls(grid, values=fn(grid.nodes))

    @classmethod
    def zero(cls, grid: TorusGrid) -> "Field":
        return cls(grid, values=np.zeros(grid.n_points))

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            n = self.grid.n_points
            vals = np.fft.irfft(self._spectrum * n, n=n)
            vals.setflags(write=False)
            self._values = vals
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            n = self.grid.n_points
            spec = np.fft.rfft(self._values) / n
            spec[-1] = 0.0
            spec.setflags(write=False)
            self._spectrum = spec
        return self._spectrum

    # -- linear arithmetic (spectra add; scalars scale) ----------------------

    def _check_same_grid(self, other: "Field"):
        if self.grid != other.grid:
            raise GridMismatchError(
                f"grids differ: {self.grid.n_points} vs {other.grid.n_points}"
            )

    def __add__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, spectrum=self.spectrum + other.spectrum)

    def __sub__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, spectrum=self.spectrum - other.spectrum)

    def __mul__(self, scalar) -> "Field":
        if isinstance(scalar, Field):
            raise TypeError("use dealiased_product for products of fields")
        return Field(self.grid, spectrum=self.spectrum * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, spectrum=-self.spectrum)

    def __repr__(self) -> str:
        return f"Field(n={self.grid.n_points}, l2={norm_l2(self):.6g})"


def harmonic(grid: TorusGrid, k: int, amplitude: float = 1.0, phase: float = 0.0) -> Field:
    """amplitude * cos(k x + phase)."""
    if not 0 <= k <= grid.k_max:
        raise ConfigError(f"mode {k} outside retained band 0..{grid.k_max}")
    return Field(grid, values=amplitude * np.cos(k * grid.nodes + phase))


def random_field(
    grid: TorusGrid,
    decay: float,
    rng: np.random.Generator | int,
    amplitude: float = 1.0,
    max_mode: int | None = None,
) -> Field:
    """Mean-zero field with |u_hat(k)| = amplitude * <k>^-decay and uniform
    random phases, k = 1..max_mode (default k_max).

    Phases are drawn sequentially from the lowest mode up, so the same seed on
    a finer grid extends the coarse-grid field instead of rescrambling it.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    kmax = grid.k_max if max_mode is None else int(max_mode)
    if not 1 <= kmax <= grid.k_max:
        raise ConfigError(f"max_mode must be in 1..{grid.k_max}")
    k = np.arange(1, kmax + 1, dtype=float)
    phases = rng.uniform(0.0, TWO_PI, size=kmax)
    spec = np.zeros(grid.spectrum_size, dtype=complex)
    spec[1 : kmax + 1] = amplitude * (1.0 + k**2) ** (-decay / 2.0) * np.exp(1j * phases)
    return Field(grid, spectrum=spec)


# -- multiplier symbols -------------------------------------------------------


def smoothstep(t: np.ndarray) -> np.ndarray:
    """C^2 ramp 6t^5 - 15t^4 + 10t^3 clamped to [0, 1]."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def psi_cutoff(x) -> np.ndarray:
    """High-pass shape: 0 for |x| <= 1, 1 for |x| >= 2, smoothstep between."""
    return smoothstep(np.abs(np.asarray(x, dtype=float)) - 1.0)


def rho_cutoff(x) -> np.ndarray:
    """Mollifier shape 1 - psi_cutoff: 1 on |x| <= 1, 0 on |x| >= 2."""
    return 1.0 - psi_cutoff(x)


def pow_abs(x, s: float) -> np.ndarray:
    """|x|^s with the convention |0|^0 = 1 (so s = 0 is the identity symbol)."""
    x = np.asarray(x, dtype=float)
    if s == 0:
        return np.ones_like(x)
    return np.abs(x) ** s


@dataclass(frozen=True)
class MultiplierSpec:
    """A Fourier multiplier, identified by kind and one real parameter.

    kinds: 'hilbert' (-i sgn k), 'deriv' ((ik)^order), 'frac_deriv' (|k|^s,
    identity for s=0), 'bessel_weight' ((1+k^2)^{s/2}), 'j_op' (psi(k)/|k|,
    0 at k=0), 'mollify' (rho(eta*k)).
    """

    kind: str
    order: float = 0.0

    _KINDS = ("hilbert", "deriv", "frac_deriv", "bessel_weight", "j_op", "mollify")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigError(f"unknown multiplier kind {self.kind!r}")
        if self.kind == "deriv" and (self.order != int(self.order) or self.order < 0):
            raise ConfigError("deriv order must be a nonnegative integer")
        if self.kind == "frac_deriv" and self.order < 0:
            raise ConfigError("frac_deriv order must be >= 0")
        if self.kind == "mollify" and not 0.0 < self.order < 1.0:
            raise ConfigError("mollify eta must satisfy 0 < eta < 1")

    @classmethod
    def hilbert(cls):
        return cls("hilbert")

    @classmethod
    def deriv(cls, k: int):
        return cls("deriv", float(k))

    @classmethod
    def frac_deriv(cls, s: float):
        return cls("frac_deriv", float(s))

    @classmethod
    def bessel_weight(cls, s: float):
        return cls("bessel_weight", float(s))

    @classmethod
    def j_op(cls):
        return cls("j_op")

    @classmethod
    def mollify(cls, eta: float):
        return cls("mollify", float(eta))

    def symbol(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if self.kind == "hilbert":
            return -1j * np.sign(k)
        if self.kind == "deriv":
            return (1j * k) ** int(self.order)
        if self.kind == "frac_deriv":
            return pow_abs(k, self.order).astype(complex)
        if self.kind == "bessel_weight":
            return ((1.0 + k**2) ** (self.order / 2.0)).astype(complex)
        if self.kind == "j_op":
            with np.errstate(divide="ignore", invalid="ignore"):
                sym = np.where(k == 0.0, 0.0, psi_cutoff(k) / np.where(k == 0.0, 1.0, np.abs(k)))
            return sym.astype(complex)
        if self.kind == "mollify":
            return rho_cutoff(self.order * k).astype(complex)
        raise AssertionError(self.kind)


def apply_symbol(f: Field, symbol: np.ndarray) -> Field:
    """Apply a pointwise spectral symbol (given on wavenumbers 0..N/2)."""
    spec = f.spectrum
    if not np.all(np.isfinite(spec)):
        raise NonFiniteError("field has non-finite content")
    return Field(f.grid, spectrum=spec * symbol)


def apply_multiplier(f: Field, m: MultiplierSpec) -> Field:
    return apply_symbol(f, m.symbol(f.grid.wavenumbers))


def hilbert(f: Field) -> Field:
    return apply_multiplier(f, MultiplierSpec.hilbert())


def deriv(f: Field, k: int = 1) -> Field:
    return apply_multiplier(f, MultiplierSpec.deriv(k))


def frac_deriv(f: Field, s: float) -> Field:
    return apply_multiplier(f, MultiplierSpec.frac_deriv(s))


def bessel_weight(f: Field, s: float) -> Field:
    return apply_multiplier(f, MultiplierSpec.bessel_weight(s))


def j_op(f: Field) -> Field:
    return apply_multiplier(f, MultiplierSpec.j_op())


def mollify(f: Field, eta: float) -> Field:
    return apply_multiplier(f, MultiplierSpec.mollify(eta))


def translate(f: Field, shift: float) -> Field:
    """Exact translation u(x) -> u(x - shift) via a spectral phase twist.

    Band-limited fields translate exactly for any real shift, not just
    integer multiples of the grid spacing.
    """
    phase = np.exp(-1j * f.grid.wavenumbers * float(shift))
    return Field(f.grid, spectrum=f.spectrum * phase)


# -- products and integrals ---------------------------------------------------


def _padded_values(spec: np.ndarray, n: int) -> np.ndarray:
    """Physical samples of the band-limited field on the PAD_FACTOR*n grid."""
    m = PAD_FACTOR * n
    padded = np.zeros(m // 2 + 1, dtype=complex)
    padded[: spec.size] = spec
    return np.fft.irfft(padded * m, n=m)


def _check_fields(fields: Sequence[Field], lo: int, hi: int) -> TorusGrid:
    if not lo <= len(fields) <= hi:
        raise ConfigError(f"expected {lo}..{hi} fields, got {len(fields)}")
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError("fields live on different grids")
    return grid


def dealiased_product(fields: Sequence[Field]) -> Field:
    """Pointwise product of 2..4 fields, exact on the retained band.

    All factors are zero-padded to the 3x grid, multiplied there, transformed
    back, and truncated; with <= 4 band-limited factors no aliased mode can
    reach the retained band, so the kept coefficients are exact.
    """
    grid = _check_fields(fields, 2, 4)
    n = grid.n_points
    prod = _padded_values(fields[0].spectrum, n)
    for f in fields[1:]:
        prod = prod * _padded_values(f.spectrum, n)
    spec = np.fft.rfft(prod)[: grid.spectrum_size] / (PAD_FACTOR * n)
    return Field(grid, spectrum=spec)


def integral(fields: Sequence[Field]) -> float:
    """Exact integral over the torus of a product of 1..4 band-limited fields."""
    grid = _check_fields(fields, 1, 4)
    if len(fields) == 1:
        return TWO_PI * fields[0].spectrum[0].real
    n = grid.n_points
    prod = _padded_values(fields[0].spectrum, n)
    for f in fields[1:]:
        prod = prod * _padded_values(f.spectrum, n)
    return TWO_PI * float(prod.mean())


def inner(f: Field, g: Field) -> float:
    """L2 pairing integral(f*g dx), exact for band-limited fields."""
    f._check_same_grid(g)
    a, b = f.spectrum, g.spectrum
    s = a[0].real * b[0].real + 2.0 * np.sum((a[1:] * b[1:].conj()).real)
    return TWO_PI * float(s)


def _weighted_l2(spec: np.ndarray, weight: np.ndarray) -> float:
    total = weight[0] * abs(spec[0]) ** 2 + 2.0 * np.sum(weight[1:] * np.abs(spec[1:]) ** 2)
    return float(np.sqrt(TWO_PI * total))


def norm_l2(f: Field) -> float:
    """||f||_{L2} via Parseval."""
    return _weighted_l2(f.spectrum, np.ones(f.grid.spectrum_size))


def norm_hs(f: Field, s: float) -> float:
    """Sobolev norm 2^{-1/2} (||f||^2 + ||D^s f||^2)^{1/2}, s >= 0."""
    if s < 0:
        raise ConfigError(f"norm_hs needs s >= 0, got {s}")
    k = f.grid.wavenumbers
    weight = 0.5 * (1.0 + pow_abs(k, s) ** 2)
    return _weighted_l2(f.spectrum, weight)


def norm_hneg1(f: Field) -> float:
    """Negative-order norm (2*pi sum <k>^-2 |f_hat|^2)^{1/2}."""
    k = f.grid.wavenumbers
    return _weighted_l2(f.spectrum, 1.0 / (1.0 + k**2))


def refine_field(f: Field, grid: TorusGrid) -> Field:
    """The same trigonometric polynomial represented on a finer grid."""
    if grid.n_points < f.grid.n_points:
        raise ConfigError("refine_field target grid must not be coarser")
    spec = np.zeros(grid.spectrum_size, dtype=complex)
    spec[: f.grid.spectrum_size] = f.spectrum
    return Field(grid, spectrum=spec)
