"""Periodic grid, discrete Fourier transforms and symbol tables.

Coefficients are stored internally in the FFT library's natural order
(index ``l mod M``); every public accessor speaks the signed mode index
``l = -M/2 .. M/2-1``.  The forward transform carries the ``1/M``
normalisation so that ``c_0`` is the mean of the nodal values.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DivergedError, DomainError, ParameterError, RealnessError

#: relative bound on the imaginary residue left by an inverse transform
REALNESS_TOL = 1e-12


@dataclass(frozen=True)
class TorusGrid:
    """``M`` equispaced nodes ``x_j = a + j*h`` on the periodic interval [a, b)."""

    a: float
    b: float
    M: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise ParameterError(f"need finite a < b, got a={self.a}, b={self.b}")
        if int(self.M) != self.M or self.M < 4 or self.M % 2:
            raise ParameterError(f"M must be an even integer >= 4, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def from_mesh(cls, a, b, h):
        """Grid with mesh size ``h``; ``(b - a) / h`` must be an even integer."""
        ratio = (b - a) / h
        M = int(round(ratio))
        if abs(ratio - M) > 1e-9 * max(1.0, ratio):
            raise ParameterError(f"(b-a)/h = {ratio} is not an integer")
        return cls(a, b, M)

    @property
    def length(self):
        return self.b - self.a

    @property
    def h(self):
        return (self.b - self.a) / self.M

    @cached_property
    def nodes(self):
        return self.a + np.arange(self.M) * self.h

    @cached_property
    def modes(self):
        """Signed mode index for each storage slot (FFT order)."""
        return np.fft.fftfreq(self.M, 1.0 / self.M).astype(np.int64)

    @cached_property
    def mu(self):
        """Wavenumbers ``2*pi*l/(b-a)`` in storage order."""
        return 2.0 * np.pi * self.modes / self.length

    @cached_property
    def theta(self):
        """Linear frequencies ``sqrt(mu^2 + mu^4)`` in storage order."""
        mu2 = self.mu**2
        return np.sqrt(mu2 + mu2 * mu2)

    def symbols(self):
        return SymbolTable.of(self)

    def storage_index(self, l):
        half = self.M // 2
        if not -half <= l < half:
            raise ParameterError(f"mode {l} outside [{-half}, {half - 1}]")
        return l % self.M

    def dealias_mask(self):
        """True for modes kept by the 2/3 rule (``|l| <= M/3``)."""
        return np.abs(self.modes) <= self.M // 3

    def sample(self, func):
        """Nodal field of ``func`` evaluated at the grid nodes."""
        return NodalField(self, np.asarray(func(self.nodes), dtype=float))


@dataclass(frozen=True)
class SymbolTable:
    """``mu`` and ``theta`` tables in signed order ``l = -M/2 .. M/2-1``."""

    l: np.ndarray
    mu: np.ndarray
    theta: np.ndarray

    @classmethod
    def of(cls, grid):
        shift = np.fft.fftshift
        return cls(shift(grid.modes), shift(grid.mu), shift(grid.theta))


@dataclass(frozen=True, eq=False)
class NodalField:
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.M,):
            raise ParameterError(f"expected {self.grid.M} nodal values, got shape {values.shape}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class SpectrumField:
    """Complex Fourier coefficients of a field on ``grid``.

    ``coeffs`` is in storage (FFT) order; use :meth:`signed`, :meth:`from_signed`
    or item access ``spec[l]`` for the signed convention.
    """

    grid: TorusGrid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.grid.M,):
            raise ParameterError(f"expected {self.grid.M} coefficients, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_signed(cls, grid, signed_coeffs):
        return cls(grid, np.fft.ifftshift(np.asarray(signed_coeffs, dtype=complex)))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.M, dtype=complex))

    @classmethod
    def single_mode(cls, grid, modes):
        """Spectrum with the given ``{l: c_l}`` entries and zeros elsewhere."""
        coeffs = np.zeros(grid.M, dtype=complex)
        for l, c in modes.items():
            coeffs[grid.storage_index(l)] = c
        return cls(grid, coeffs)

    def signed(self):
        return np.fft.fftshift(self.coeffs)

    def __getitem__(self, l):
        return self.coeffs[self.grid.storage_index(l)]

    def __add__(self, other):
        return SpectrumField(self.grid, self.coeffs + _coeffs_of(self, other))

    def __sub__(self, other):
        return SpectrumField(self.grid, self.coeffs - _coeffs_of(self, other))

    def __mul__(self, scalar):
        return SpectrumField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def symmetry_defect(self):
        """Largest ``|c_{-l} - conj(c_l)|`` relative to ``max |c_l|``."""
        c = self.coeffs
        mirrored = np.conj(c[(-self.grid.modes) % self.grid.M])
        scale = np.max(np.abs(c))
        if scale == 0:
            return 0.0
        return float(np.max(np.abs(c - mirrored)) / scale)


def _coeffs_of(spec, other):
    if other.grid != spec.grid:
        raise ParameterError("spectra live on different grids")
    return other.coeffs


def forward_dft(field):
    """Coefficients ``c_l = (1/M) sum_j v_j exp(-i mu_l (x_j - a))``."""
    values = field.values
    if not np.all(np.isfinite(values)):
        raise DivergedError("forward_dft: non-finite nodal values")
    return SpectrumField(field.grid, np.fft.fft(values, norm="forward"))


def inverse_dft_complex(spectrum):
    """Unnormalised synthesis ``sum_l c_l exp(i mu_l (x_j - a))`` without the realness check."""
    return np.fft.ifft(spectrum.coeffs, norm="forward")


def real_part_checked(values, tol=REALNESS_TOL, scale=None):
    """Drop the imaginary part of ``values`` after checking it is negligible.

    The residue is measured against ``max |Re values|`` or, if larger, ``scale``.
    """
    re = values.real
    im = np.abs(values.imag).max()
    own = np.abs(re).max()
    scale = own if scale is None else max(own, scale)
    if not (np.isfinite(im) and np.isfinite(scale)):
        raise DivergedError("inverse_dft: non-finite values")
    if im > tol * scale and im > np.finfo(float).tiny:
        raise RealnessError(f"imaginary residue {im:.3e} exceeds {tol:g} x {scale:.3e}")
    return re


def inverse_dft(spectrum):
    """Nodal values of the trigonometric interpolant; raises on a non-real result."""
    values = inverse_dft_complex(spectrum)
    return NodalField(spectrum.grid, real_part_checked(values))


def evaluate_interpolant(spectrum, x):
    """Value of ``sum_l c_l exp(i mu_l (x - a))`` at points ``x`` in [a, b] (real part)."""
    grid = spectrum.grid
    xs = np.asarray(x, dtype=float)
    if np.any(xs < grid.a) or np.any(xs > grid.b) or not np.all(np.isfinite(xs)):
        raise DomainError(f"x must lie in [{grid.a}, {grid.b}]")
    phase = np.exp(1j * np.multiply.outer(xs - grid.a, grid.mu))
    out = (phase @ spectrum.coeffs).real
    return float(out) if out.ndim == 0 else out
