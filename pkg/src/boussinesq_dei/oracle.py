"""Reference integrator for the semi-discrete coefficient ODE.

Integrates

    d/ds zhat_l  = dzhat_l
    d/ds dzhat_l = -theta_l^2 zhat_l - mu_l^2 rho_l(zhat)

with classical RK4 and tiny fixed steps.  It shares nothing with the
exponential stepper: wavenumbers are rebuilt from the signed mode indices and
the transforms are dense matrices summed straight from their definitions.
Only suitable for small ``M``.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .errors import DivergedError, ParameterError
from .grid import SpectrumField
from .stepper import QUADRATIC, WaveState

MAX_REFERENCE_MODES = 128


def dft_matrices(grid):
    """Dense ``(forward, inverse)`` matrices in storage order.

    ``forward[l, j] = exp(-i mu_l (x_j - a)) / M``; ``inverse`` is its
    unnormalised conjugate transpose.
    """
    M = grid.M
    j = np.arange(M)
    l = np.where(j < M // 2, j, j - M)
    phase = 2.0 * np.pi * np.outer(l, j) / M
    fwd = np.exp(-1j * phase) / M
    inv = np.ascontiguousarray(np.exp(1j * phase).T)
    return fwd, inv


def reference_evolve(initial, tau_ref, T, f=QUADRATIC):
    """Integrate ``initial`` to time ``initial.t + T`` with RK4 steps of ``tau_ref``."""
    grid = initial.grid
    if grid.M > MAX_REFERENCE_MODES:
        raise ParameterError(f"reference integrator is limited to M <= {MAX_REFERENCE_MODES}")
    if not tau_ref > 0:
        raise ParameterError(f"tau_ref must be positive, got {tau_ref}")
    ratio = T / tau_ref
    n = int(round(ratio))
    if n < 0 or abs(ratio - n) > 1e-8 * max(1.0, ratio):
        raise ParameterError(f"T={T} is not a multiple of tau_ref={tau_ref}")

    M = grid.M
    j = np.arange(M)
    l = np.where(j < M // 2, j, j - M)
    mu = 2.0 * np.pi * l / (grid.b - grid.a)
    mu2 = mu * mu
    theta2 = mu2 + mu2 * mu2
    fwd, inv = dft_matrices(grid)

    z = initial.zhat.coeffs.copy()
    dz = initial.dzhat.coeffs.copy()
    if f.code is not None:
        kernels.rk4_reference(z, dz, mu2, theta2, fwd, inv, float(tau_ref), n, f.code)
    else:
        _rk4_generic(z, dz, mu2, theta2, fwd, inv, tau_ref, n, f)
    if not (np.isfinite(z).all() and np.isfinite(dz).all()):
        raise DivergedError(
            f"reference integration overflowed; shrink tau_ref below {tau_ref:g} "
            f"(1e-4/max theta = {1e-4 / max(1.0, np.sqrt(theta2.max())):.3g})"
        )
    return WaveState(initial.t + n * tau_ref, SpectrumField(grid, z), SpectrumField(grid, dz), initial.step)


def _rk4_generic(z, dz, mu2, theta2, fwd, inv, tau, n, f):
    def rhs(zc, dzc):
        return dzc, -theta2 * zc - mu2 * (fwd @ f((inv @ zc).real))

    for _ in range(n):
        k1z, k1d = rhs(z, dz)
        k2z, k2d = rhs(z + 0.5 * tau * k1z, dz + 0.5 * tau * k1d)
        k3z, k3d = rhs(z + 0.5 * tau * k2z, dz + 0.5 * tau * k2d)
        k4z, k4d = rhs(z + tau * k3z, dz + tau * k3d)
        z += tau / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z)
        dz += tau / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)


def write_coefficients(path, spectrum):
    """Dump ``l real imag`` per line (signed order, 17 significant digits)."""
    grid = spectrum.grid
    with open(path, "w") as fh:
        for l, c in zip(np.fft.fftshift(grid.modes), spectrum.signed()):
            fh.write(f"{l} {c.real:.17g} {c.imag:.17g}\n")


def read_coefficients(path, grid):
    data = np.loadtxt(path, ndmin=2)
    if data.shape != (grid.M, 3):
        raise ParameterError(f"{path}: expected {grid.M} rows of 'l re im'")
    coeffs = np.zeros(grid.M, dtype=complex)
    for l, re, im in data:
        coeffs[grid.storage_index(int(l))] = re + 1j * im
    return SpectrumField(grid, coeffs)
