"""Deuflhard-type exponential integrator in Fourier coefficient space.

Each Fourier mode ``l != 0`` of the pseudospectral system obeys a forced
harmonic oscillator with frequency ``theta_l``.  The step applies the exact
rotation to the linear part and the trapezoid rule to the nonlinear
convolution integral, which yields the explicit, time-symmetric,
second-order update

    z+  = cos(th t) z + sin(th t)/th dz - t mu^2 sin(th t)/(2 th) rho(z)
    dz+ = -th sin(th t) z + cos(th t) dz - t mu^2/2 [cos(th t) rho(z) + rho(z+)]

with ``rho = I_M f(z)``.  The zero mode evolves linearly: ``z0+ = z0 + t dz0``
and ``dz0`` never changes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DivergedError, ObserverError, ParameterError
from .grid import (
    NodalField,
    SpectrumField,
    TorusGrid,
    forward_dft,
    inverse_dft_complex,
    real_part_checked,
)


@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise map ``f`` applied to nodal values.

    ``code`` identifies the maps the compiled reference kernel knows about
    (0 zero, 1 identity, 2 square, 3 cube); leave it ``None`` for anything else.
    """

    func: Callable[[np.ndarray], np.ndarray]
    name: str
    code: Optional[int] = None

    def __call__(self, values):
        return self.func(values)


QUADRATIC = Nonlinearity(lambda z: z * z, "quadratic", 2)
CUBIC = Nonlinearity(lambda z: z * z * z, "cubic", 3)
ZERO = Nonlinearity(np.zeros_like, "zero", 0)
IDENTITY = Nonlinearity(lambda z: z, "identity", 1)

NONLINEARITIES = {f.name: f for f in (QUADRATIC, CUBIC, ZERO, IDENTITY)}


def get_nonlinearity(name):
    try:
        return NONLINEARITIES[name]
    except KeyError:
        raise ParameterError(
            f"unknown nonlinearity {name!r}; choose from {sorted(NONLINEARITIES)}"
        ) from None


@dataclass(frozen=True, eq=False)
class StepperCoefficients:
    """Per-mode update weights for one ``(grid, tau)`` pair, in storage order.

    Slot 0 (``l = 0``) holds the neutral values ``(1, tau, 0, 0, 0, 0)``; the
    kernels apply the linear zero-mode branch explicitly and never read it.
    """

    grid: TorusGrid
    tau: float
    cos_t: np.ndarray
    sinc_t: np.ndarray
    pz: np.ndarray
    dz_t: np.ndarray
    qc: np.ndarray
    qn: np.ndarray

    def signed(self, name):
        """Table ``name`` in signed order ``l = -M/2 .. M/2-1``."""
        return np.fft.fftshift(getattr(self, name))


def build_tables(grid, tau, *, allow_negative=False):
    """Precompute the trigonometric weights for time step ``tau``.

    Negative steps are only accepted with ``allow_negative=True`` (used for
    time-reversal checks).
    """
    tau = float(tau)
    if not np.isfinite(tau) or tau == 0 or (tau < 0 and not allow_negative):
        raise ParameterError(f"time step must be positive, got {tau}")
    mu2 = grid.mu**2
    theta = grid.theta
    nz = theta != 0
    th = theta[nz]
    s = np.sin(th * tau)

    cos_t = np.ones(grid.M)
    sinc_t = np.full(grid.M, tau)
    pz = np.zeros(grid.M)
    dz_t = np.zeros(grid.M)
    qc = np.zeros(grid.M)
    qn = np.zeros(grid.M)

    cos_t[nz] = np.cos(th * tau)
    sinc_t[nz] = s / th
    pz[nz] = tau * mu2[nz] * s / (2.0 * th)
    dz_t[nz] = th * s
    qn[nz] = 0.5 * tau * mu2[nz]
    qc[nz] = qn[nz] * cos_t[nz]
    return StepperCoefficients(grid, tau, cos_t, sinc_t, pz, dz_t, qc, qn)


@dataclass(frozen=True, eq=False)
class WaveState:
    """Spectra of ``z`` and ``dz/dt`` at time ``t`` after ``step`` steps.

    ``diverged`` marks a state whose successor was non-finite; the spectra are
    then the last finite ones.
    """

    t: float
    zhat: SpectrumField
    dzhat: SpectrumField
    step: int = 0
    diverged: bool = False

    def __post_init__(self):
        if self.zhat.grid != self.dzhat.grid:
            raise ParameterError("zhat and dzhat live on different grids")

    @property
    def grid(self):
        return self.zhat.grid

    @classmethod
    def from_nodal(cls, z0, z1, t=0.0):
        return cls(float(t), forward_dft(z0), forward_dft(z1))

    @classmethod
    def from_initial(cls, data, t=0.0):
        return cls.from_nodal(data.z0, data.z1, t)

    def nodal(self):
        """``(z, dz)`` nodal values of the interpolants.

        Both imaginary residues are judged against the larger of the two fields,
        since a nearly-zero velocity still carries roundoff from ``z``.
        """
        z = inverse_dft_complex(self.zhat)
        dz = inverse_dft_complex(self.dzhat)
        scale = max(np.abs(z.real).max(), np.abs(dz.real).max())
        return real_part_checked(z, scale=scale), real_part_checked(dz, scale=scale)


def _nonlinear_coeffs(grid, coeffs, f, dealias):
    values = real_part_checked(np.fft.ifft(coeffs, norm="forward"))
    out = np.fft.fft(f(values), norm="forward")
    if dealias:
        out[~grid.dealias_mask()] = 0
    return out


def nonlinear_spectrum(zhat, f, *, dealias=False):
    """Coefficients of the interpolant of ``f(z)`` evaluated at the nodes."""
    return SpectrumField(zhat.grid, _nonlinear_coeffs(zhat.grid, zhat.coeffs, f, dealias))


def step(state, tables, f=QUADRATIC, *, dealias=False):
    """Advance ``state`` by one step of size ``tables.tau``.

    A non-finite result does not raise: the input state is returned with
    ``diverged=True``.
    """
    return _step(state, tables, f, dealias, state.t + tables.tau)


def _step(state, tables, f, dealias, t_new):
    if state.diverged:
        raise DivergedError(f"cannot step a diverged state (t={state.t}, step={state.step})")
    grid = state.grid
    if tables.grid != grid:
        raise ParameterError("stepper tables were built for a different grid")
    z = state.zhat.coeffs
    dz = state.dzhat.coeffs
    z_new = np.empty_like(z)
    dz_new = np.empty_like(dz)
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            rho0 = _nonlinear_coeffs(grid, z, f, dealias)
            kernels.advance_position(z, dz, rho0, tables.cos_t, tables.sinc_t, tables.pz, tables.tau, z_new)
            rho1 = _nonlinear_coeffs(grid, z_new, f, dealias)
        except (DivergedError, FloatingPointError):
            return replace(state, diverged=True)
        kernels.advance_velocity(
            z, dz, rho0, rho1, tables.dz_t, tables.cos_t, tables.qc, tables.qn, dz_new
        )
    if not (np.isfinite(z_new).all() and np.isfinite(dz_new).all()):
        return replace(state, diverged=True)
    return WaveState(
        t_new, SpectrumField(grid, z_new), SpectrumField(grid, dz_new), state.step + 1
    )


class Observer:
    """Base class for callbacks run by :func:`evolve` every ``stride`` steps.

    ``__call__(step_index, state)`` may return a truthy value to stop the run;
    the state is then flagged as diverged (used by blow-up detection).
    """

    stride = 1

    def __call__(self, step_index, state):
        raise NotImplementedError


def evolve(state, tau, n_steps, f=QUADRATIC, observers=(), *, tables=None, dealias=False):
    """Apply :func:`step` ``n_steps`` times.

    Observers are called with ``(step_index, state)`` whenever
    ``step_index % observer.stride == 0``, including the starting state.
    Times are computed as ``t_start + k * tau`` so they carry no accumulated
    rounding.  Returns early with ``diverged=True`` on non-finite values or
    when an observer asks to stop.
    """
    if n_steps < 0 or int(n_steps) != n_steps:
        raise ParameterError(f"n_steps must be a non-negative integer, got {n_steps}")
    if tables is None:
        tables = build_tables(state.grid, tau, allow_negative=tau < 0)
    elif tables.tau != tau:
        raise ParameterError("tables were built for a different time step")
    t0, k0 = state.t, state.step

    def notify(current):
        for obs in observers:
            if (current.step - k0) % obs.stride:
                continue
            try:
                verdict = obs(current.step, current)
            except Exception as exc:
                raise ObserverError(current.step, current.t, exc) from exc
            if verdict:
                return True
        return False

    if notify(state):
        return replace(state, diverged=True)
    for k in range(1, int(n_steps) + 1):
        state = _step(state, tables, f, dealias, t0 + k * tau)
        if state.diverged:
            return state
        if observers and notify(state):
            return replace(state, diverged=True)
    return state


def nodal_state(grid, z0, z1, t=0.0):
    """WaveState from raw nodal arrays."""
    return WaveState.from_nodal(NodalField(grid, z0), NodalField(grid, z1), t)
