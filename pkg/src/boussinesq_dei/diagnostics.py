"""Norms, error functionals, mass, blow-up detection and order fitting."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DivergedError, ParameterError
from .grid import NodalField, forward_dft
from .stepper import Observer


def sobolev_norm(spectrum, m):
    """``sqrt(sum_l (1 + mu_l^2)^m |c_l|^2)``; any real order ``m`` is allowed."""
    c = spectrum.coeffs
    if not np.isfinite(c).all():
        raise DivergedError("sobolev_norm: non-finite coefficients")
    scale = np.abs(c).max()
    if scale == 0:
        return 0.0
    # scaled like hypot so tiny or huge coefficients do not under/overflow when squared
    c = c / scale
    weight = (1.0 + spectrum.grid.mu**2) ** m
    return float(scale * np.sqrt(np.sum(weight * (c.real**2 + c.imag**2))))


@dataclass(frozen=True)
class ErrorReport:
    m: float
    e_z: float
    e_dz: float
    total: float
    t: float

    def csv_row(self):
        return f"{self.t:.17g},{self.m:g},{self.e_z:.17g},{self.e_dz:.17g},{self.total:.17g}"


ERROR_CSV_HEADER = "t,m,e_z,e_dz,total"


def error_pair(state, exact, m):
    """``||I(z - z_exact)||_m + ||I(dz - dz_exact)||_{m-2}`` at the state's time.

    ``exact(x, t)`` returns nodal ``(z, dz/dt)`` of the reference solution.
    """
    if state.diverged:
        raise DivergedError(f"state diverged at t={state.t} (step {state.step})")
    grid = state.grid
    z_ex, dz_ex = exact(grid.nodes, state.t)
    e_z = sobolev_norm(state.zhat - forward_dft(NodalField(grid, z_ex)), m)
    e_dz = sobolev_norm(state.dzhat - forward_dft(NodalField(grid, dz_ex)), m - 2)
    return ErrorReport(m, e_z, e_dz, e_z + e_dz, state.t)


def mass(state):
    """Integral of the interpolant of ``z`` over the period: ``(b - a) Re c_0``."""
    if state.diverged:
        raise DivergedError(f"state diverged at t={state.t}")
    return state.grid.length * float(state.zhat.coeffs[0].real)


def max_amplitude(state):
    z, _ = state.nodal()
    return float(np.abs(z).max())


def aliasing_fraction(spectrum):
    """Share of ``sum |c_l|^2`` held by the top third of the band (``|l| > M/3``)."""
    power = np.abs(spectrum.coeffs) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float(power[~spectrum.grid.dealias_mask()].sum() / total)


@dataclass(frozen=True)
class BlowupPolicy:
    threshold: float = 1e6
    check_stride: int = 10

    def __post_init__(self):
        if not self.threshold > 0:
            raise ParameterError(f"blow-up threshold must be positive, got {self.threshold}")
        if int(self.check_stride) != self.check_stride or self.check_stride < 1:
            raise ParameterError(f"check_stride must be a positive integer, got {self.check_stride}")


class BlowupRecord(NamedTuple):
    t: float
    max_amplitude: float
    step: int


def detect_blowup(state, policy=BlowupPolicy()):
    """Record if ``max |z| >= threshold`` or the state is non-finite, else ``None``."""
    if state.diverged:
        return BlowupRecord(state.t, float("inf"), state.step)
    c = state.zhat.coeffs
    if not np.isfinite(c).all():
        return BlowupRecord(state.t, float("inf"), state.step)
    peak = float(np.abs(np.fft.ifft(c, norm="forward").real).max())
    if not np.isfinite(peak) or peak >= policy.threshold:
        return BlowupRecord(state.t, peak, state.step)
    return None


class BlowupObserver(Observer):
    """Stops :func:`~boussinesq_dei.stepper.evolve` at the first trigger."""

    def __init__(self, policy=BlowupPolicy()):
        self.policy = policy
        self.stride = policy.check_stride
        self.record = None

    def __call__(self, step_index, state):
        record = detect_blowup(state, self.policy)
        if record is not None and self.record is None:
            self.record = record
        return record is not None


class OrderFit(NamedTuple):
    slope: float
    intercept: float
    max_residual: float


def fit_order(samples):
    """Least-squares slope of ``log(error)`` against ``log(step)``.

    ``samples`` is a sequence of ``(step_size, error)`` pairs.
    """
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise ParameterError("need at least three (step, error) samples")
    if not (np.isfinite(data).all() and (data > 0).all()):
        raise ParameterError("step sizes and errors must be positive and finite")
    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    residual = np.abs(y - (slope * x + intercept)).max()
    return OrderFit(float(slope), float(intercept), float(residual))
