"""Closed-form solitons, initial-data families and the preset catalogue."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .grid import NodalField

MAX_AMPLITUDE = 1.5


def soliton_velocity(A, sign=1):
    """Travelling-wave speed ``sign * sqrt(1 - 2A/3)``."""
    if not A > 0:
        raise ParameterError(f"amplitude must be positive, got {A}")
    if A > MAX_AMPLITUDE:
        raise ParameterError(f"A={A} > 3/2 gives an imaginary velocity")
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    return sign * math.sqrt(1.0 - 2.0 * A / 3.0)


@dataclass(frozen=True)
class SolitonParams:
    A: float
    x0: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        if not self.A > 0:
            raise ParameterError(f"amplitude must be positive, got {self.A}")
        if self.v != 0:
            if self.A > MAX_AMPLITUDE:
                raise ParameterError(f"A={self.A} > 3/2 admits no travelling wave")
            speed = math.sqrt(1.0 - 2.0 * self.A / 3.0)
            if not math.isclose(abs(self.v), speed, rel_tol=1e-14, abs_tol=1e-15):
                raise ParameterError(f"|v| must equal sqrt(1 - 2A/3) = {speed}, got {self.v}")

    @classmethod
    def traveling(cls, A, x0=0.0, sign=1):
        return cls(A, x0, soliton_velocity(A, sign))

    @classmethod
    def static(cls, A, x0=0.0):
        return cls(A, x0, 0.0)

    @property
    def k(self):
        return math.sqrt(self.A / 6.0)


def _phase(x, t, p):
    return p.k * (np.asarray(x, dtype=float) - p.v * t - p.x0)


def soliton(x, t, p):
    """``-A sech^2(sqrt(A/6) (x - v t - x0))``."""
    return -p.A / np.cosh(_phase(x, t, p)) ** 2


def soliton_time_derivative(x, t, p):
    """``-A v sqrt(2A/3) sech^2(xi) tanh(xi)``, the time derivative of :func:`soliton`."""
    xi = _phase(x, t, p)
    return -p.A * p.v * math.sqrt(2.0 * p.A / 3.0) * np.tanh(xi) / np.cosh(xi) ** 2


class ExactSoliton:
    """Exact solution callable ``(x, t) -> (z, dz/dt)``.

    Only meaningful when the soliton is an actual solution, i.e. travelling
    with the formula velocity or static at ``A = 3/2``.
    """

    def __init__(self, params):
        self.params = params

    def __call__(self, x, t):
        return soliton(x, t, self.params), soliton_time_derivative(x, t, self.params)


@dataclass(frozen=True, eq=False)
class InitialData:
    z0: NodalField
    z1: NodalField
    label: str = ""


def _params(A, x0, sign, static):
    return SolitonParams.static(A, x0) if static else SolitonParams.traveling(A, x0, sign)


def initial_single(grid, A, x0=0.0, sign=1, static=False):
    """One soliton pulse; ``static=True`` zeroes the initial velocity."""
    p = _params(A, x0, sign, static)
    x = grid.nodes
    label = f"{'static' if static else 'traveling'}(A={A}, x0={x0}, v={p.v:.17g})"
    return InitialData(
        NodalField(grid, soliton(x, 0.0, p)),
        NodalField(grid, soliton_time_derivative(x, 0.0, p)),
        label,
    )


def initial_pair(grid, A1, A2, x1, x2, signs=(1, -1), static=(False, False)):
    """Superposition of two single-soliton data sets.

    A zero amplitude drops that wave entirely.
    """
    z0 = np.zeros(grid.M)
    z1 = np.zeros(grid.M)
    labels = []
    for A, x0, sign, st in zip((A1, A2), (x1, x2), signs, static):
        if A == 0:
            continue
        part = initial_single(grid, A, x0, sign, st)
        z0 += part.z0.values
        z1 += part.z1.values
        labels.append(part.label)
    return InitialData(NodalField(grid, z0), NodalField(grid, z1), " + ".join(labels))


# Interaction cases.  The two waves start at x1 = -d (moving right) and
# x2 = +d (moving left) so that head-on cases actually collide.
_INTERACTION = {
    "i": dict(A1=0.2, A2=0.3, x1=-50.0, x2=50.0),
    "ii": dict(A1=0.2, A2=0.5, x1=-10.0, x2=10.0),
    "iii": dict(A1=0.37, A2=0.37, x1=-50.0, x2=50.0),
    "iv": dict(A1=0.38, A2=0.38, x1=-50.0, x2=50.0),
    "v": dict(A1=0.3, A2=0.45, x1=-50.0, x2=50.0),
    "vi": dict(A1=0.3, A2=0.46, x1=-50.0, x2=50.0),
    "vii": dict(A1=0.37, A2=1.5, x1=-50.0, x2=50.0, v2_sign=0),
    "viii": dict(A1=0.38, A2=1.5, x1=-50.0, x2=50.0, v2_sign=0),
    "ix": dict(A1=1.5, A2=1.5, x1=-30.0, x2=30.0, v1_sign=0, v2_sign=0),
    "x": dict(A1=1.5, A2=1.5, x1=-20.0, x2=20.0, v1_sign=0, v2_sign=0),
    "xi": dict(A1=0.2, A2=1.0, x1=-80.0, x2=-50.0, v1_sign=1, v2_sign=1),
}

_LARGE_DOMAIN = dict(a=-400.0, b=400.0, h=0.125, tau=1e-3)

EXAMPLE1 = dict(
    a=-60.0, b=60.0, h=0.125, tau=1e-3, T=2.0,
    family="single", A=0.375, x0=0.0, v_sign=1,
)


def _interaction_preset(case):
    params = dict(_LARGE_DOMAIN, T=100.0, family="pair", v1_sign=1, v2_sign=-1)
    params.update(_INTERACTION[case])
    return params


PRESET_IDS = ("example1",) + tuple(f"case-{c}" for c in _INTERACTION) + (
    "birth-A=<value>",
    "pulse-A=<value>",
)

_BIRTH = re.compile(r"^(birth|pulse)-A=(.+)$")


def preset_parameters(preset_id):
    """Config key/value dict for a preset identifier.

    ``birth-A=<value>`` is a travelling soliton of amplitude ``A`` (right
    moving); ``pulse-A=<value>`` is the same profile with zero velocity.
    """
    key = preset_id.strip()
    if key == "example1":
        return dict(EXAMPLE1)
    if key.startswith("case-") and key[5:] in _INTERACTION:
        return _interaction_preset(key[5:])
    m = _BIRTH.match(key)
    if m:
        try:
            A = float(m.group(2))
        except ValueError:
            raise ParameterError(f"bad amplitude in preset {preset_id!r}") from None
        static = m.group(1) == "pulse"
        # validates the amplitude range up front
        _params(A, 0.0, 1, static)
        params = dict(_LARGE_DOMAIN, T=30.0, family="single", A=A, x0=0.0, v_sign=0 if static else 1)
        return params
    raise ParameterError(
        f"unknown preset {preset_id!r}; valid ids: {', '.join(PRESET_IDS)}"
    )


def preset_case(preset_id):
    """Full :class:`~boussinesq_dei.config.ExperimentConfig` for a preset."""
    from .config import ExperimentConfig

    return ExperimentConfig.from_mapping({"preset": preset_id})
