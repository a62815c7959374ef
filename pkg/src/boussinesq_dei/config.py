"""Experiment configuration: a line-based ``key = value`` format.

Lines starting with ``#`` and blank lines are ignored.  Numbers may be
written as decimals or as rationals (``A = 3/8`` is the same as
``A = 0.375``).  ``preset = <id>`` loads a preset first; any other key in the
file overrides the preset value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction

from .errors import ConfigError, ParameterError
from .grid import TorusGrid
from .solutions import (
    ExactSoliton,
    SolitonParams,
    initial_pair,
    initial_single,
    preset_parameters,
)
from .stepper import get_nonlinearity

KEYS = (
    "a", "b", "M", "h", "tau", "T", "preset", "family", "A", "A1", "A2",
    "x0", "x1", "x2", "v_sign", "v1_sign", "v2_sign", "static", "nonlinearity",
    "m_orders", "snapshot_stride", "series_stride", "blowup_threshold",
    "out_dir", "strict_steps",
)
_REQUIRED = ("a", "b", "M", "tau", "T", "family")
_FLOAT_KEYS = {"a", "b", "h", "tau", "T", "A", "A1", "A2", "x0", "x1", "x2", "blowup_threshold"}
_INT_KEYS = {"M", "snapshot_stride", "series_stride"}
_SIGN_KEYS = {"v_sign", "v1_sign", "v2_sign"}
_BOOL_KEYS = {"static", "strict_steps"}
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


def parse_number(text, key=None):
    s = str(text).strip()
    try:
        if "/" in s:
            return float(Fraction(s))
        return float(s)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}", key) from None


def _coerce(key, raw):
    if key in _FLOAT_KEYS:
        return parse_number(raw, key)
    if key in _INT_KEYS:
        value = parse_number(raw, key)
        if value != int(value):
            raise ConfigError(f"expected an integer, got {raw!r}", key)
        return int(value)
    if key in _SIGN_KEYS:
        value = parse_number(raw, key)
        if value not in (-1, 0, 1):
            raise ConfigError(f"velocity sign must be -1, 0 or +1, got {raw!r}", key)
        return int(value)
    if key in _BOOL_KEYS:
        if isinstance(raw, bool):
            return raw
        s = str(raw).strip().lower()
        if s in _TRUE:
            return True
        if s in _FALSE:
            return False
        raise ConfigError(f"expected true/false, got {raw!r}", key)
    if key == "m_orders":
        if isinstance(raw, (list, tuple)):
            items = raw
        else:
            items = [p for p in str(raw).replace(",", " ").split() if p]
        if not items:
            raise ConfigError("empty list", key)
        return tuple(parse_number(p, key) for p in items)
    return str(raw).strip()


@dataclass(frozen=True)
class ExperimentConfig:
    a: float
    b: float
    M: int
    tau: float
    T: float
    family: str
    A: float = 0.0
    x0: float = 0.0
    v_sign: int = 1
    static: bool = False
    A1: float = 0.0
    A2: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    v1_sign: int = 1
    v2_sign: int = -1
    nonlinearity: str = "quadratic"
    m_orders: tuple = (1.0, 2.0, 3.0)
    snapshot_stride: int = 1000
    series_stride: int = 100
    blowup_threshold: float = 1e6
    out_dir: str = "out"
    strict_steps: bool = True
    preset: str = field(default="", compare=True)

    def __post_init__(self):
        self.validate()

    # -- construction -------------------------------------------------
    @classmethod
    def from_mapping(cls, mapping):
        values = {}
        if "preset" in mapping and mapping["preset"]:
            try:
                values.update(preset_parameters(str(mapping["preset"])))
            except ParameterError as exc:
                raise ConfigError(str(exc), "preset") from None
            values["preset"] = str(mapping["preset"]).strip()
        for key, raw in mapping.items():
            if key not in KEYS:
                raise ConfigError(f"unknown key (valid keys: {', '.join(KEYS)})", key)
            if key == "preset":
                continue
            values[key] = _coerce(key, raw)
        if "M" in mapping and "h" in mapping:
            # both given explicitly: they must agree
            if not math.isclose((values["b"] - values["a"]) / values["M"], values["h"], rel_tol=1e-12):
                raise ConfigError("M and h disagree", "h")
        if "h" in values:
            h = values.pop("h")
            if "M" not in mapping:
                for key in ("a", "b"):
                    if key not in values:
                        raise ConfigError("required to derive M from h", key)
                ratio = (values["b"] - values["a"]) / h
                if not math.isclose(ratio, round(ratio), rel_tol=0, abs_tol=1e-9 * max(1, ratio)):
                    raise ConfigError(f"(b-a)/h = {ratio} is not an integer", "h")
                values["M"] = int(round(ratio))
        for key in _REQUIRED:
            if key not in values:
                raise ConfigError("missing required key", key)
        return cls(**values)

    def validate(self):
        try:
            TorusGrid(self.a, self.b, self.M)
        except ParameterError as exc:
            raise ConfigError(str(exc), "M") from None
        if not self.tau > 0:
            raise ConfigError("time step must be positive", "tau")
        if not self.T >= 0:
            raise ConfigError("final time must be non-negative", "T")
        if self.strict_steps:
            ratio = self.T / self.tau
            if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
                raise ConfigError(
                    f"T/tau = {ratio} is not an integer; adjust tau (or set strict_steps = false)", "T"
                )
        if self.family not in ("single", "pair"):
            raise ConfigError("family must be 'single' or 'pair'", "family")
        try:
            get_nonlinearity(self.nonlinearity)
        except ParameterError as exc:
            raise ConfigError(str(exc), "nonlinearity") from None
        for key in ("snapshot_stride", "series_stride"):
            if getattr(self, key) < 1:
                raise ConfigError("stride must be >= 1", key)
        if not self.blowup_threshold > 0:
            raise ConfigError("must be positive", "blowup_threshold")
        try:
            self.initial_parameters()
        except ParameterError as exc:
            raise ConfigError(str(exc), "A" if self.family == "single" else "A1") from None

    # -- derived objects ----------------------------------------------
    @property
    def h(self):
        return (self.b - self.a) / self.M

    @property
    def n_steps(self):
        """Step count; outside strict mode ``T`` is rounded to a multiple of ``tau``."""
        return int(round(self.T / self.tau))

    def grid(self):
        return TorusGrid(self.a, self.b, self.M)

    def nonlinearity_fn(self):
        return get_nonlinearity(self.nonlinearity)

    def initial_parameters(self):
        """SolitonParams for each wave (validates amplitudes and signs)."""
        if self.family == "single":
            waves = [(self.A, self.x0, 0 if self.static else self.v_sign)]
        else:
            waves = [(self.A1, self.x1, self.v1_sign), (self.A2, self.x2, self.v2_sign)]
        out = []
        for A, x0, sign in waves:
            if self.family == "pair" and A == 0:
                continue
            out.append(SolitonParams.static(A, x0) if sign == 0 else SolitonParams.traveling(A, x0, sign))
        return out

    def initial_data(self, grid=None):
        grid = grid or self.grid()
        if self.family == "single":
            static = self.static or self.v_sign == 0
            return initial_single(grid, self.A, self.x0, self.v_sign or 1, static)
        return initial_pair(
            grid, self.A1, self.A2, self.x1, self.x2,
            signs=(self.v1_sign or 1, self.v2_sign or 1),
            static=(self.v1_sign == 0, self.v2_sign == 0),
        )

    def exact_solution(self):
        """Exact solution when the initial data is a single true soliton, else ``None``."""
        if self.family != "single" or self.nonlinearity != "quadratic":
            return None
        (p,) = self.initial_parameters()
        if p.v == 0 and p.A != 1.5:
            return None
        return ExactSoliton(p)

    # -- serialisation --------------------------------------------------
    def to_text(self):
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "preset" and not value:
                continue
            lines.append(f"{f.name} = {_format(value)}")
        return "\n".join(lines) + "\n"

    def with_overrides(self, **changes):
        return replace(self, **changes)


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


def parse_config(text):
    """Parse ``key = value`` lines into an :class:`ExperimentConfig`."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key", key)
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key", key)
        mapping[key] = value
    return ExperimentConfig.from_mapping(mapping)
