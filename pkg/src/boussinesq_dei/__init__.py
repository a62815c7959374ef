"""Deuflhard-type exponential integrator Fourier pseudospectral solver for the
"Good" Boussinesq equation ``z_tt - z_xx + z_xxxx - (f(z))_xx = 0``."""
from .diagnostics import (
    BlowupPolicy,
    ErrorReport,
    detect_blowup,
    error_pair,
    fit_order,
    mass,
    sobolev_norm,
)
from .grid import (
    NodalField,
    SpectrumField,
    TorusGrid,
    evaluate_interpolant,
    forward_dft,
    inverse_dft,
)
from .kernels import BACKEND
from .solutions import (
    SolitonParams,
    initial_pair,
    initial_single,
    preset_case,
    soliton,
    soliton_time_derivative,
    soliton_velocity,
)
from .stepper import (
    QUADRATIC,
    Nonlinearity,
    StepperCoefficients,
    WaveState,
    build_tables,
    evolve,
    nonlinear_spectrum,
    step,
)

__version__ = "0.1.0"
