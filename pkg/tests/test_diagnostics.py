import csv
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from boussinesq_dei.cli import simulate
from boussinesq_dei.config import ExperimentConfig
from boussinesq_dei.diagnostics import (
    BlowupPolicy,
    aliasing_fraction,
    detect_blowup,
    error_pair,
    fit_order,
    mass,
    sobolev_norm,
)
from boussinesq_dei.errors import DivergedError, ParameterError
from boussinesq_dei.grid import NodalField, SpectrumField, TorusGrid, forward_dft
from boussinesq_dei.solutions import ExactSoliton, SolitonParams, initial_single
from boussinesq_dei.stepper import WaveState, evolve

FIXTURES = Path(__file__).parent / "fixtures"
G120 = TorusGrid(-60, 60, 64)


@pytest.mark.parametrize("m", [-1, 0, 1, 2.5, 3])
def test_norm_of_constant(m):
    assert sobolev_norm(SpectrumField.single_mode(G120, {0: -4.0}), m) == 4.0


def test_norm_single_mode():
    spec = SpectrumField.single_mode(G120, {1: 1.0})
    # (1 + (pi/60)^2)^(m/2) for m = 2, mpmath 40 digits
    assert sobolev_norm(spec, 2) == pytest.approx(1.0027415567780804, rel=1e-15)
    assert sobolev_norm(spec, 0) == 1.0


@pytest.mark.parametrize("scale", [1e-183, 1e-300, 1e180])
def test_norm_survives_extreme_magnitudes(scale):
    spec = SpectrumField(G120, np.ones(64, dtype=complex) * scale)
    assert sobolev_norm(spec, 0) == pytest.approx(8 * scale, rel=1e-14)


def test_norm_rejects_non_finite():
    with pytest.raises(DivergedError):
        sobolev_norm(SpectrumField.single_mode(G120, {3: np.nan}), 1)


spectra = arrays(np.complex128, 64, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))


@settings(max_examples=60, deadline=None)
@given(spectra, spectra, st.floats(-50, 50))
def test_norm_properties(c1, c2, alpha):
    u = SpectrumField(G120, c1)
    v = SpectrumField(G120, c2)
    norms = [sobolev_norm(u, m) for m in (-1, 0, 1, 2, 3)]
    assert all(a <= b * (1 + 1e-14) for a, b in zip(norms, norms[1:]))
    for m in (-1, 0, 1, 2, 3):
        assert sobolev_norm(u * alpha, m) == pytest.approx(abs(alpha) * sobolev_norm(u, m), rel=1e-12, abs=1e-300)
        assert sobolev_norm(u + v, m) <= (sobolev_norm(u, m) + sobolev_norm(v, m)) * (1 + 1e-14)


def exact_state(t=0.7):
    p = SolitonParams.traveling(0.375)
    ex = ExactSoliton(p)
    z, dz = ex(G120.nodes, t)
    return WaveState.from_nodal(NodalField(G120, z), NodalField(G120, dz), t), ex


def test_error_of_exact_samples_is_zero():
    state, ex = exact_state()
    rep = error_pair(state, ex, 2)
    assert rep.total <= 1e-12 and rep.total == rep.e_z + rep.e_dz


def test_error_of_single_perturbed_coefficient():
    state, ex = exact_state()
    eps = 1e-5
    bumped = WaveState(state.t, state.zhat + SpectrumField.single_mode(G120, {3: eps}), state.dzhat)
    rep = error_pair(bumped, ex, 2)
    assert rep.e_z == pytest.approx(eps * (1 + G120.mu[3] ** 2), rel=1e-9)
    assert rep.e_dz <= 1e-15


def test_error_pair_symmetric():
    state, ex = exact_state()
    rng = np.random.default_rng(2)
    zn, dzn = state.nodal()
    num = (zn + 1e-3 * rng.normal(size=64), dzn + 1e-3 * rng.normal(size=64))
    num_state = WaveState.from_nodal(NodalField(G120, num[0]), NodalField(G120, num[1]), state.t)
    forward = error_pair(num_state, ex, 1).total
    backward = error_pair(state, lambda x, t: num, 1).total
    assert forward == pytest.approx(backward, rel=1e-14)


def test_error_pair_refuses_diverged_state():
    state, ex = exact_state()
    bad = WaveState(state.t, state.zhat, state.dzhat, diverged=True)
    with pytest.raises(DivergedError):
        error_pair(bad, ex, 1)


def test_example1_error_matches_fixture():
    rows = list(csv.DictReader(open(FIXTURES / "example1_errors.csv")))
    final, record = simulate(ExperimentConfig.from_mapping({"preset": "example1"}))
    assert record is None and final.t == 2.0
    ex = ExactSoliton(SolitonParams.traveling(0.375))
    for row in rows:
        rep = error_pair(final, ex, float(row["m"]))
        assert rep.total == pytest.approx(float(row["total"]), rel=1e-6)
        assert rep.e_z == pytest.approx(float(row["e_z"]), rel=1e-6)


def test_mass_values():
    g = TorusGrid(-5.0, 15.0, 16)
    const = WaveState.from_nodal(NodalField(g, np.full(16, 0.25)), NodalField(g, np.zeros(16)))
    assert mass(const) == pytest.approx(0.25 * 20, rel=1e-15)
    soliton = WaveState.from_initial(initial_single(TorusGrid(-60, 60, 960), 0.375))
    assert mass(soliton) == pytest.approx(-3.0, abs=1e-10)
    later = evolve(soliton, 1e-2, 200)
    assert mass(later) == pytest.approx(mass(soliton), rel=1e-10)
    with pytest.raises(DivergedError):
        mass(WaveState(0.0, soliton.zhat, soliton.dzhat, diverged=True))


def test_mass_equals_trapezoid():
    rng = np.random.default_rng(5)
    g = TorusGrid(-3.0, 4.0, 32)
    v = rng.normal(size=32) + 2
    s = WaveState.from_nodal(NodalField(g, v), NodalField(g, v))
    assert mass(s) == pytest.approx(g.h * v.sum(), rel=1e-12)


def test_blowup_detection():
    state, _ = exact_state()
    assert detect_blowup(state) is None
    big = WaveState(1.5, state.zhat * 1e7, state.dzhat, step=15)
    rec = detect_blowup(big)
    assert rec.t == 1.5 and rec.step == 15 and rec.max_amplitude >= 1e6
    nan = WaveState(2.0, SpectrumField(G120, np.full(64, np.nan + 0j)), state.dzhat)
    assert detect_blowup(nan) is not None
    with pytest.raises(ParameterError):
        BlowupPolicy(threshold=0)


def test_fit_order_synthetic():
    taus = [0.2 / 2**k for k in range(6)]
    assert fit_order([(t, 3.7 * t**2) for t in taus]).slope == pytest.approx(2.0, abs=1e-10)
    assert fit_order([(t, 0.1 * t) for t in taus]).slope == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ParameterError):
        fit_order([(0.1, 1.0), (0.05, 0.0), (0.025, 1.0)])
    with pytest.raises(ParameterError):
        fit_order([(0.1, 1.0), (0.05, 0.5)])


def test_aliasing_fraction():
    g = TorusGrid(0, 1, 12)
    assert aliasing_fraction(SpectrumField.single_mode(g, {1: 1, -1: 1})) == 0.0
    assert aliasing_fraction(SpectrumField.single_mode(g, {5: 1, -5: 1})) == 1.0
