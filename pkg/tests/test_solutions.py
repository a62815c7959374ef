import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boussinesq_dei.diagnostics import mass
from boussinesq_dei.errors import ParameterError
from boussinesq_dei.grid import TorusGrid
from boussinesq_dei.solutions import (
    PRESET_IDS,
    SolitonParams,
    initial_pair,
    initial_single,
    preset_case,
    soliton,
    soliton_time_derivative,
    soliton_velocity,
)
from boussinesq_dei.stepper import WaveState


def test_velocity_values():
    assert soliton_velocity(1.5) == 0.0
    assert soliton_velocity(0.375, 1) == pytest.approx(np.sqrt(3) / 2, rel=1e-15)
    # mpmath, 40 digits
    assert soliton_velocity(0.2, -1) == pytest.approx(-0.9309493362512627, rel=1e-15)


@pytest.mark.parametrize("A", [1.6, 0.0, -1.0])
def test_velocity_rejects_bad_amplitude(A):
    with pytest.raises(ParameterError):
        soliton_velocity(A)


def test_params_enforce_formula_velocity():
    with pytest.raises(ParameterError):
        SolitonParams(0.375, 0.0, 0.5)
    assert SolitonParams.static(2.0).v == 0


def test_soliton_values():
    p = SolitonParams.traveling(0.375, 3.0)
    assert soliton(3.0 + p.v * 2.0, 2.0, p) == -0.375
    q = SolitonParams.traveling(0.375, 0.0)
    # -0.375 sech^2(1), mpmath 40 digits
    assert soliton(4.0, 0.0, q) == pytest.approx(-0.15749037810525978, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 1.5), st.floats(-20, 20), st.floats(-10, 10), st.floats(0, 30), st.floats(-5, 5))
def test_profile_even_and_translation_invariant(A, x0, t, d, delta):
    p = SolitonParams.traveling(A, x0)
    c = x0 + p.v * t
    assert soliton(c + d, t, p) == pytest.approx(soliton(c - d, t, p), rel=1e-9, abs=1e-300)
    assert soliton(c + d, t, p) == pytest.approx(soliton(c + d - p.v * delta, t - delta, p), rel=1e-9, abs=1e-300)


def test_time_derivative_simple_cases():
    p = SolitonParams.traveling(0.5, 1.0)
    assert soliton_time_derivative(1.0 + p.v * 3, 3.0, p) == 0.0
    s = SolitonParams.static(0.5)
    assert np.all(soliton_time_derivative(np.linspace(-5, 5, 11), 1.0, s) == 0)


def test_time_derivative_central_difference():
    rng = np.random.default_rng(0)
    p = SolitonParams.traveling(0.375, 0.0, -1)
    eps = 1e-6
    x = rng.uniform(-30, 30, 100)
    t = rng.uniform(-10, 10, 100)
    fd = (soliton(x, t + eps, p) - soliton(x, t - eps, p)) / (2 * eps)
    assert np.abs(fd - soliton_time_derivative(x, t, p)).max() <= 1e-8


def spectral_derivative(v, L, order):
    k = 2 * np.pi * np.fft.fftfreq(len(v), L / len(v))
    return np.fft.ifft((1j * k) ** order * np.fft.fft(v)).real


def test_soliton_solves_the_equation():
    L, M = 120.0, 2048
    x = -60 + np.arange(M) * L / M
    rng = np.random.default_rng(3)
    p = SolitonParams.traveling(0.375, 0.0)
    for t in rng.uniform(0, 5, 4):
        z = soliton(x, t, p)
        eps = 1e-4
        z_tt = (soliton(x, t + eps, p) - 2 * z + soliton(x, t - eps, p)) / eps**2
        res = z_tt - spectral_derivative(z, L, 2) + spectral_derivative(z, L, 4) - spectral_derivative(z * z, L, 2)
        assert np.abs(res).max() <= 1e-6


def test_initial_single_modes():
    g = TorusGrid(-60, 60, 960)
    static = initial_single(g, 0.375, static=True)
    assert np.all(static.z1.values == 0)
    trav = initial_single(g, 0.375)
    assert trav.z0.values.min() == -0.375
    assert g.nodes[np.argmin(trav.z0.values)] == 0.0


def test_traveling_data_is_translating():
    g = TorusGrid(-60, 60, 960)
    data = initial_single(g, 0.375)
    v = soliton_velocity(0.375)
    dz0 = np.fft.ifft(1j * g.mu * np.fft.fft(data.z0.values)).real
    assert np.abs(data.z1.values + v * dz0).max() <= 1e-8


def test_pair_reduces_to_single():
    g = TorusGrid(-100, 100, 512)
    pair = initial_pair(g, 0.3, 0.0, 5.0, -5.0)
    single = initial_single(g, 0.3, 5.0)
    np.testing.assert_array_equal(pair.z0.values, single.z0.values)
    np.testing.assert_array_equal(pair.z1.values, single.z1.values)


def test_symmetric_pair_parity():
    g = TorusGrid(-100, 100, 512)
    data = initial_pair(g, 0.3, 0.3, -20.0, 20.0, signs=(1, -1))
    mirror = (-np.arange(g.M)) % g.M
    assert np.abs(data.z0.values - data.z0.values[mirror]).max() <= 1e-12
    # mirror-image approaching waves: the velocity field is even as well
    assert np.abs(data.z1.values - data.z1.values[mirror]).max() <= 1e-12
    assert np.abs(data.z1.values).max() > 0.01


def test_case_i_nodal_values_match_formula():
    cfg = preset_case("case-i")
    g = cfg.grid()
    data = cfg.initial_data(g)
    p1 = SolitonParams.traveling(0.2, -50.0, 1)
    p2 = SolitonParams.traveling(0.3, 50.0, -1)
    x = g.nodes
    np.testing.assert_allclose(data.z0.values, soliton(x, 0, p1) + soliton(x, 0, p2), rtol=0, atol=1e-15)
    np.testing.assert_allclose(
        data.z1.values, soliton_time_derivative(x, 0, p1) + soliton_time_derivative(x, 0, p2), rtol=0, atol=1e-15
    )


@pytest.mark.parametrize("A", [0.2, 0.3, 0.375, 1.0, 1.5])
def test_soliton_mass(A):
    g = TorusGrid(-60, 60, 960)
    m = mass(WaveState.from_initial(initial_single(g, A)))
    k = np.sqrt(A / 6)
    # exact integral over the truncated interval
    assert m == pytest.approx(-2 * A / k * np.tanh(60 * k), abs=1e-10)
    if A >= 0.375:
        assert m == pytest.approx(-2 * np.sqrt(6 * A), abs=1e-10)


def test_presets():
    i = preset_case("case-i")
    assert (i.A1, i.A2, i.x1, i.x2, i.v1_sign, i.v2_sign) == (0.2, 0.3, -50.0, 50.0, 1, -1)
    assert (i.a, i.b, i.h, i.tau, i.T) == (-400, 400, 0.125, 1e-3, 100)
    xi = preset_case("case-xi")
    assert (xi.x1, xi.x2, xi.A1, xi.A2, xi.v1_sign, xi.v2_sign) == (-80, -50, 0.2, 1.0, 1, 1)
    iv = preset_case("case-iv")
    assert (iv.x1, iv.x2, iv.A1, iv.A2) == (-50, 50, 0.38, 0.38)
    vii = preset_case("case-vii")
    assert vii.v2_sign == 0 and vii.A2 == 1.5
    ex = preset_case("example1")
    assert (ex.A, ex.x0, ex.a, ex.b, ex.M) == (0.375, 0.0, -60, 60, 960)
    birth = preset_case("birth-A=1.3")
    assert birth.A == 1.3 and birth.v_sign == 1 and birth.T == 30
    assert preset_case("pulse-A=0.6").v_sign == 0


def test_unknown_preset_lists_ids():
    from boussinesq_dei.errors import ConfigError

    with pytest.raises(ConfigError) as info:
        preset_case("case-xii")
    assert "case-xi" in str(info.value) and "example1" in str(info.value)
    assert "example1" in PRESET_IDS
