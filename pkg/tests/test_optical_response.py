import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from rydswitch import presets
from rydswitch.core import LadderParams
from rydswitch.optical_response import (
    BadGrid,
    DividedPole,
    chi_dimensionless,
    chi_from_lindblad,
    group_delay,
    spectrum,
    transfer_amplitude,
    transfer_function,
    transmission,
)


def test_no_coupling_on_resonance_is_pure_absorption():
    p = LadderParams.from_linewidths(3.0, 1.0)
    assert chi_dimensionless(0.0, p) == pytest.approx(1j, abs=1e-15)


def test_perfect_transparency_on_two_photon_resonance():
    p = LadderParams.from_linewidths(3.0, 0.0, omega_c=5.0)
    assert chi_dimensionless(0.0, p) == 0


def test_shifted_eit_peak_value():
    # 4 i gamma_rg gamma_eg / (omega_c^2 + 4 gamma_rg gamma_eg) = 1.2 i / 122.2
    f = chi_dimensionless(3.2, presets.EIT_SHIFTED)
    assert f.imag == pytest.approx(1.2 / 122.2, rel=1e-12)
    assert f.real == pytest.approx(0.0, abs=1e-12)
    assert f.imag == pytest.approx(0.009820, abs=5e-7)


def test_no_coupling_limit_is_regular_at_zero_dephasing():
    p = LadderParams.from_linewidths(3.0, 0.0, omega_c=0.0)
    assert chi_dimensionless(0.0, p) == pytest.approx(1j, abs=1e-15)
    grid = np.array([-1.0, 0.5])
    expected = 4 * grid * 3.0 / (-4 * grid * (grid + 3.0j))
    np.testing.assert_allclose(chi_dimensionless(grid, p), expected, rtol=1e-14)


def test_pole_guard():
    # with coupling on, the denominator only vanishes for gamma_eg = gamma_rg = 0
    with pytest.raises(DividedPole):
        chi_dimensionless(0.0, LadderParams(gamma_e=1e-10, omega_c=1e-20))


def test_opaque_limit():
    t = transmission(0.0, presets.ABSORPTION.replace(gamma_dr=1.0))
    assert t == pytest.approx(math.exp(-20) + 0.04, abs=1e-12)


def test_eit_peak_transmission():
    t = transmission(3.2, presets.EIT_SHIFTED)
    assert t == pytest.approx(math.exp(-20 * 1.2 / 122.2) + 0.04, rel=1e-12)
    assert t == pytest.approx(0.8617, abs=5e-5)


def test_perfect_eit_transmits_everything():
    p = LadderParams.from_linewidths(3.0, 0.0, omega_c=11.0, od=20.0)
    assert transmission(0.0, p) == 1.0


def test_flat_spectrum_without_medium():
    p = LadderParams(od=0.0, a0=0.04)
    s = spectrum(np.linspace(-10, 10, 11), p)
    np.testing.assert_allclose(s.transmission, 1.04)


def test_gate_off_peak_at_zero_detuning():
    grid = np.linspace(-20, 20, 401)
    s = spectrum(grid, presets.GATE_OFF)
    assert grid[np.argmax(s.transmission)] == pytest.approx(0.0, abs=1e-12)
    # Autler-Townes minima near +-omega_c/2
    left = grid[grid < 0][np.argmin(s.transmission[grid < 0])]
    right = grid[grid > 0][np.argmin(s.transmission[grid > 0])]
    assert abs(abs(left) - 3.4) < 0.5 and abs(right - 3.4) < 0.5


def test_gate_on_blocks_transmission():
    off = transmission(0.0, presets.GATE_OFF)
    on = transmission(0.0, presets.GATE_ON)
    assert off - on > 0.1


@pytest.mark.parametrize("grid", [[0.0], [1.0, 0.0], [0.0, 0.0, 1.0]])
def test_bad_grid(grid):
    with pytest.raises(BadGrid):
        spectrum(grid, presets.GATE_OFF)


def test_transfer_amplitude_trivial_cases():
    assert transfer_amplitude(1.0, LadderParams(od=0.0)).amplitude == 1
    p = LadderParams.from_linewidths(3.0, 0.0, omega_c=5.0, od=10.0)
    assert transfer_amplitude(0.0, p).amplitude == 1


def test_transfer_amplitude_matches_transmission():
    grid = np.linspace(-30, 30, 401)
    for p in (presets.GATE_OFF, presets.GATE_ON, presets.EIT_SHIFTED, presets.ABSORPTION):
        amp = transfer_function(grid, p)
        assert np.max(np.abs(np.abs(amp) ** 2 - (transmission(grid, p) - p.a0))) < 1e-12
        sample = transfer_amplitude(1.5, p)
        assert abs(sample.amplitude) <= 1.0


def analytic_group_delay_ns(od, gamma_eg, gamma_rg, omega_c, at=0.0):
    """Symbolic derivative of (od/2) Re f at ``at``, converted to ns."""
    x = sp.symbols("x", real=True)
    f = 4 * (x + sp.I * gamma_rg) * gamma_eg / (omega_c**2 - 4 * (x + sp.I * gamma_rg) * (x + sp.I * gamma_eg))
    dphase = sp.diff(sp.re(sp.expand_complex(f)), x).subs(x, at)
    return float(od / 2 * dphase) * 1e3 / (2 * math.pi)


def test_group_delay_zero_without_medium():
    assert group_delay(LadderParams(od=0.0, omega_c=5.0)) == 0.0


def test_group_delay_matches_symbolic_derivative():
    p = LadderParams.from_linewidths(3.07, 0.0, omega_c=6.8, od=8.0)
    oracle = analytic_group_delay_ns(8.0, 3.07, 0.0, 6.8)
    assert group_delay(p) == pytest.approx(oracle, rel=1e-6)
    # closed form of that derivative: 2 od gamma_eg / omega_c^2 (in 1/(2pi MHz))
    assert oracle == pytest.approx(2 * 8.0 * 3.07 / 6.8**2 * 1e3 / (2 * math.pi), rel=1e-12)


def test_group_delay_symbolic_with_dephasing_and_detuning():
    p = LadderParams.from_linewidths(3.0, 0.2, omega_c=9.0, od=15.0)
    assert group_delay(p, 0.7) == pytest.approx(analytic_group_delay_ns(15.0, 3.0, 0.2, 9.0, 0.7), rel=1e-5)


def test_group_delay_linear_in_od():
    p = presets.GATE_OFF
    assert group_delay(p.replace(od=16.0)) == pytest.approx(2 * group_delay(p), rel=1e-12)


def test_group_delay_positive_in_window():
    assert group_delay(presets.GATE_OFF) > 0


@settings(max_examples=100, deadline=None)
@given(
    omega_c=st.one_of(st.just(0.0), st.floats(1e-3, 30.0)),
    gamma_eg=st.floats(0.1, 10.0),
    gamma_rg=st.floats(0.0, 5.0),
    od=st.floats(0.0, 50.0),
    dw=st.floats(0.0, 40.0),
)
def test_symmetric_without_shift(omega_c, gamma_eg, gamma_rg, od, dw):
    p = LadderParams.from_linewidths(gamma_eg, gamma_rg, omega_c=omega_c, od=od)
    assert transmission(dw, p) == pytest.approx(transmission(-dw, p), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    gamma_eg=st.floats(0.5, 10.0),
    ratio=st.floats(0.0, 1 / 30),
    factor=st.floats(3.0, 10.0),
    od=st.floats(1.0, 40.0),
)
def test_autler_townes_minima(gamma_eg, ratio, factor, od):
    omega_c = factor * gamma_eg
    p = LadderParams.from_linewidths(gamma_eg, ratio * gamma_eg, omega_c=omega_c, od=od)
    grid = np.linspace(-2 * omega_c, 2 * omega_c, 2001)
    t = transmission(grid, p)
    step = grid[1] - grid[0]
    interior = np.flatnonzero((t[1:-1] < t[:-2]) & (t[1:-1] <= t[2:])) + 1
    minima = grid[interior]
    left, right = minima[minima < 0], minima[minima > 0]
    assert len(left) == 1 and len(right) == 1
    assert abs(left[0] + omega_c / 2) <= step + 1e-12
    assert abs(right[0] - omega_c / 2) <= step + 1e-12


def test_autler_townes_minima_drift_with_strong_dephasing():
    # at gamma_rg = gamma_eg/10 and omega_c = 3 gamma_eg the dip sits two steps outside omega_c/2
    omega_c = 3.0
    p = LadderParams.from_linewidths(1.0, 0.1, omega_c=omega_c, od=5.0)
    grid = np.linspace(-2 * omega_c, 2 * omega_c, 2001)
    t = transmission(grid, p)
    right = grid[grid > 0][np.argmin(t[grid > 0])]
    assert (right - omega_c / 2) / (grid[1] - grid[0]) == pytest.approx(2.0)


def test_transmission_decreases_with_rydberg_dephasing():
    values = [
        transmission(0.0, LadderParams.from_linewidths(3.0, g, omega_c=6.8, od=8.0))
        for g in (0.01, 0.1, 1.0, 2.5, 10.0)
    ]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_master_equation_reproduces_analytic_response():
    grid = np.linspace(-30, 30, 41)
    f = chi_dimensionless(grid, presets.GATE_OFF)
    rho = chi_from_lindblad(grid, presets.GATE_OFF)
    scale = np.real(np.vdot(rho, f) / np.vdot(rho, rho))
    assert scale == pytest.approx(2 * presets.GATE_OFF.gamma_eg, rel=1e-6)
    assert np.max(np.abs(scale * rho - f) / np.abs(f)) < 1e-3
