import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_fwhm
from rydswitch import presets
from rydswitch.core import LadderParams
from rydswitch.propagation import (
    Pulse,
    ResolutionError,
    ZeroReference,
    biphoton_pulse,
    check_resolution,
    coincidence_histogram,
    propagate,
    required_window_ns,
    waveform_switch_contrast,
)


def e2_time(pulse: Pulse) -> float:
    """Time from the peak to the 1/e^2 point of the intensity."""
    i = pulse.intensity
    k0 = int(np.argmax(i))
    k = k0 + int(np.argmax(i[k0:] < i[k0] * math.exp(-2)))
    return (k - k0) * pulse.dt


def test_biphoton_shape():
    p = biphoton_pulse(5.0, 4096, 0.1)
    # the rise falls between samples 409 and 410
    assert np.max(np.abs(p.amplitude)) == pytest.approx(1.0, abs=1e-3)
    assert p.times[np.argmax(p.intensity)] == pytest.approx(0.1 * 4096 * 0.1, abs=0.1)
    assert np.all(p.amplitude[:409] == 0)
    # intensity exp(-bandwidth t): 1/e^2 after 2/bandwidth = 63.66 ns
    assert e2_time(p) == pytest.approx(2 / (2 * math.pi * 5e6) * 1e9, abs=0.1)


def test_doubling_bandwidth_halves_decay():
    assert e2_time(biphoton_pulse(10.0, 4096, 0.05)) == pytest.approx(e2_time(biphoton_pulse(5.0, 4096, 0.05)) / 2, abs=0.06)


def test_spectral_width_matches_bandwidth():
    pulse = biphoton_pulse(5.0, 4096, 1.0)
    power = np.abs(np.fft.fftshift(np.fft.fft(pulse.amplitude))) ** 2
    freq_mhz = np.fft.fftshift(np.fft.fftfreq(4096, 1.0)) * 1e3
    assert brute_force_fwhm(freq_mhz, power) == pytest.approx(5.0, rel=0.05)


def test_pulse_validation():
    with pytest.raises(Exception):
        Pulse(0.0, 1.0, np.ones(100))
    with pytest.raises(Exception):
        Pulse(0.0, 1.0, np.ones(32))
    with pytest.raises(Exception):
        biphoton_pulse(0.0, 64, 1.0)


def test_no_medium_is_identity():
    pulse = biphoton_pulse(5.0, 1024, 1.0)
    out = propagate(pulse, presets.GATE_OFF.replace(od=0.0))
    np.testing.assert_allclose(out.amplitude, pulse.amplitude, atol=1e-12)


def gaussian_pulse(sigma_ns, n, dt):
    t = dt * (np.arange(n) - n // 2)
    return Pulse(t[0], dt, np.exp(-(t**2) / (4 * sigma_ns**2)).astype(complex))


def test_narrowband_absorption_matches_scalar_attenuation():
    # spectral width ~0.04 (2pi MHz) << gamma_eg = 3: the medium acts as exp(-od)
    pulse = gaussian_pulse(2000.0, 2**15, 2.0)
    medium = presets.ABSORPTION.replace(a0=0.0)
    ratio = propagate(pulse, medium).energy() / pulse.energy()
    assert math.exp(-20) / 2 < ratio < 2 * math.exp(-20)


def test_optical_precursor_leads():
    pulse = biphoton_pulse(20.0, 2**14, 0.5)
    out = propagate(pulse, presets.ABSORPTION)
    i = out.intensity
    centroid = np.sum(out.times * i) / np.sum(i)
    t_peak = out.times[np.argmax(i)]
    assert t_peak < centroid
    # the spike sits on the leading edge of the input
    assert t_peak - pulse.times[np.argmax(pulse.intensity)] < 5.0


def test_slow_light_delays_pulse():
    pulse = biphoton_pulse(1.0, 2**17, 2.0)
    out = propagate(pulse, presets.GATE_OFF)
    centroid = lambda p: np.sum(p.times * p.intensity) / np.sum(p.intensity)
    assert centroid(out) > centroid(pulse)


@settings(max_examples=60, deadline=None)
@given(
    omega_c=st.one_of(st.just(0.0), st.floats(1e-3, 20.0)),
    gamma_eg=st.floats(0.5, 6.0),
    gamma_rg=st.floats(0.0, 3.0),
    shift=st.floats(-5.0, 5.0),
    od=st.floats(0.0, 40.0),
    bandwidth=st.floats(0.5, 30.0),
)
def test_passive_and_parseval(omega_c, gamma_eg, gamma_rg, shift, od, bandwidth):
    p = LadderParams.from_linewidths(gamma_eg, gamma_rg, omega_c=omega_c, od=od, delta_shift=shift)
    pulse = biphoton_pulse(bandwidth, 1024, 1.0)
    out = propagate(pulse, p)
    assert out.energy() <= pulse.energy() * (1 + 1e-9)
    spec_energy = np.sum(np.abs(np.fft.fft(out.amplitude)) ** 2) / len(out.amplitude) * out.dt
    assert spec_energy == pytest.approx(out.energy(), rel=1e-9)


def test_resolution_check():
    assert required_window_ns(presets.GATE_OFF) == pytest.approx(1e3 / 0.006)
    with pytest.raises(ResolutionError, match="window"):
        check_resolution(biphoton_pulse(5.0, 4096, 2.0), presets.GATE_OFF)
    check_resolution(biphoton_pulse(5.0, 2**17, 2.0), presets.GATE_OFF)
    check_resolution(biphoton_pulse(5.0, 64, 2.0), presets.GATE_OFF.replace(gamma_dr=0.0))


def test_histogram_single_bin():
    pulse = biphoton_pulse(5.0, 256, 1.0)
    h = coincidence_histogram(pulse, 1234.0, 256.0)
    np.testing.assert_allclose(h.counts, [1234.0])


def test_histogram_uniform():
    pulse = Pulse(0.0, 1.0, np.ones(64, dtype=complex))
    h = coincidence_histogram(pulse, 100.0, 16.0)
    np.testing.assert_allclose(h.counts, [25.0] * 4)
    np.testing.assert_allclose(h.edges, [0, 16, 32, 48, 64])


@settings(max_examples=50, deadline=None)
@given(bandwidth=st.floats(0.5, 50.0), bin_width=st.floats(0.3, 300.0), total=st.floats(1.0, 1e7))
def test_histogram_normalisation(bandwidth, bin_width, total):
    h = coincidence_histogram(biphoton_pulse(bandwidth, 512, 1.0), total, bin_width)
    assert h.counts.sum() == pytest.approx(total, rel=1e-9)
    assert np.all(h.counts >= 0)


def test_contrast_identical_media_is_zero():
    pulse = biphoton_pulse(5.0, 2**17, 2.0)
    assert waveform_switch_contrast(pulse, presets.GATE_OFF, presets.GATE_OFF) == 0.0


def test_contrast_opaque_gate_is_one():
    pulse = biphoton_pulse(5.0, 2**17, 2.0)
    opaque = presets.ABSORPTION.replace(od=1e7)
    assert waveform_switch_contrast(pulse, presets.GATE_OFF, opaque) == pytest.approx(1.0, abs=1e-6)


def test_contrast_needs_a_reference():
    pulse = biphoton_pulse(5.0, 256, 1.0)
    with pytest.raises(ZeroReference):
        waveform_switch_contrast(pulse, presets.ABSORPTION.replace(od=1e7), presets.GATE_OFF)


def test_contrast_falls_with_bandwidth():
    values = [
        waveform_switch_contrast(biphoton_pulse(bw, 2**17, 2.0), presets.GATE_OFF, presets.GATE_ON)
        for bw in (2.0, 5.0, 10.0, 20.0)
    ]
    assert values[1] > 0
    assert all(a > b for a, b in zip(values, values[1:]))
