"""Single-photon wavepacket propagation through the EIT medium.

The heralded photon is modelled as a one-sided exponential amplitude
(Lorentzian power spectrum). Propagation multiplies its spectrum by the
field transfer function of the medium; the stray-light offset ``a0`` is
incoherent background and is not part of this channel.

Times are in ns, bandwidths in 2*pi x MHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RAD_PER_NS, LadderParams, PhysicsError
from .optical_response import transfer_function


class ZeroReference(PhysicsError):
    pass


class ResolutionError(PhysicsError):
    pass


@dataclass(frozen=True, eq=False)
class Pulse:
    t0: float
    dt: float
    amplitude: np.ndarray

    def __post_init__(self):
        n = len(self.amplitude)
        if self.dt <= 0:
            raise PhysicsError(f"dt must be > 0, got {self.dt}")
        if n < 64 or n & (n - 1):
            raise PhysicsError(f"pulse length must be a power of two >= 64, got {n}")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.amplitude))

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def energy(self) -> float:
        return float(np.sum(self.intensity) * self.dt)

    def detunings(self) -> np.ndarray:
        """Optical detuning (2*pi x MHz) of each FFT bin.

        numpy's inverse FFT carries exp(+i w t) while optical fields carry
        exp(-i w t), hence the sign flip.
        """
        return -np.fft.fftfreq(len(self.amplitude), self.dt) * 1e3


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_start: float
    bin_width: float
    counts: np.ndarray

    @property
    def edges(self) -> np.ndarray:
        return self.bin_start + self.bin_width * np.arange(len(self.counts) + 1)


def biphoton_pulse(bandwidth: float, n: int, dt: float, t0: float = 0.0) -> Pulse:
    """Peak-normalised exp(-bandwidth t / 2) switched on at 10% of the window."""
    if bandwidth <= 0:
        raise PhysicsError(f"bandwidth must be > 0, got {bandwidth}")
    t = t0 + dt * np.arange(n)
    t_rise = t0 + 0.1 * n * dt
    rate = bandwidth * RAD_PER_NS
    amp = np.where(t >= t_rise, np.exp(-0.5 * rate * np.clip(t - t_rise, 0.0, None)), 0.0)
    return Pulse(t0, dt, amp.astype(complex))


def frequency_step(pulse: Pulse) -> float:
    """Spectral grid spacing in 2*pi x MHz."""
    return 1e3 / (len(pulse.amplitude) * pulse.dt)


def required_window_ns(p: LadderParams) -> float:
    """Shortest time window that resolves the EIT feature (df <= gamma_rg / 5)."""
    if p.gamma_rg <= 0:
        return 0.0
    return 1e3 / (p.gamma_rg / 5)


def check_resolution(pulse: Pulse, p: LadderParams) -> None:
    if p.gamma_rg > 0 and frequency_step(pulse) > p.gamma_rg / 5 * (1 + 1e-12):
        raise ResolutionError(
            f"frequency step {frequency_step(pulse):.4g} exceeds gamma_rg/5 = {p.gamma_rg / 5:.4g}; "
            f"window must be at least {required_window_ns(p):.4g} ns"
        )


def propagate(pulse: Pulse, p: LadderParams) -> Pulse:
    if p.od == 0:
        return Pulse(pulse.t0, pulse.dt, np.array(pulse.amplitude, dtype=complex))
    spec = np.fft.fft(pulse.amplitude)
    out = np.fft.ifft(transfer_function(pulse.detunings(), p) * spec)
    return Pulse(pulse.t0, pulse.dt, out)


def coincidence_histogram(pulse: Pulse, total_counts: float, bin_width: float) -> Histogram:
    """Distribute ``total_counts`` over time bins in proportion to |a(t)|^2."""
    if total_counts <= 0:
        raise PhysicsError("total_counts must be > 0")
    if bin_width <= 0:
        raise PhysicsError("bin_width must be > 0")
    n = len(pulse.amplitude)
    nbins = max(1, math.ceil(n * pulse.dt / bin_width - 1e-9))
    idx = np.minimum(((np.arange(n) + 0.5) * pulse.dt / bin_width).astype(int), nbins - 1)
    weights = np.bincount(idx, weights=pulse.intensity, minlength=nbins)
    total = weights.sum()
    if total <= 0:
        raise PhysicsError("pulse carries no energy")
    return Histogram(pulse.t0, bin_width, total_counts * weights / total)


def waveform_switch_contrast(pulse: Pulse, p_eit: LadderParams, p_gate: LadderParams) -> float:
    """1 - E_gate / E_eit for the transmitted wavepacket energies."""
    e_eit = propagate(pulse, p_eit).energy()
    if e_eit < 1e-15:
        raise ZeroReference(f"EIT reference energy {e_eit:.3e} is zero")
    return 1.0 - propagate(pulse, p_gate).energy() / e_eit
