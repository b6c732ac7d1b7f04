"""Analytic ladder-EIT susceptibility, transmission spectra and slow-light delay.

The susceptibility prefactor N|mu|^2/(eps0 hbar) is never evaluated: the
absorption coefficient alpha0 = OD/L absorbs it and k0 cancels in the
exponent, so every quantity here only needs the dimensionless factor ``f``
with chi = (alpha0/k0) f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LadderParams, PhysicsError
from .lindblad import weak_probe_coherence


class DividedPole(PhysicsError):
    pass


class BadGrid(PhysicsError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    detunings: np.ndarray
    chi_dimensionless: np.ndarray
    transmission: np.ndarray


@dataclass(frozen=True)
class TransferSample:
    detuning: float
    amplitude: complex


def chi_dimensionless(dw, p: LadderParams):
    """Dimensionless susceptibility f(dw); works on scalars and arrays.

    Positive imaginary part means absorption.
    """
    g_eg = p.gamma_eg
    if g_eg <= 0:
        raise PhysicsError("gamma_eg must be > 0")
    x = np.asarray(dw, dtype=float) + p.delta_shift
    if p.omega_c == 0.0:
        # the two-photon factor cancels; avoids the removable 0/0 at gamma_rg = 0
        f = -g_eg / (x + 1j * g_eg)
        return complex(f) if np.ndim(f) == 0 else f
    two_photon = x + 1j * p.gamma_rg
    den = p.omega_c**2 - 4.0 * two_photon * (x + 1j * g_eg)
    if np.any(np.abs(den) < 1e-12 * g_eg**2):
        raise DividedPole("susceptibility evaluated on its pole")
    f = 4.0 * two_photon * g_eg / den
    return complex(f) if np.ndim(f) == 0 else f


def transmission(dw, p: LadderParams):
    """Intensity transmission exp(-OD Im f) + a0."""
    t = np.exp(-p.od * np.imag(chi_dimensionless(dw, p))) + p.a0
    return float(t) if np.ndim(t) == 0 else t


def transfer_function(dw, p: LadderParams):
    """Complex field transfer exp(i OD f / 2), stray-light offset excluded."""
    if p.od == 0:
        return np.ones_like(np.asarray(dw, dtype=float), dtype=complex) if np.ndim(dw) else 1.0 + 0j
    return np.exp(0.5j * p.od * chi_dimensionless(dw, p))


def transfer_amplitude(dw: float, p: LadderParams) -> TransferSample:
    return TransferSample(float(dw), complex(transfer_function(float(dw), p)))


def spectrum(grid, p: LadderParams) -> Spectrum:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise BadGrid(f"grid needs at least 2 points, got {grid.size}")
    if np.any(np.diff(grid) <= 0):
        raise BadGrid("grid must be strictly increasing")
    f = chi_dimensionless(grid, p)
    return Spectrum(grid, f, np.exp(-p.od * f.imag) + p.a0)


def group_delay(p: LadderParams, dw: float = 0.0, step: float = 1e-3) -> float:
    """Group delay in ns: d(phase)/d(omega) of the field transfer function.

    The derivative is a central difference with ``step`` in 2*pi x MHz.
    """
    if p.od == 0:
        return 0.0
    df = chi_dimensionless(np.array([dw - step, dw + step]), p).real
    dphase = 0.5 * p.od * (df[1] - df[0]) / (2 * step)
    # d/d(2pi MHz) -> ns
    return dphase * 1e3 / (2 * math.pi)


def chi_from_lindblad(dw, p: LadderParams, omega_p: float = 1e-3) -> np.ndarray:
    """Probe-normalised steady-state coherence on the analytic detuning grid.

    The sign of the detuning terms in the ladder Hamiltonian makes the
    coherence follow the analytic response at delta_p = -(dw + shift) with
    delta_c = 0. Up to one real factor (2 gamma_eg) the result equals
    :func:`chi_dimensionless`.
    """
    dw = np.atleast_1d(np.asarray(dw, dtype=float))
    out = np.empty(dw.shape, dtype=complex)
    for i, x in enumerate(dw):
        q = p.replace(omega_p=omega_p, delta_p=-(x + p.delta_shift), delta_c=0.0)
        out[i] = weak_probe_coherence(q)
    return out
