"""Shared physical types and small dense-matrix helpers.

Every frequency-like number (Rabi frequencies, detunings, linewidths, decay
rates) is a plain float holding its value in units of 2*pi x MHz, so
``omega_c=11.0`` means a coupling Rabi frequency of 2*pi x 11 MHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

#: Conversion from a 2*pi x MHz value to angular frequency in rad/ns.
RAD_PER_NS = 2.0 * math.pi * 1e-3

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-9


class PhysicsError(ValueError):
    """Raised when an input violates a physical invariant."""


class NotHermitian(PhysicsError):
    pass


class NotUnitTrace(PhysicsError):
    pass


class NotPositive(PhysicsError):
    pass


class NotPSD(PhysicsError):
    pass


class DimensionMismatch(PhysicsError):
    pass


@dataclass(frozen=True)
class LadderParams:
    """Optical and atomic rates of the g-e-r ladder (all in 2*pi x MHz).

    ``od`` is the resonant optical depth, ``a0`` an additive transmission
    offset (stray light), ``delta_shift`` the fit shift added to the probe
    detuning and ``length`` the medium length in mm.
    """

    omega_p: float = 0.0
    omega_c: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    gamma_e: float = 3.0
    gamma_r: float = 0.0
    gamma_de: float = 0.0
    gamma_dr: float = 0.0
    od: float = 0.0
    a0: float = 0.0
    delta_shift: float = 0.0
    length: float = 1.0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not math.isfinite(value):
                raise PhysicsError(f"{name} must be finite, got {value}")
        for name in ("gamma_e", "gamma_r", "gamma_de", "gamma_dr", "od", "a0"):
            if getattr(self, name) < 0:
                raise PhysicsError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.length <= 0:
            raise PhysicsError(f"length must be > 0, got {self.length}")

    @property
    def gamma_eg(self) -> float:
        return self.gamma_e + self.gamma_de

    @property
    def gamma_rg(self) -> float:
        return self.gamma_r + self.gamma_dr

    def replace(self, **changes: float) -> "LadderParams":
        return replace(self, **changes)

    @classmethod
    def from_linewidths(cls, gamma_eg: float, gamma_rg: float, **kw: float) -> "LadderParams":
        """Build params from total coherence decay rates.

        The whole of ``gamma_eg`` is put into ``gamma_e`` and the whole of
        ``gamma_rg`` into ``gamma_dr``; only the sums matter for the analytic
        susceptibility.
        """
        return cls(gamma_e=gamma_eg, gamma_de=0.0, gamma_r=0.0, gamma_dr=gamma_rg, **kw)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix. Construct through :func:`make_density`."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T))) < tol


def make_density(matrix) -> DensityMatrix:
    """Validate ``matrix`` as a density matrix.

    Raises NotHermitian, NotUnitTrace or NotPositive with the size of the
    violation in the message.
    """
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got shape {m.shape}")
    herm_err = float(np.max(np.abs(m - m.conj().T)))
    if herm_err >= HERMITIAN_TOL:
        raise NotHermitian(f"max|rho - rho^dagger| = {herm_err:.3e} exceeds {HERMITIAN_TOL:g}")
    tr = np.trace(m)
    if abs(tr - 1.0) >= TRACE_TOL:
        raise NotUnitTrace(f"trace = {tr.real:.12g} (|trace - 1| = {abs(tr - 1):.3e})")
    lam_min = float(np.min(np.linalg.eigvalsh(m)))
    if lam_min < -EIG_TOL:
        raise NotPositive(f"smallest eigenvalue {lam_min:.3e} is below -{EIG_TOL:g}")
    m.setflags(write=False)
    return DensityMatrix(m)


def _clamped_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=complex)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    if w.min() < -1e-6:
        raise NotPSD(f"eigenvalue {w.min():.3e} is below -1e-6")
    # eigensolver noise floor; keeps sqrt(P) == P for projectors
    floor = 10 * w.size * np.finfo(float).eps * np.abs(w).max()
    return np.where(w > floor, w, 0.0), v


def hermitian_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Small negative eigenvalues from rounding are clamped to zero.
    """
    w, v = _clamped_eigh(m)
    return (v * np.sqrt(w)) @ v.conj().T


def project_psd(m) -> DensityMatrix:
    """Nearest density matrix by eigenvalue clamping and renormalisation."""
    m = np.asarray(m, dtype=complex)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise NotPositive("matrix has no positive eigenvalue")
    out = (v * (w / w.sum())) @ v.conj().T
    return make_density((out + out.conj().T) / 2)


def trace_distance(a, b) -> float:
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random density matrix from a Ginibre draw (used by tests and scripts)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return make_density((rho + rho.conj().T) / 2)
