"""Three-level ladder master equation in the (g, e, r) basis, hbar = 1.

Density matrices are vectorised row-major (``rho.ravel()``), so the 9x9
generator ``G`` acts as ``d vec(rho)/dt = G @ vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, LadderParams, PhysicsError, make_density

G, E, R = 0, 1, 2
DIM = 3


class SingularSystem(PhysicsError):
    pass


class NoConvergence(PhysicsError):
    pass


@dataclass(frozen=True, eq=False)
class Liouvillian:
    generator: np.ndarray

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    def __call__(self, rho) -> np.ndarray:
        """Return d(rho)/dt as a 3x3 matrix."""
        return (self.generator @ np.asarray(rho, dtype=complex).ravel()).reshape(DIM, DIM)


def hamiltonian(p: LadderParams) -> np.ndarray:
    return -0.5 * np.array(
        [
            [0.0, p.omega_p, 0.0],
            [p.omega_p, -2.0 * p.delta_p, p.omega_c],
            [0.0, p.omega_c, -2.0 * (p.delta_p + p.delta_c)],
        ],
        dtype=complex,
    )


def _coherence_rates(p: LadderParams) -> np.ndarray:
    """Elementwise decay-rate matrix K with d(rho_ij)/dt ⊃ -K_ij rho_ij.

    Diagonal entries are population loss rates. Off-diagonal entries are
    the full coherence decay rates gamma_eg, gamma_rg and their sum for e-r.
    """
    g_eg = p.gamma_e + p.gamma_de
    g_rg = p.gamma_r + p.gamma_dr
    g_er = g_eg + g_rg
    return np.array(
        [
            [0.0, g_eg, g_rg],
            [g_eg, p.gamma_e, g_er],
            [g_rg, g_er, p.gamma_r],
        ]
    )


def lindblad_dissipator(rho, p: LadderParams) -> np.ndarray:
    """Dissipative part of d(rho)/dt for the ladder.

    Populations cascade r -> e -> g at rates gamma_r and gamma_e; every
    coherence decays at its total rate from :func:`_coherence_rates`.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise PhysicsError(f"expected a 3x3 matrix, got {rho.shape}")
    out = -_coherence_rates(p) * rho
    out[G, G] += p.gamma_e * rho[E, E]
    out[E, E] += p.gamma_r * rho[R, R]
    return out


def build_liouvillian(p: LadderParams) -> Liouvillian:
    h = hamiltonian(p)
    eye = np.eye(DIM)
    # row-major vec: vec(A X B) = kron(A, B.T) vec(X)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    gen -= np.diag(_coherence_rates(p).ravel())
    gen[G * DIM + G, E * DIM + E] += p.gamma_e
    gen[E * DIM + E, R * DIM + R] += p.gamma_r
    return Liouvillian(gen)


def steady_state(p: LadderParams) -> DensityMatrix:
    """Stationary state from the trace-constrained dense linear system.

    One redundant row of the generator is replaced by the trace condition.
    ``omega_p == 0`` returns |g><g| directly.
    """
    if p.omega_p == 0.0:
        rho = np.zeros((DIM, DIM), dtype=complex)
        rho[G, G] = 1.0
        return make_density(rho)
    if p.gamma_e <= 0.0 and p.gamma_de <= 0.0:
        raise SingularSystem("steady state is not unique without gamma_e or gamma_de")
    # without coupling |r> is unreachable from |g>; solve on the (g, e) block
    levels = [G, E, R] if p.omega_c != 0.0 else [G, E]
    idx = [i * DIM + j for i in levels for j in levels]
    a = build_liouvillian(p).generator[np.ix_(idx, idx)]
    a[0, :] = np.eye(len(levels)).ravel()
    b = np.zeros(len(idx), dtype=complex)
    b[0] = 1.0
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] < 1e-10 * s[0]:
        raise SingularSystem(f"constrained system is rank deficient (sigma_min/sigma_max = {s[-1] / s[0]:.2e})")
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[np.ix_(levels, levels)] = np.linalg.solve(a, b).reshape(len(levels), len(levels))
    rho = (rho + rho.conj().T) / 2
    return make_density(rho / np.trace(rho).real)


def weak_probe_coherence(p: LadderParams, rtol: float = 1e-4, max_halvings: int = 20) -> complex:
    """Probe-normalised coherence <e|rho|g> / omega_p in the linear-response limit.

    The probe Rabi frequency is halved until the result stops changing by
    more than ``rtol`` (relative).
    """
    if p.omega_p <= 0:
        raise PhysicsError("omega_p must be > 0")
    scale = max(p.gamma_e + p.gamma_de, 1e-300)

    def coherence(omega_p: float) -> complex:
        rho = steady_state(p.replace(omega_p=omega_p)).matrix
        return complex(rho[E, G]) / omega_p

    omega = p.omega_p
    prev = coherence(omega)
    for _ in range(max_halvings):
        omega /= 2
        cur = coherence(omega)
        # absolute floor relative to the two-level peak 1/(2 gamma_eg)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-8 / scale):
            return cur
        prev = cur
    raise NoConvergence(f"linear response not reached after {max_halvings} halvings (omega_p={omega:.3e})")
