"""Independent reference computations used only by the test-suite."""

from __future__ import annotations

import numpy as np

from rydswitch.core import LadderParams
from rydswitch.lindblad import build_liouvillian, hamiltonian, lindblad_dissipator


def direct_rhs(rho, h, dissipator):
    """-i[H, rho] + D(rho) evaluated without vectorisation."""
    rho = np.asarray(rho, dtype=complex)
    return -1j * (h @ rho - rho @ h) + dissipator(rho)


def rk4_steady_state(rhs, rho0, h: float, tol: float = 1e-13, max_doublings: int = 80):
    """Long-time limit of classical RK4 time stepping.

    One RK4 step of a linear ODE is a fixed linear map P; it is assembled by
    applying four RK4 stages to each basis matrix, and the propagator over
    2**k steps is obtained by repeated squaring until the state no longer
    moves.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    n = rho0.size
    shape = rho0.shape

    def step(y):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    p = np.empty((n, n), dtype=complex)
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        p[:, k] = step(e.reshape(shape)).ravel()

    diag = np.eye(shape[0]).ravel()
    v = rho0.ravel()
    for _ in range(max_doublings):
        new = p @ v
        # P keeps the trace up to rounding; squaring would compound the drift
        new = new / (diag @ new)
        if np.max(np.abs(new - v)) < tol and np.max(np.abs(rhs(new.reshape(shape)))) < 1e-12:
            return new.reshape(shape)
        v = new
        p = p @ p
        p = p / np.max(np.abs(np.linalg.eigvals(p)))
    raise RuntimeError("RK4 propagation did not settle")


def brute_force_fwhm(x, y):
    """Full width at half maximum by linear interpolation of the crossings."""
    x = np.asarray(x)
    y = np.asarray(y)
    i = int(np.argmax(y))
    half = y[i] / 2
    lo = i
    while lo > 0 and y[lo] > half:
        lo -= 1
    hi = i
    while hi < len(y) - 1 and y[hi] > half:
        hi += 1
    xl = x[lo] + (half - y[lo]) * (x[lo + 1] - x[lo]) / (y[lo + 1] - y[lo])
    xr = x[hi - 1] + (half - y[hi - 1]) * (x[hi] - x[hi - 1]) / (y[hi] - y[hi - 1])
    return xr - xl


def random_params(rng, lo=0.5, hi=10.0):
    r = rng.uniform(lo, hi, size=8)
    return LadderParams(
        omega_p=r[0], omega_c=r[1], delta_p=r[2] - hi / 2, delta_c=r[3] - hi / 2,
        gamma_e=r[4], gamma_r=r[5] / 10, gamma_de=r[6] / 10, gamma_dr=r[7] / 10,
    )


def rk4_limit(p):
    gen = build_liouvillian(p)
    h = 0.5 / np.max(np.abs(np.linalg.eigvals(gen.generator)))
    rhs = lambda rho: direct_rhs(rho, hamiltonian(p), lambda r: lindblad_dissipator(r, p))
    return rk4_steady_state(rhs, np.diag([1.0, 0.0, 0.0]).astype(complex), h)
