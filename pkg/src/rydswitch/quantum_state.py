"""Two-qubit polarisation states: Bell states, 16-setting tomography,
fidelity, two-photon interference visibility and switch/EIT contrasts.

Two-qubit basis order is (HH, HV, VH, VV) with the signal-1 photon first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Literal

import numpy as np
from scipy.optimize import minimize

from .core import (
    DensityMatrix,
    DimensionMismatch,
    PhysicsError,
    hermitian_sqrt,
    make_density,
    project_psd,
)
from .fitkit import FitFailure, FitProblem, lm_fit

SQ2 = np.sqrt(2.0)

BASES: dict[str, np.ndarray] = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "R": np.array([1.0, -1j], dtype=complex) / SQ2,
    "D": np.array([1.0, 1.0], dtype=complex) / SQ2,
}
LABELS = tuple(BASES)
SETTINGS = tuple(product(LABELS, LABELS))


class ZeroReference(PhysicsError):
    pass


class SingularDesign(PhysicsError):
    pass


class TomographyError(ValueError):
    pass


class NoConvergence(FitFailure):
    pass


@dataclass(frozen=True)
class TomographyRecord:
    """Coincidence counts for the 16 ordered (signal-1, signal-2) basis pairs."""

    rows: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        seen = {}
        for b1, b2, c in self.rows:
            if b1 not in BASES or b2 not in BASES:
                raise TomographyError(f"unknown basis label in pair ({b1},{b2})")
            if (b1, b2) in seen:
                raise TomographyError(f"duplicate basis pair ({b1},{b2})")
            if not c >= 0:
                raise TomographyError(f"counts for ({b1},{b2}) must be >= 0, got {c}")
            seen[(b1, b2)] = c
        missing = [s for s in SETTINGS if s not in seen]
        if missing:
            raise TomographyError("missing basis pair(s): " + ", ".join(f"({a},{b})" for a, b in missing))

    @classmethod
    def from_counts(cls, counts: dict[tuple[str, str], float]) -> "TomographyRecord":
        return cls(tuple((a, b, float(counts[(a, b)])) for a, b in SETTINGS))

    def counts(self) -> np.ndarray:
        """Counts as a length-16 vector in :data:`SETTINGS` order."""
        lookup = {(a, b): c for a, b, c in self.rows}
        return np.array([lookup[s] for s in SETTINGS], dtype=float)

    def total_per_setting(self) -> float:
        c = dict(zip(SETTINGS, self.counts()))
        return c[("H", "H")] + c[("H", "V")] + c[("V", "H")] + c[("V", "V")]


def projector_ket(b1: str, b2: str) -> np.ndarray:
    return np.kron(BASES[b1], BASES[b2])


def _projectors() -> np.ndarray:
    kets = np.array([projector_ket(a, b) for a, b in SETTINGS])
    return np.einsum("ki,kj->kij", kets, kets.conj())


PROJECTORS = _projectors()


def bell_density(theta: float) -> DensityMatrix:
    """|psi> = (|HV> + e^{i theta}|VH>)/sqrt(2) as a density matrix."""
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1 / SQ2
    psi[2] = np.exp(1j * theta) / SQ2
    return make_density(np.outer(psi, psi.conj()))


def probabilities(rho) -> np.ndarray:
    """<phi_i phi_j| rho |phi_i phi_j> for all 16 settings."""
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("kij,ji->k", PROJECTORS, rho))


def simulate_counts(
    rho: DensityMatrix,
    total_per_setting: float,
    noise: Literal["none", "poisson"] = "none",
    seed: int | None = None,
) -> TomographyRecord:
    if rho.dim != 4:
        raise DimensionMismatch("tomography needs a 4x4 state")
    mean = total_per_setting * np.clip(probabilities(rho.matrix), 0.0, None)
    if noise == "poisson":
        mean = np.random.default_rng(seed).poisson(mean).astype(float)
    elif noise != "none":
        raise ValueError(f"unknown noise model {noise!r}")
    return TomographyRecord(tuple((a, b, float(c)) for (a, b), c in zip(SETTINGS, mean)))


def _design_matrix() -> np.ndarray:
    # Tr(P rho) = vec(P^T) . vec(rho) for row-major vec
    return np.array([p.T.ravel() for p in PROJECTORS])


def linear_inversion(rec: TomographyRecord) -> np.ndarray:
    """Solve the 16x16 linear system for rho. The result is Hermitian but may not be PSD."""
    total = rec.total_per_setting()
    if total <= 0:
        raise TomographyError("the {H,V}x{H,V} block has no counts; cannot normalise")
    design = _design_matrix()
    s = np.linalg.svd(design, compute_uv=False)
    if s[-1] < 1e-10 * s[0]:
        raise SingularDesign("projector set is not informationally complete")
    rho = np.linalg.solve(design, rec.counts() / total).reshape(4, 4)
    return (rho + rho.conj().T) / 2


def _unpack(params: np.ndarray) -> np.ndarray:
    t = np.zeros((4, 4), dtype=complex)
    t[np.diag_indices(4)] = params[:4]
    il = np.tril_indices(4, -1)
    t[il] = params[4:10] + 1j * params[10:16]
    return t


def _pack(t: np.ndarray) -> np.ndarray:
    il = np.tril_indices(4, -1)
    return np.concatenate([np.real(np.diag(t)), t[il].real, t[il].imag])


def mle_reconstruct(rec: TomographyRecord, max_iter: int = 20000) -> DensityMatrix:
    """Poisson maximum-likelihood state with rho = T T^dagger / Tr (T lower triangular).

    The negative log-likelihood sum(mu) - sum(f log mu), with f the counts
    normalised by the {H,V}x{H,V} total and mu = Tr(P_k T T^dagger), is
    minimised by L-BFGS with its analytic gradient, starting from the PSD
    projection of :func:`linear_inversion`.
    """
    n = rec.counts()
    if not np.any(n > 0):
        raise TomographyError("record has no counts")
    total = rec.total_per_setting()
    if total > 0:
        start = project_psd(linear_inversion(rec)).matrix
    else:
        total = n.sum() / 4.0
        start = np.eye(4, dtype=complex) / 4
    freq = n / total
    pos = freq > 0
    il = np.tril_indices(4, -1)

    def nll_and_grad(params):
        t = _unpack(params)
        mu = probabilities(t @ t.conj().T)
        if np.any(mu[pos] <= 0):
            return np.inf, np.zeros_like(params)
        value = mu.sum() - np.sum(freq[pos] * np.log(mu[pos]))
        weight = np.ones(mu.size)
        weight[pos] -= freq[pos] / mu[pos]
        g = 2.0 * np.einsum("k,kij->ij", weight, PROJECTORS) @ t
        return value, np.concatenate([np.real(np.diag(g)), g[il].real, g[il].imag])

    t0 = np.linalg.cholesky(start + 1e-10 * np.eye(4))
    res = minimize(
        nll_and_grad,
        _pack(t0),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": 1e-15, "gtol": 1e-12},
    )
    if res.nit >= max_iter:
        raise NoConvergence(f"maximum-likelihood search did not converge in {max_iter} iterations", float(res.fun))
    t = _unpack(res.x)
    rho = t @ t.conj().T
    rho = (rho + rho.conj().T) / 2
    return make_density(rho / np.trace(rho).real)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Evaluated as the squared nuclear norm of sqrt(rho) sqrt(sigma), which is
    the same quantity and symmetric by construction.
    """
    a = np.asarray(rho, dtype=complex)
    b = np.asarray(sigma, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    s = np.linalg.svd(hermitian_sqrt(a) @ hermitian_sqrt(b), compute_uv=False)
    return float(min(max(s.sum() ** 2, 0.0), 1.0))


@dataclass(frozen=True)
class VisibilityFit:
    visibility: float
    theta0: float
    amplitude: float
    offset: float


def fringe(params, theta):
    a, b, theta0 = params
    return b + a * np.cos(np.asarray(theta) - theta0) ** 2


def visibility_fit(angles: Iterable[float], counts: Iterable[float]) -> VisibilityFit:
    """Fit CC(theta) = B + A cos^2(theta - theta0) with A, B >= 0.

    The visibility is A / (A + 2B), i.e. (max - min)/(max + min) of the fringe.
    """
    th = np.asarray(list(angles), dtype=float)
    cc = np.asarray(list(counts), dtype=float)
    if th.size < 6 or th.size != cc.size:
        raise ValueError("need at least 6 (angle, counts) points")
    if np.ptp(th) < np.pi - 1e-12:
        raise ValueError("analyser angles must span at least pi")
    # the model is linear in (1, cos 2theta, sin 2theta); use that for the start
    basis = np.column_stack([np.ones_like(th), np.cos(2 * th), np.sin(2 * th)])
    c0, c1, c2 = np.linalg.lstsq(basis, cc, rcond=None)[0]
    amp = max(2 * np.hypot(c1, c2), 0.0)
    off = max(c0 - amp / 2, 0.0)
    phase = 0.5 * np.arctan2(c2, c1)
    scale = max(np.max(np.abs(cc)), 1e-300)
    problem = FitProblem(
        fringe,
        th,
        cc / scale,
        [amp / scale, off / scale, phase],
        lower=[0.0, 0.0, -np.inf],
    )
    res = lm_fit(problem)
    a, b = res.params[0] * scale, res.params[1] * scale
    theta0 = float(np.mod(res.params[2], np.pi))
    vis = a / (a + 2 * b) if a + 2 * b > 0 else 0.0
    return VisibilityFit(float(vis), theta0, float(a), float(b))


def switch_contrast(cc_eit: float, cc_gate: float) -> float:
    """(CC_EIT - CC_gate) / CC_EIT."""
    if cc_eit <= 0:
        raise ZeroReference(f"CC_EIT must be > 0, got {cc_eit}")
    return (cc_eit - cc_gate) / cc_eit


def eit_contrast(cc_no_atom: float, cc_eit: float) -> float:
    """(CC_no_atom - CC_EIT) / CC_no_atom."""
    if cc_no_atom <= 0:
        raise ZeroReference(f"CC_no_atom must be > 0, got {cc_no_atom}")
    return (cc_no_atom - cc_eit) / cc_no_atom
