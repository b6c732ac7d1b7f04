"""Small nonlinear least-squares toolkit.

Levenberg-Marquardt with central-difference Jacobians, a Nelder-Mead
simplex for derivative-free problems, and the model functions used for the
transmission spectra and the exponential guide curves.

Box bounds are handled by reparametrisation: a logistic map for two-sided
bounds and softplus for one-sided ones, so both optimisers work on an
unconstrained vector internally.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np
from scipy.special import expit, logit

from .core import LadderParams, PhysicsError
from .optical_response import transmission


class FitFailure(RuntimeError):
    def __init__(self, message: str, chi2: float = float("nan")):
        super().__init__(f"{message} (last chi2 = {chi2:.6g})")
        self.chi2 = chi2


class BadInput(ValueError):
    pass


Model = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class FitProblem:
    model: Model
    x: np.ndarray
    y: np.ndarray
    initial: np.ndarray
    sigma: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    absolute_sigma: bool = False

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.initial = np.asarray(self.initial, dtype=float)
        n = self.initial.size
        self.lower = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if self.sigma is not None:
            self.sigma = np.asarray(self.sigma, dtype=float)
        if self.x.shape[0] != self.y.shape[0]:
            raise BadInput("x and y differ in length")
        if self.y.size < n + 1:
            raise BadInput(f"need at least {n + 1} points for {n} parameters, got {self.y.size}")
        for name in ("x", "y", "initial"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise BadInput(f"{name} contains NaN or inf")
        if self.sigma is not None and (self.sigma.shape != self.y.shape or np.any(self.sigma <= 0)):
            raise BadInput("sigma must be positive and match y")
        if np.any(self.initial < self.lower) or np.any(self.initial > self.upper):
            raise BadInput("initial parameters outside bounds")


@dataclass
class FitResult:
    params: np.ndarray
    covariance: np.ndarray
    chi2: float
    iterations: int
    converged: bool

    @property
    def uncertainties(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


# --- bound transforms -------------------------------------------------------

def _softplus(u):
    return np.logaddexp(0.0, u)


def _softplus_inv(v):
    v = np.maximum(v, 1e-300)
    return np.where(v > 30, v, np.log(np.expm1(np.minimum(v, 30))))


class _Transform:
    def __init__(self, lower: np.ndarray, upper: np.ndarray):
        self.lo, self.hi = lower, upper
        self.two = np.isfinite(lower) & np.isfinite(upper)
        self.low_only = np.isfinite(lower) & ~np.isfinite(upper)
        self.up_only = ~np.isfinite(lower) & np.isfinite(upper)

    def to_external(self, u: np.ndarray) -> np.ndarray:
        p = np.array(u, dtype=float)
        if self.two.any():
            lo, hi = self.lo[self.two], self.hi[self.two]
            p[self.two] = lo + (hi - lo) * expit(u[self.two])
        if self.low_only.any():
            p[self.low_only] = self.lo[self.low_only] + _softplus(u[self.low_only])
        if self.up_only.any():
            p[self.up_only] = self.hi[self.up_only] - _softplus(u[self.up_only])
        return p

    def to_internal(self, p: np.ndarray) -> np.ndarray:
        u = np.array(p, dtype=float)
        if self.two.any():
            lo, hi = self.lo[self.two], self.hi[self.two]
            s = np.clip((p[self.two] - lo) / (hi - lo), 1e-12, 1 - 1e-12)
            u[self.two] = logit(s)
        if self.low_only.any():
            u[self.low_only] = _softplus_inv(p[self.low_only] - self.lo[self.low_only])
        if self.up_only.any():
            u[self.up_only] = _softplus_inv(self.hi[self.up_only] - p[self.up_only])
        return u


def _jacobian(fun: Callable[[np.ndarray], np.ndarray], u: np.ndarray) -> np.ndarray:
    cols = []
    for k in range(u.size):
        h = max(1e-6 * abs(u[k]), 1e-9)
        up, dn = u.copy(), u.copy()
        up[k] += h
        dn[k] -= h
        cols.append((fun(up) - fun(dn)) / (2 * h))
    return np.column_stack(cols)


def _residual_fn(problem: FitProblem, tr: _Transform):
    w = 1.0 if problem.sigma is None else 1.0 / problem.sigma

    def weighted_model(u):
        try:
            return np.asarray(problem.model(tr.to_external(u), problem.x), dtype=float) * w
        except PhysicsError:
            return np.full(problem.y.shape, np.nan)

    yw = problem.y * w
    return weighted_model, yw


def _covariance(problem: FitProblem, params: np.ndarray, chi2: float) -> np.ndarray:
    w = 1.0 if problem.sigma is None else 1.0 / problem.sigma
    jac = _jacobian(lambda p: np.asarray(problem.model(p, problem.x), dtype=float) * w, params)
    cov = np.linalg.pinv(jac.T @ jac)
    if not problem.absolute_sigma:
        dof = max(problem.y.size - params.size, 1)
        cov *= chi2 / dof
    return (cov + cov.T) / 2


def lm_fit(problem: FitProblem, max_iter: int = 500) -> FitResult:
    """Levenberg-Marquardt minimisation of the weighted chi^2.

    Stops when the relative chi^2 decrease stays below 1e-10 for three
    accepted steps, when the gradient norm drops below 1e-12, or when no
    damping makes progress. Raises FitFailure after ``max_iter`` iterations.
    """
    tr = _Transform(problem.lower, problem.upper)
    model_w, yw = _residual_fn(problem, tr)
    u = tr.to_internal(problem.initial)
    r = yw - model_w(u)
    chi2 = float(r @ r)
    if not np.isfinite(chi2):
        raise FitFailure("model is not finite at the initial parameters", chi2)
    lam = 1e-3
    small_steps = 0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        if chi2 == 0.0:
            converged = True
            break
        jac = _jacobian(model_w, u)
        a = jac.T @ jac
        g = jac.T @ r
        if np.max(np.abs(g)) < 1e-12:
            converged = True
            break
        d = np.maximum(np.diag(a), 1e-30)
        improved = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(a + lam * np.diag(d), g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            u_new = u + step
            r_new = yw - model_w(u_new)
            chi2_new = float(r_new @ r_new)
            if np.isfinite(chi2_new) and chi2_new < chi2:
                improved = True
                break
            lam *= 10
        if not improved:
            # no damping reduces chi2: we are at a (numerical) minimum
            converged = True
            break
        rel = (chi2 - chi2_new) / chi2
        u, r, chi2 = u_new, r_new, chi2_new
        lam = max(lam / 10, 1e-12)
        small_steps = small_steps + 1 if rel < 1e-10 else 0
        if small_steps >= 3:
            converged = True
            break
    if not converged:
        raise FitFailure(f"Levenberg-Marquardt did not converge in {max_iter} iterations", chi2)
    params = tr.to_external(u)
    return FitResult(params, _covariance(problem, params, chi2), chi2, it, True)


def nelder_mead(
    fun: Callable[[np.ndarray], float],
    x0: np.ndarray,
    xtol: float = 1e-10,
    max_evals: int = 20000,
    restarts: int = 1,
    initial_step: float = 0.05,
) -> tuple[np.ndarray, float, int, bool]:
    """Minimise ``fun`` with the Nelder-Mead simplex.

    Coefficients are reflection 1, expansion 2, contraction 0.5 and
    shrink 0.5. Converged when the simplex diameter falls below ``xtol``
    relative to the best vertex. After convergence the search is restarted
    ``restarts`` times from the best vertex. Returns (x, f(x), evaluations,
    converged).
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    nfev = 0

    def f(x):
        nonlocal nfev
        nfev += 1
        v = float(fun(x))
        return v if np.isfinite(v) else np.inf

    def run(start):
        sim = np.empty((n + 1, n))
        sim[0] = start
        for k in range(n):
            v = start.copy()
            v[k] = v[k] * (1 + initial_step) if v[k] != 0 else 2.5e-4
            sim[k + 1] = v
        fs = np.array([f(v) for v in sim])
        while nfev < max_evals:
            order = np.argsort(fs, kind="stable")
            sim, fs = sim[order], fs[order]
            diam = np.max(np.abs(sim[1:] - sim[0]))
            if diam <= xtol * max(1.0, np.max(np.abs(sim[0]))):
                return sim[0], fs[0], True
            centroid = sim[:-1].mean(axis=0)
            xr = centroid + (centroid - sim[-1])
            fr = f(xr)
            if fr < fs[0]:
                xe = centroid + 2.0 * (centroid - sim[-1])
                fe = f(xe)
                if fe < fr:
                    sim[-1], fs[-1] = xe, fe
                else:
                    sim[-1], fs[-1] = xr, fr
            elif fr < fs[-2]:
                sim[-1], fs[-1] = xr, fr
            else:
                if fr < fs[-1]:
                    xc = centroid + 0.5 * (xr - centroid)
                else:
                    xc = centroid + 0.5 * (sim[-1] - centroid)
                fc = f(xc)
                if fc < min(fr, fs[-1]):
                    sim[-1], fs[-1] = xc, fc
                else:
                    sim[1:] = sim[0] + 0.5 * (sim[1:] - sim[0])
                    fs[1:] = [f(v) for v in sim[1:]]
        k = int(np.argmin(fs))
        return sim[k], fs[k], False

    x, fx, ok = run(x0)
    for _ in range(restarts):
        if not ok:
            break
        x, fx, ok = run(x)
    return x, fx, nfev, ok


def simplex_fit(problem: FitProblem, max_evals: int = 20000, xtol: float = 1e-10) -> FitResult:
    tr = _Transform(problem.lower, problem.upper)
    model_w, yw = _residual_fn(problem, tr)

    def chi2_of(u):
        r = yw - model_w(u)
        return r @ r

    u, chi2, nfev, ok = nelder_mead(chi2_of, tr.to_internal(problem.initial), xtol=xtol, max_evals=max_evals)
    if not ok:
        raise FitFailure(f"simplex did not converge in {max_evals} evaluations", chi2)
    params = tr.to_external(u)
    return FitResult(params, _covariance(problem, params, chi2), float(chi2), nfev, True)


# --- models ------------------------------------------------------------------

def exp_decay(params: Sequence[float], x):
    """y = A exp(-x / t) + y0 with params (A, t, y0); t may be negative."""
    a, t, y0 = params
    return a * np.exp(-np.asarray(x, dtype=float) / t) + y0


LADDER_FIELDS = tuple(f.name for f in fields(LadderParams))


def eit_model(params: Sequence[float], fixed: LadderParams, x, free: Sequence[str]):
    """Transmission with the ``free`` LadderParams fields set from ``params``."""
    unknown = set(free) - set(LADDER_FIELDS)
    if unknown:
        raise BadInput(f"unknown free parameter(s): {sorted(unknown)}")
    p = fixed.replace(**{name: float(v) for name, v in zip(free, params)})
    return transmission(np.asarray(x, dtype=float), p)


def make_eit_model(free: Sequence[str], fixed: LadderParams) -> Model:
    free = tuple(free)
    return lambda params, x: eit_model(params, fixed, x, free)
