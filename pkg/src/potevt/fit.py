"""
Maximum-likelihood fitting for the GPD and closed-form moment fits for the
Normal and LogNormal baselines.

The GPD fit runs a Nelder-Mead simplex over ``(xi, log beta)`` started from
method-of-moments values. The shape is confined to ``[XI_MIN, XI_MAX]``;
below ``xi = -1`` the likelihood is unbounded. After the simplex stops, a
5x5 grid around the optimum is probed and the search restarts from any
strictly better point, which guards against early simplex collapse.
Excesses are sorted before fitting so results do not depend on input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import optimize

from . import dist
from .dist import GpdParams, LogNormalParams, NormalParams
from .errors import DegenerateDataError, DomainError, InsufficientDataError

MIN_EXCESSES = 10
XI_MIN = -0.99
XI_MAX = 5.0
FTOL_REL = 1e-10
XTOL = 1e-10
MAX_ITER = 10_000
MAX_RESTARTS = 5
GRID_STEP = 1e-3

Params = Union[GpdParams, NormalParams, LogNormalParams]


@dataclass(frozen=True)
class FitResult:
    theta: Params
    loglik: float
    converged: bool
    iterations: int
    n_points: int
    restarts: int = 0


def _check_excesses(excesses, min_excesses: int) -> np.ndarray:
    y = np.sort(np.asarray(excesses, dtype=float).ravel())
    if y.size < min_excesses:
        raise InsufficientDataError(
            f"need at least {min_excesses} excesses to fit a GPD, got {y.size}")
    if not np.all(np.isfinite(y)):
        raise DomainError("excesses must be finite")
    if y[0] < 0:
        raise DomainError("excesses must be non-negative")
    if y[0] == y[-1]:
        raise DegenerateDataError("all excesses are equal; the GPD fit is degenerate")
    return y


def _nll(y: np.ndarray, xi: float, beta: float) -> float:
    if abs(xi) < dist.XI_EPS:
        return y.size * math.log(beta) + float(np.sum(y)) / beta
    z = xi * y[-1] / beta
    if z <= -1.0:
        return math.inf
    t = np.log1p(xi * y / beta)
    return y.size * math.log(beta) + (1.0 + 1.0 / xi) * float(np.sum(t))


def moment_start(y: np.ndarray) -> tuple:
    """Method-of-moments ``(xi, beta)`` clipped into the search box and made feasible."""
    mean = float(np.mean(y))
    var = float(np.var(y))
    ratio = mean * mean / var
    xi0 = min(max(0.5 * (1.0 - ratio), XI_MIN), XI_MAX)
    beta0 = 0.5 * mean * (ratio + 1.0)
    if xi0 < 0 and y[-1] >= -beta0 / xi0:
        xi0, beta0 = 0.0, mean
    return xi0, beta0


def fit_gpd_mle(excesses, min_excesses: int = MIN_EXCESSES) -> FitResult:
    """Fit ``(xi, beta)`` to threshold excesses by maximum likelihood.

    Parameters
    ----------
    excesses : array_like
        Non-negative excesses over the threshold.
    min_excesses : int, optional
        Smallest sample accepted. Default is 10.

    Returns
    -------
    FitResult
        ``converged`` is False if the iteration cap was hit; the caller
        decides what to do with such a fit.

    Raises
    ------
    InsufficientDataError
        Fewer than ``min_excesses`` values.
    DegenerateDataError
        All values equal.
    """
    y = _check_excesses(excesses, min_excesses)

    def objective(v):
        xi, tau = v
        if not (XI_MIN <= xi <= XI_MAX):
            return math.inf
        return _nll(y, xi, math.exp(tau))

    xi0, beta0 = moment_start(y)
    x = np.array([xi0, math.log(beta0)])
    fatol = FTOL_REL * max(1.0, abs(objective(x)))
    offsets = GRID_STEP * np.arange(-2, 3)

    iterations = 0
    converged = True
    restarts = 0
    while True:
        dxi = 0.1 if x[0] + 0.1 <= XI_MAX else -0.1
        simplex = np.array([x, x + [dxi, 0.0], x + [0.0, 0.1]])
        res = optimize.minimize(
            objective, x, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": XTOL, "fatol": fatol,
                     "maxiter": MAX_ITER, "maxfev": 4 * MAX_ITER},
        )
        iterations += int(res.nit)
        converged = converged and bool(res.success)
        x, fx = res.x, float(res.fun)
        if not converged or restarts >= MAX_RESTARTS:
            break
        best = (fx, None)
        for a in offsets:
            for b in offsets:
                cand = x + [a, b]
                fc = objective(cand)
                if fc < best[0] - fatol:
                    best = (fc, cand)
        if best[1] is None:
            break
        x = best[1]
        restarts += 1

    theta = GpdParams(float(x[0]), math.exp(float(x[1])))
    return FitResult(theta, dist.gpd_loglik(y, theta), converged, iterations, int(y.size), restarts)


def fit_gpd_mle_fixed_shape(excesses, xi: float, min_excesses: int = MIN_EXCESSES) -> FitResult:
    """Maximize the GPD likelihood over the scale alone with the shape held at ``xi``.

    For ``xi == 0`` the exponential MLE (the sample mean) is returned directly.
    """
    y = _check_excesses(excesses, min_excesses)
    if xi == 0:
        theta = GpdParams(0.0, math.fsum(y) / y.size)
        return FitResult(theta, dist.gpd_loglik(y, theta), True, 0, int(y.size))

    lo = math.log(float(np.mean(y))) - 25.0
    hi = math.log(float(y[-1])) + 5.0
    if xi < 0:
        lo = max(lo, math.log(-xi * float(y[-1])) + 1e-12)
    res = optimize.minimize_scalar(
        lambda tau: _nll(y, xi, math.exp(tau)), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12, "maxiter": MAX_ITER},
    )
    theta = GpdParams(float(xi), math.exp(float(res.x)))
    return FitResult(theta, dist.gpd_loglik(y, theta), bool(res.success), int(res.nfev), int(y.size))


def _moments(x: np.ndarray) -> tuple:
    n = x.size
    mu = math.fsum(x) / n
    sigma2 = math.fsum((x - mu) ** 2) / n
    return mu, sigma2


def fit_normal(values) -> FitResult:
    """Population mean and variance (divide by n) of ``values``."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientDataError(f"need at least 2 values for a Normal fit, got {x.size}")
    mu, sigma2 = _moments(x)
    if sigma2 <= 0:
        raise DegenerateDataError("all values are equal; variance is zero")
    theta = NormalParams(mu, sigma2)
    ll = float(np.sum(dist.normal_logpdf(x, theta)))
    return FitResult(theta, ll, True, 0, int(x.size))


def fit_lognormal(values) -> FitResult:
    """Normal moment fit applied to ``log(values)``; every value must be positive."""
    x = np.asarray(values, dtype=float).ravel()
    if np.any(~(x > 0)):
        raise DomainError("LogNormal fit needs strictly positive values")
    if x.size < 2:
        raise InsufficientDataError(f"need at least 2 values for a LogNormal fit, got {x.size}")
    mu, sigma2 = _moments(np.log(x))
    if sigma2 <= 0:
        raise DegenerateDataError("all values are equal; log-variance is zero")
    theta = LogNormalParams(mu, sigma2)
    ll = float(np.sum(dist.lognormal_logpdf(x, theta)))
    return FitResult(theta, ll, True, 0, int(x.size))
