"""
Density, CDF and quantile kernels for the Normal, LogNormal and Generalized
Pareto distributions.

Normal and LogNormal parameters are stored as variances, not standard
deviations. GPD kernels switch to the exponential limit when the shape is
smaller than ``XI_EPS`` in magnitude; the non-zero branch is written with
``log1p``/``expm1`` so it stays accurate right down to that cutoff.

All kernels accept scalars or arrays and return a float for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

XI_EPS = 1e-9
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _out(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma2: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma2) and self.sigma2 > 0):
            raise DomainError(f"invalid Normal parameters mu={self.mu}, sigma2={self.sigma2}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def mode(self) -> float:
        return self.mu

    @property
    def peak_height(self) -> float:
        """Density at the mode, ``1 / (sigma * sqrt(2 pi))``."""
        return 1.0 / (self.sigma * _SQRT2PI)


@dataclass(frozen=True)
class LogNormalParams:
    mu_log: float
    sigma2_log: float

    def __post_init__(self):
        if not (np.isfinite(self.mu_log) and np.isfinite(self.sigma2_log) and self.sigma2_log > 0):
            raise DomainError(
                f"invalid LogNormal parameters mu_log={self.mu_log}, sigma2_log={self.sigma2_log}")

    @property
    def sigma_log(self) -> float:
        return math.sqrt(self.sigma2_log)

    @property
    def mean(self) -> float:
        return math.exp(self.mu_log + 0.5 * self.sigma2_log)

    @property
    def mode(self) -> float:
        return math.exp(self.mu_log - self.sigma2_log)

    @property
    def median(self) -> float:
        return math.exp(self.mu_log)


@dataclass(frozen=True)
class GpdParams:
    """Generalized Pareto shape ``xi`` (dimensionless) and scale ``beta`` (loss units)."""

    xi: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.xi) and np.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"invalid GPD parameters xi={self.xi}, beta={self.beta}")

    @property
    def upper(self) -> float:
        """Upper support endpoint: ``-beta/xi`` for negative shape, else infinity."""
        if self.xi < 0 and abs(self.xi) >= XI_EPS:
            return -self.beta / self.xi
        return math.inf

    @property
    def is_exponential(self) -> bool:
        return abs(self.xi) < XI_EPS


# ----------------------------------------------------------------------------
# Normal / LogNormal
# ----------------------------------------------------------------------------

def normal_pdf(x, p: NormalParams):
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    return _out(np.exp(-0.5 * z * z) / (p.sigma * _SQRT2PI))


def normal_logpdf(x, p: NormalParams):
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    return _out(-0.5 * z * z - math.log(p.sigma * _SQRT2PI))


def normal_cdf(x, p: NormalParams):
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    return _out(special.ndtr(z))


def normal_quantile(prob, p: NormalParams):
    prob = np.asarray(prob, dtype=float)
    if np.any((prob <= 0) | (prob >= 1)):
        raise DomainError("Normal quantile needs 0 < prob < 1")
    return _out(p.mu + p.sigma * special.ndtri(prob))


def lognormal_pdf(x, p: LogNormalParams):
    """LogNormal density; raises :class:`DomainError` for any ``x <= 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("LogNormal density is defined for x > 0 only")
    z = (np.log(x) - p.mu_log) / p.sigma_log
    return _out(np.exp(-0.5 * z * z) / (x * p.sigma_log * _SQRT2PI))


def lognormal_logpdf(x, p: LogNormalParams):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("LogNormal density is defined for x > 0 only")
    lx = np.log(x)
    z = (lx - p.mu_log) / p.sigma_log
    return _out(-0.5 * z * z - lx - math.log(p.sigma_log * _SQRT2PI))


def lognormal_cdf(x, p: LogNormalParams):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (np.log(np.where(x > 0, x, 1.0)) - p.mu_log) / p.sigma_log
    return _out(np.where(x > 0, special.ndtr(z), 0.0))


def lognormal_quantile(prob, p: LogNormalParams):
    prob = np.asarray(prob, dtype=float)
    if np.any((prob <= 0) | (prob >= 1)):
        raise DomainError("LogNormal quantile needs 0 < prob < 1")
    return _out(np.exp(p.mu_log + p.sigma_log * special.ndtri(prob)))


# ----------------------------------------------------------------------------
# Generalized Pareto
# ----------------------------------------------------------------------------

def gpd_cdf(y, p: GpdParams):
    """GPD distribution function of the excess ``y``.

    Inputs below 0 give 0 and inputs above the upper endpoint (negative
    shape) give 1, so the function is safe to compose over any real ``y``.
    """
    y = np.asarray(y, dtype=float)
    yc = np.clip(y, 0.0, p.upper)
    if p.is_exponential:
        out = -np.expm1(-yc / p.beta)
    else:
        with np.errstate(divide="ignore"):
            out = -np.expm1(-np.log1p(p.xi * yc / p.beta) / p.xi)
    out = np.where(y >= p.upper, 1.0, out)
    return _out(np.clip(out, 0.0, 1.0))


def gpd_sf(y, p: GpdParams):
    """Survival function ``1 - gpd_cdf``, computed directly for precision in the tail."""
    y = np.asarray(y, dtype=float)
    yc = np.clip(y, 0.0, p.upper)
    if p.is_exponential:
        out = np.exp(-yc / p.beta)
    else:
        with np.errstate(divide="ignore"):
            out = np.exp(-np.log1p(p.xi * yc / p.beta) / p.xi)
    return _out(np.where(y >= p.upper, 0.0, out))


def _excess_from_log_tail(log_tail, p: GpdParams):
    if p.is_exponential:
        out = -p.beta * log_tail
    else:
        out = p.beta / p.xi * np.expm1(-p.xi * log_tail)
    return np.maximum(out, 0.0)


def gpd_quantile(prob, p: GpdParams):
    prob = np.asarray(prob, dtype=float)
    if np.any(~((prob >= 0) & (prob < 1))):
        raise DomainError("GPD quantile needs 0 <= prob < 1")
    return _out(_excess_from_log_tail(np.log1p(-prob), p))


def gpd_isf(tail, p: GpdParams):
    """Excess whose survival probability is ``tail`` (``0 < tail <= 1``)."""
    tail = np.asarray(tail, dtype=float)
    if np.any(~((tail > 0) & (tail <= 1))):
        raise DomainError("GPD inverse survival needs 0 < tail <= 1")
    return _out(_excess_from_log_tail(np.log(tail), p))


def gpd_logpdf(y, p: GpdParams):
    """Log density; ``-inf`` outside the support."""
    y = np.asarray(y, dtype=float)
    inside = (y >= 0) & (y <= p.upper)
    yc = np.where(inside, y, 0.0)
    if p.is_exponential:
        out = -math.log(p.beta) - yc / p.beta
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -math.log(p.beta) - (1.0 + 1.0 / p.xi) * np.log1p(p.xi * yc / p.beta)
    return _out(np.where(inside, out, -np.inf))


def gpd_pdf(y, p: GpdParams):
    return _out(np.exp(gpd_logpdf(y, p)))


def gpd_loglik(excesses, p: GpdParams) -> float:
    """Sum of GPD log densities; ``-inf`` if any excess lies off the support."""
    y = np.asarray(excesses, dtype=float).ravel()
    if y.size == 0:
        raise DomainError("log-likelihood of an empty sample")
    return float(np.sum(gpd_logpdf(y, p)))
