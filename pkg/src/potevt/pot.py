"""
Peaks-over-threshold engine: exceedances, the tail CDF estimator,
closed-form VaR/ES from a fitted GPD, empirical order-statistic estimators,
and the expected/unexpected/worst-case region split of a baseline model.

Closed-form ES is ``(VaR + beta - xi*u) / (1 - xi)``, the exact tail average
of the POT VaR curve over ``(alpha, 1)``. ES is undefined for ``xi >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import dist
from .dist import GpdParams, LogNormalParams, NormalParams
from .errors import DecompositionError, DomainError, InsufficientDataError, OutOfTailError
from .fit import MIN_EXCESSES, fit_gpd_mle
from .ingest import LossSeries

POT_CLOSED_FORM = "pot-closed-form"
EMPIRICAL = "empirical"


@dataclass(frozen=True)
class PotFit:
    params: GpdParams
    u: float
    N: int
    m: int
    loglik: float = math.nan
    converged: bool = True
    iterations: int = 0

    def __post_init__(self):
        if not (0 < self.m <= self.N):
            raise DomainError(f"need 0 < m <= N, got m={self.m}, N={self.N}")

    @property
    def tail_fraction(self) -> float:
        """``m / N``, the estimated probability of exceeding ``u``."""
        return self.m / self.N

    @property
    def F_u(self) -> float:
        return (self.N - self.m) / self.N


@dataclass(frozen=True)
class RiskEstimate:
    """VaR and ES at one confidence level. ``es`` is None when undefined."""

    alpha: float
    var: float
    es: Optional[float]
    method: str
    degenerate_tail: bool = False

    @property
    def wc_alpha_es(self) -> Optional[float]:
        # display-only worst-case value, alpha * ES
        return None if self.es is None else self.alpha * self.es

    @property
    def wc_tail_mass(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class RiskDecomposition:
    """Probability masses of the expected-loss, unexpected-loss and worst-case regions."""

    p_el: float
    p_ul: float
    p_wc: float
    x_alpha: float
    mean: float
    alpha: float


def _values(series) -> np.ndarray:
    if isinstance(series, LossSeries):
        return series.values
    return np.asarray(series, dtype=float).ravel()


def excesses(series, u: float) -> np.ndarray:
    """Excesses ``x - u`` of the observations strictly above ``u``, in source order."""
    x = _values(series)
    return x[x > u] - u


def fit_pot(series, u: float, min_excesses: int = MIN_EXCESSES) -> PotFit:
    x = _values(series)
    y = excesses(x, u)
    if y.size < min_excesses:
        raise InsufficientDataError(
            f"threshold u={u!r} leaves m={y.size} exceedances; at least {min_excesses} needed")
    res = fit_gpd_mle(y, min_excesses=min_excesses)
    return PotFit(res.theta, float(u), int(x.size), int(y.size), res.loglik,
                  res.converged, res.iterations)


def tail_cdf_estimate(x, fit: PotFit):
    """Estimated loss CDF above the threshold, ``1 - (m/N) * (1 - G(x - u))``."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= fit.u)):
        raise DomainError(f"tail estimator is defined for x >= u = {fit.u}")
    out = 1.0 - fit.tail_fraction * np.asarray(dist.gpd_sf(xa - fit.u, fit.params))
    return float(out) if out.ndim == 0 else out


def _check_alpha(alpha: float, fit: PotFit) -> None:
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if alpha < 1.0 - fit.tail_fraction:
        raise OutOfTailError(
            f"alpha={alpha} is below the modeled tail (1 - m/N = {1.0 - fit.tail_fraction:.6g}); "
            "use empirical_var instead")


def var_from_tail_prob(tail, fit: PotFit):
    """POT quantile for exceedance probability ``tail = 1 - alpha``, with ``0 < tail <= m/N``.

    Working in the tail probability keeps full precision for levels very
    close to 1.
    """
    t = np.asarray(tail, dtype=float)
    # ratio = N(1 - alpha)/m, the conditional survival probability beyond u
    ratio = np.minimum(t / fit.tail_fraction, 1.0)
    out = fit.u + np.asarray(dist.gpd_isf(ratio, fit.params))
    return float(out) if out.ndim == 0 else out


def var_pot(alpha: float, fit: PotFit) -> RiskEstimate:
    _check_alpha(alpha, fit)
    if alpha == 1.0 - fit.tail_fraction:
        return RiskEstimate(alpha, fit.u, None, POT_CLOSED_FORM)
    return RiskEstimate(alpha, var_from_tail_prob(1.0 - alpha, fit), None, POT_CLOSED_FORM)


def _es_from_var(var: float, fit: PotFit) -> Optional[float]:
    xi, beta = fit.params.xi, fit.params.beta
    if xi >= 1.0:
        return None
    if fit.params.is_exponential:
        return var + beta
    return (var + beta - xi * fit.u) / (1.0 - xi)


def es_pot(alpha: float, fit: PotFit) -> RiskEstimate:
    """Closed-form VaR and ES; ``es`` is None when ``xi >= 1`` (infinite mean)."""
    v = var_pot(alpha, fit)
    return RiskEstimate(alpha, v.var, _es_from_var(v.var, fit), POT_CLOSED_FORM)


def _order_index(n: int, alpha: float) -> int:
    # smallest k with k/n >= alpha
    k = min(max(math.ceil(n * alpha), 1), n)
    while k > 1 and (k - 1) / n >= alpha:
        k -= 1
    while k < n and k / n < alpha:
        k += 1
    return k


def empirical_var(series, alpha: float) -> RiskEstimate:
    """Smallest observation whose empirical CDF is at least ``alpha``."""
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    x = np.sort(_values(series))
    if x.size == 0:
        raise DomainError("empirical VaR of an empty sample")
    return RiskEstimate(alpha, float(x[_order_index(x.size, alpha) - 1]), None, EMPIRICAL)


def empirical_es(series, alpha: float) -> RiskEstimate:
    """Mean of observations strictly above the empirical VaR.

    With nothing above the VaR the tail is degenerate: ``es = var`` and
    ``degenerate_tail`` is set.
    """
    v = empirical_var(series, alpha).var
    x = _values(series)
    tail = x[x > v]
    if tail.size == 0:
        return RiskEstimate(alpha, v, v, EMPIRICAL, degenerate_tail=True)
    return RiskEstimate(alpha, v, math.fsum(tail) / tail.size, EMPIRICAL)


def risk_decomposition(model: Union[NormalParams, LogNormalParams], alpha: float) -> RiskDecomposition:
    """Split probability into (lower, mean], (mean, x_alpha] and (x_alpha, inf).

    The lower bound is the support infimum (0 for LogNormal, -inf for Normal)
    and ``x_alpha`` is the model's alpha-quantile.
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if isinstance(model, NormalParams):
        x_alpha = dist.normal_quantile(alpha, model)
        p_el = float(dist.normal_cdf(model.mean, model))
    elif isinstance(model, LogNormalParams):
        x_alpha = dist.lognormal_quantile(alpha, model)
        p_el = float(dist.lognormal_cdf(model.mean, model))
    else:
        raise DomainError(f"unsupported model {type(model).__name__}")
    if x_alpha < model.mean:
        raise DecompositionError(
            f"alpha={alpha} puts x_alpha={x_alpha:.6g} below the mean {model.mean:.6g}")
    return RiskDecomposition(p_el, alpha - p_el, 1.0 - alpha, float(x_alpha), model.mean, alpha)
