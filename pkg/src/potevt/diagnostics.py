"""
Threshold diagnostics: mean-excess curve, refit stability of the shape and
modified scale, VaR/ES across thresholds, and a sensitivity analysis for
observations sitting close to the chosen threshold.

Grid points that cannot be fitted are marked absent (NaN with
``present=False``); they are never interpolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PotError
from .fit import MIN_EXCESSES
from .pot import _values, es_pot, fit_pot

MEAN_EXCESS = "mean-excess"
REFIT_XI = "refit-xi"
REFIT_MODIFIED_SCALE = "refit-modified-scale"
VAR_ALPHA = "var-alpha"
ES_ALPHA = "es-alpha"


@dataclass(frozen=True)
class DiagnosticsCurve:
    u_grid: np.ndarray
    stat: np.ndarray
    stat_kind: str
    m_per_u: np.ndarray

    def __post_init__(self):
        if not (len(self.u_grid) == len(self.stat) == len(self.m_per_u)):
            raise DomainError("curve arrays must share one length")

    @property
    def present(self) -> np.ndarray:
        return ~np.isnan(self.stat)

    def rows(self):
        """Yield ``(u, m, stat_or_None)`` per grid point."""
        for u, m, s in zip(self.u_grid, self.m_per_u, self.stat):
            yield float(u), int(m), (None if math.isnan(s) else float(s))


def _grid(u_grid) -> np.ndarray:
    g = np.asarray(u_grid, dtype=float).ravel()
    if g.size == 0:
        raise DomainError("threshold grid is empty")
    if not np.all(np.isfinite(g)):
        raise DomainError("threshold grid must be finite")
    if np.any(np.diff(g) <= 0):
        raise DomainError("threshold grid must be strictly increasing")
    return g


def exceedance_counts(series, u_grid) -> np.ndarray:
    x = np.sort(_values(series))
    g = _grid(u_grid)
    return x.size - np.searchsorted(x, g, side="right")


def mean_excess_curve(series, u_grid) -> DiagnosticsCurve:
    """Empirical mean excess ``mean(x - u | x > u)`` at each threshold."""
    x = np.sort(_values(series))
    g = _grid(u_grid)
    idx = np.searchsorted(x, g, side="right")
    m = x.size - idx
    # suffix sums summed from the top so small tails keep their precision
    suffix = np.concatenate([np.cumsum(x[::-1])[::-1], [0.0]])
    with np.errstate(invalid="ignore", divide="ignore"):
        stat = np.where(m > 0, suffix[idx] / np.maximum(m, 1) - g, np.nan)
    return DiagnosticsCurve(g, stat, MEAN_EXCESS, m)


def slope(curve: DiagnosticsCurve) -> float:
    """Least-squares slope of the present points of ``curve``."""
    ok = curve.present
    if ok.sum() < 2:
        raise DomainError("need two present points for a slope")
    return float(np.polyfit(curve.u_grid[ok], curve.stat[ok], 1)[0])


def _refits(series, g, min_excesses):
    fits = []
    for u in g:
        try:
            fits.append(fit_pot(series, float(u), min_excesses=min_excesses))
        except PotError:
            fits.append(None)
    return fits


def threshold_stability(series, u_grid, min_excesses: int = MIN_EXCESSES):
    """Refit the GPD at every threshold.

    Returns
    -------
    (DiagnosticsCurve, DiagnosticsCurve)
        Refitted shape and the modified scale ``beta(u) - xi(u) * u``. Both
        are flat in ``u`` when the GPD holds above the lowest threshold.
    """
    g = _grid(u_grid)
    m = exceedance_counts(series, g)
    xi = np.full(g.size, np.nan)
    mod = np.full(g.size, np.nan)
    for i, f in enumerate(_refits(series, g, min_excesses)):
        if f is not None and f.converged:
            xi[i] = f.params.xi
            mod[i] = f.params.beta - f.params.xi * f.u
    return (DiagnosticsCurve(g, xi, REFIT_XI, m),
            DiagnosticsCurve(g, mod, REFIT_MODIFIED_SCALE, m))


def risk_curves(series, u_grid, alpha: float, min_excesses: int = MIN_EXCESSES):
    """Closed-form VaR and ES at level ``alpha`` refitted at every threshold."""
    g = _grid(u_grid)
    m = exceedance_counts(series, g)
    var = np.full(g.size, np.nan)
    es = np.full(g.size, np.nan)
    for i, f in enumerate(_refits(series, g, min_excesses)):
        if f is None or not f.converged:
            continue
        try:
            r = es_pot(alpha, f)
        except PotError:
            continue
        var[i] = r.var
        if r.es is not None:
            es[i] = r.es
    return DiagnosticsCurve(g, var, VAR_ALPHA, m), DiagnosticsCurve(g, es, ES_ALPHA, m)


@dataclass(frozen=True)
class BorderlineReport:
    """Estimates at ``u - delta``, ``u`` and ``u + delta`` plus band membership weights.

    ``band_weights`` is None when ``delta == 0``: the band is empty and the
    linear ramp is undefined.
    """

    alpha: float
    delta: float
    thresholds: tuple
    m: tuple
    fits: tuple
    var: tuple
    es: tuple
    same_exceedances: bool
    band_values: np.ndarray
    band_weights: Optional[np.ndarray]

    @property
    def var_excess(self) -> tuple:
        """VaR minus its threshold, i.e. the part supplied by the refitted GPD."""
        return tuple(v - u for v, u in zip(self.var, self.thresholds))

    @property
    def var_min(self) -> float:
        return min(self.var)

    @property
    def var_max(self) -> float:
        return max(self.var)

    @property
    def var_spread(self) -> float:
        return self.var_max - self.var_min

    @property
    def es_defined(self) -> bool:
        return all(e is not None for e in self.es)

    @property
    def es_min(self) -> Optional[float]:
        return min(self.es) if self.es_defined else None

    @property
    def es_max(self) -> Optional[float]:
        return max(self.es) if self.es_defined else None

    @property
    def es_spread(self) -> Optional[float]:
        return self.es_max - self.es_min if self.es_defined else None


def membership_weights(values, u: float, delta: float) -> np.ndarray:
    """Linear ramp ``(x - (u - delta)) / (2 delta)`` clamped to [0, 1]."""
    if not delta > 0:
        raise DomainError("membership weights need delta > 0")
    x = np.asarray(values, dtype=float)
    return np.clip((x - (u - delta)) / (2.0 * delta), 0.0, 1.0)


def borderline_sensitivity(series, u: float, delta: float, alpha: float,
                           min_excesses: int = MIN_EXCESSES) -> BorderlineReport:
    """How much VaR/ES move when the threshold shifts by ``delta`` either way.

    Raises
    ------
    PotError
        If a fit or estimate fails at any of the three thresholds; the message
        names that threshold.
    """
    if not (delta >= 0 and math.isfinite(delta)):
        raise DomainError(f"delta must be a finite non-negative number, got {delta!r}")
    x = _values(series)
    thresholds = (u - delta, u, u + delta)
    cache = {}
    fits, var, es = [], [], []
    for t in thresholds:
        if t not in cache:
            try:
                f = fit_pot(x, t, min_excesses=min_excesses)
                r = es_pot(alpha, f)
            except PotError as exc:
                raise type(exc)(f"at threshold {t!r}: {exc}") from exc
            cache[t] = (f, r)
        f, r = cache[t]
        fits.append(f)
        var.append(r.var)
        es.append(r.es)

    sets = [np.flatnonzero(x > t) for t in thresholds]
    same = all(np.array_equal(sets[0], s) for s in sets[1:])
    band = np.sort(x[(x > u - delta) & (x <= u + delta)])
    weights = membership_weights(band, u, delta) if delta > 0 else None
    return BorderlineReport(alpha, float(delta), thresholds, tuple(f.m for f in fits),
                            tuple(fits), tuple(var), tuple(es), same, band, weights)

