"""Peaks-over-threshold tail modeling: GPD fitting, VaR and Expected Shortfall."""

from .dist import (GpdParams, LogNormalParams, NormalParams, gpd_cdf, gpd_logpdf,
                   gpd_loglik, gpd_pdf, gpd_quantile, gpd_sf, lognormal_cdf, lognormal_pdf,
                   lognormal_quantile, normal_cdf, normal_pdf, normal_quantile)
from .errors import (ConfigError, ConvergenceError, DecompositionError, DegenerateDataError,
                     DomainError, InputError, InsufficientDataError, OutOfTailError, PotError)
from .fit import FitResult, fit_gpd_mle, fit_gpd_mle_fixed_shape, fit_lognormal, fit_normal
from .ingest import LossSeries, load_series, parse_series, write_series
from .pot import (PotFit, RiskDecomposition, RiskEstimate, empirical_es, empirical_var,
                  es_pot, excesses, fit_pot, risk_decomposition, tail_cdf_estimate, var_pot)
from .diagnostics import (BorderlineReport, DiagnosticsCurve, borderline_sensitivity,
                          mean_excess_curve, risk_curves, threshold_stability)

__version__ = "0.1.0"
