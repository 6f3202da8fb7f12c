"""
Out-of-sample backtest
======================

Fit on the first half of a series and count how often the second half exceeds
each VaR level; a calibrated model lands inside the binomial interval.
"""

from potevt import pipeline
from potevt.dist import GpdParams

series = pipeline.simulate(seed=11, n=200_000, model=GpdParams(0.2, 1.0))
fit, rows = pipeline.backtest(series, split=0.5, alphas=[0.95, 0.99, 0.995, 0.999],
                              threshold_quantile=0.9)
print(f"training fit: xi={fit.params.xi:.4f} beta={fit.params.beta:.4f} u={fit.u:.4f}")
for r in rows:
    print(f"alpha={r.alpha}: observed {r.observed:5d}  expected {r.expected:7.1f}  "
          f"99% interval [{r.lower}, {r.upper}]  inside={r.inside}")
