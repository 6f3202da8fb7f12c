"""
Normal and LogNormal baselines
==============================

Fit both baseline models to a positive loss sample and split the probability
mass into expected-loss, unexpected-loss and worst-case regions.
"""

import numpy as np

from potevt import dist, fit, pot, pipeline
from potevt.dist import LogNormalParams

###############################################################################
# A seeded LogNormal sample of 20,000 losses.
losses = pipeline.simulate(seed=1, n=20_000, model=LogNormalParams(0.0, 0.5)).values

###############################################################################
# Moment fits divide by n. The Normal density peaks at its mean with height
# 1/(sigma sqrt(2 pi)); the LogNormal peaks at exp(mu - sigma^2), below its mean.
normal = fit.fit_normal(losses).theta
lognormal = fit.fit_lognormal(losses).theta
print(f"Normal:    mu={normal.mu:.4f} sigma2={normal.sigma2:.4f} peak={normal.peak_height:.4f}")
print(f"LogNormal: mu_log={lognormal.mu_log:.4f} sigma2_log={lognormal.sigma2_log:.4f}")
print(f"           mode={lognormal.mode:.4f} mean={lognormal.mean:.4f}")

###############################################################################
# Region masses at a precautionary 99.5% level. VaR is the model quantile.
for model in (normal, lognormal):
    d = pot.risk_decomposition(model, 0.995)
    print(f"{type(model).__name__:16s} x_alpha={d.x_alpha:.4f} "
          f"EL={d.p_el:.4f} UL={d.p_ul:.4f} WC={d.p_wc:.4f}")

###############################################################################
# Densities over the data range, ready for plotting.
x = np.linspace(0.05, np.quantile(losses, 0.999), 200)
curves = np.c_[x, dist.normal_pdf(x, normal), dist.lognormal_pdf(x, lognormal)]
print(curves[::50])

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    plt.hist(losses, bins=100, density=True, alpha=0.4)
    plt.plot(x, curves[:, 1], label="Normal")
    plt.plot(x, curves[:, 2], label="LogNormal")
    plt.legend()
    plt.show()
