"""
Tail fit, VaR and Expected Shortfall
====================================

Fit a GPD to excesses over a high threshold and compare the closed-form VaR
and ES with the empirical order-statistic estimates.
"""

import math

import numpy as np
from scipy import integrate

from potevt import pipeline, pot
from potevt.dist import GpdParams

###############################################################################
# 100,000 heavy-tailed losses.
series = pipeline.simulate(seed=7, n=100_000, model=GpdParams(0.25, 1.0))

###############################################################################
# Threshold at the empirical 90% quantile, so m/N = 0.1.
u = pot.empirical_var(series, 0.90).var
f = pot.fit_pot(series, u)
print(f"u={u:.4f} N={f.N} m={f.m} xi={f.params.xi:.4f} beta={f.params.beta:.4f}")

###############################################################################
# Estimates per confidence level.
for alpha in (0.95, 0.99, 0.995, 0.999):
    closed = pot.es_pot(alpha, f)
    emp = pot.empirical_es(series, alpha)
    print(f"alpha={alpha}: VaR {closed.var:8.4f} (empirical {emp.var:8.4f})  "
          f"ES {closed.es:8.4f} (empirical {emp.es:8.4f})")

###############################################################################
# The closed-form ES is the average of VaR over (alpha, 1). Check it by
# integrating the VaR curve numerically, parameterised by tail probability.
alpha = 0.99


def integrand(t):
    return pot.var_from_tail_prob((1 - alpha) * math.exp(-t), f) * math.exp(-t)


numeric = integrate.quad(integrand, 0, 700, limit=500)[0]
print(f"closed form {pot.es_pot(alpha, f).es:.10f}  quadrature {numeric:.10f}")

###############################################################################
# Beyond about xi = 1 the tail has no mean; VaR exists but ES does not.
heavy = pot.PotFit(GpdParams(1.2, 1.0), u=0.0, N=1000, m=100)
print(pot.es_pot(0.99, heavy))

###############################################################################
# Estimated tail CDF above u.
x = np.linspace(u, pot.var_pot(0.999, f).var, 6)
print(np.c_[x, pot.tail_cdf_estimate(x, f)])
