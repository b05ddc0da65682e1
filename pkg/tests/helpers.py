"""Shared oracles for the test-suite: KS machinery and quadrature mixtures."""

import math

import numpy as np
from scipy import integrate, stats

from gambel.distributions import (
    G3BParams,
    GambelParams,
    ep_pdf,
    g3b_pdf,
    gambel_cdf_grid,
)


def ks_test_gambel(samples: np.ndarray, params: GambelParams) -> float:
    """One-sample KS p-value of folded draws against the analytic CDF.

    The CDF is evaluated exactly at every sorted sample point (cumulative
    quadrature for pole parameter sets), then the classical statistic and
    its asymptotic p-value are formed.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    cdf = gambel_cdf_grid(params, xs)
    i = np.arange(1, n + 1)
    d = max(np.max(np.abs(cdf - i / n)), np.max(np.abs(cdf - (i - 1) / n)))
    return float(stats.kstwobign.sf(d * math.sqrt(n)))


def ks_pvalue(samples: np.ndarray, cdf_values: np.ndarray) -> float:
    """KS p-value given exact CDF values at the sorted sample points."""
    n = len(samples)
    order = np.argsort(samples)
    cdf = np.asarray(cdf_values, dtype=float)[order]
    i = np.arange(1, n + 1)
    d = max(np.max(np.abs(cdf - i / n)), np.max(np.abs(cdf - (i - 1) / n)))
    return float(stats.kstwobign.sf(d * math.sqrt(n)))


def mixture_pdf_quad(params: GambelParams, theta: float) -> float:
    """Scale-Beta mixture of exponential-power laws by direct quadrature.

    This is the defining 1-D integral of the prior density over the
    shrinkage weight, independent of the hypergeometric evaluation path.
    """
    from gambel.distributions import EPParams

    g3b = G3BParams(params.a, params.b, params.xi)

    def integrand(k: float) -> float:
        if k <= 0.0 or k >= 1.0:
            return 0.0
        return ep_pdf(EPParams(params.q, k), theta) * g3b_pdf(g3b, k)

    val, _ = integrate.quad(
        integrand, 0.0, 1.0, points=[0.5], epsabs=1e-14, epsrel=1e-11, limit=400
    )
    return val
