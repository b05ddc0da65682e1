"""Distribution calculus for the shrinkage-prior family and its four bases.

The heavy-tailed prior on the folded half line is the scale-Beta mixture of
exponential-power laws; it equals the ratio of a generalised Gamma and a
generalised Beta of the second kind, which is what the exact sampler uses.
Densities, CDFs, quantiles and moments are closed forms in the confluent
and generalised hypergeometric functions from :mod:`gambel.specfun`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import BracketError, DomainError, MomentError
from .specfun import (
    DEFAULT_CONTROL,
    gen_hyp,
    phi,
    reg_lower_inc_gamma,
    tricomi_psi,
)

__all__ = [
    "GambelParams",
    "EPParams",
    "GGParams",
    "GB2Params",
    "G3BParams",
    "GammaBetaRatioParams",
    "HORSESHOE",
    "ep_pdf",
    "ep_cdf",
    "ep_sample",
    "gg_pdf_cdf",
    "gg_sample",
    "gb2_pdf",
    "gb2_sample",
    "g3b_pdf",
    "g3b_sample",
    "weight_to_coefficient",
    "gambel_pdf",
    "gambel_logpdf",
    "gambel_pdf_grad",
    "gambel_cdf",
    "gambel_sf",
    "gambel_cdf_grid",
    "gambel_quantile",
    "gambel_moment",
    "gambel_variance",
    "gambel_kurtosis",
    "gambel_kurtosis_approx",
    "gambel_sample",
    "gamma_beta_ratio",
]

# The two-term 2F2 CDF expansion cancels like e^z between its terms; past
# this argument the survival integral is the accurate route.
_CDF_SERIES_MAX_Z = 10.0
# Gamma(1/q - b) and Beta(a + 1/q, b - 1/q) blow up when b - 1/q is an
# integer; within this distance the CDF falls back to quadrature.
_CDF_POLE_GUARD = 1e-3


def _require_positive(**kwargs):
    for name, v in kwargs.items():
        if not (v > 0.0) or not math.isfinite(v):
            raise DomainError(f"{name} must be a positive finite real, got {v}")


@dataclass(frozen=True)
class GambelParams:
    """Hyperparameters (q, a, b, xi) of the shrinkage prior family.

    q  shape exponent of the exponential-power kernel
    a  tail shape: density tails decay like |x|^-(a q + 1)
    b  origin shape: the density is unbounded at zero iff b <= 1/q
    xi scale
    """

    q: float
    a: float
    b: float
    xi: float

    def __post_init__(self):
        _require_positive(q=self.q, a=self.a, b=self.b, xi=self.xi)

    @property
    def singular_at_zero(self) -> bool:
        return self.b <= 1.0 / self.q

    @property
    def tail_exponent(self) -> float:
        return self.a * self.q + 1.0


HORSESHOE = GambelParams(2.0, 0.5, 0.5, 1.0)


@dataclass(frozen=True)
class EPParams:
    """Exponential-power law with shape q and shrinkage weight kappa."""

    q: float
    kappa: float

    def __post_init__(self):
        _require_positive(q=self.q)
        if not (0.0 < self.kappa < 1.0):
            raise DomainError(f"kappa must lie in (0,1), got {self.kappa}")

    @property
    def sd(self) -> float:
        """Scale lambda = ((1-kappa)/kappa)^(1/q)."""
        return ((1.0 - self.kappa) / self.kappa) ** (1.0 / self.q)


@dataclass(frozen=True)
class GGParams:
    """Generalised Gamma: density ~ x^(d-1) exp(-(x/a)^q) on (0, inf)."""

    a: float
    d: float
    q: float

    def __post_init__(self):
        _require_positive(a=self.a, d=self.d, q=self.q)


@dataclass(frozen=True)
class GB2Params:
    """Generalised Beta of the second kind with power p and scale q_scale."""

    p: float
    q_scale: float
    a: float
    b: float

    def __post_init__(self):
        _require_positive(p=self.p, q_scale=self.q_scale, a=self.a, b=self.b)


@dataclass(frozen=True)
class G3BParams:
    """Three-parameter generalised Beta on (0,1); xi = 1 is Beta(a, b)."""

    a: float
    b: float
    xi: float

    def __post_init__(self):
        _require_positive(a=self.a, b=self.b, xi=self.xi)


@dataclass(frozen=True)
class GammaBetaRatioParams:
    """Ratio Z = X/Y with X ~ Gamma(beta, lam) and Y ~ Beta(a, b)."""

    beta: float
    lam: float
    a: float
    b: float

    def __post_init__(self):
        _require_positive(beta=self.beta, lam=self.lam, a=self.a, b=self.b)


# ---------------------------------------------------------------------------
# exponential power

def ep_pdf(params: EPParams, x: float) -> float:
    q, kappa = params.q, params.kappa
    ph = phi(q)
    log_norm = (
        math.log(q) + math.log(ph) - math.log(2.0)
        - math.log(1.0 / kappa - 1.0) / q - sc.gammaln(1.0 / q)
    )
    return math.exp(log_norm - kappa * (ph * abs(x)) ** q / (1.0 - kappa))


def ep_cdf(params: EPParams, x: float) -> float:
    """Analytic CDF via the regularised incomplete gamma of |x|."""
    if x == 0.0:
        return 0.5
    q = params.q
    p_half = reg_lower_inc_gamma(1.0 / q, (phi(q) * abs(x) / params.sd) ** q)
    return 0.5 + 0.5 * math.copysign(p_half, x)


def ep_sample(params: EPParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """Signed folded-GG draws: sign * (lam/phi) * Gamma(1/q, 1)^(1/q)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    q = params.q
    g = rng.gamma(1.0 / q, 1.0, size=n)
    signs = rng.integers(0, 2, size=n) * 2 - 1
    return signs * (params.sd / phi(q)) * g ** (1.0 / q)


# ---------------------------------------------------------------------------
# generalised Gamma / GB2 / G3B

def gg_pdf_cdf(params: GGParams, x: float) -> tuple[float, float]:
    if x <= 0.0:
        raise DomainError(f"GG support is (0, inf), got {x}")
    a, d, q = params.a, params.d, params.q
    log_pdf = (
        math.log(q) - d * math.log(a) - sc.gammaln(d / q)
        + (d - 1.0) * math.log(x) - (x / a) ** q
    )
    return math.exp(log_pdf), reg_lower_inc_gamma(d / q, (x / a) ** q)


def gg_sample(params: GGParams, rng: np.random.Generator, n: int) -> np.ndarray:
    if n < 1:
        raise DomainError("n must be >= 1")
    g = rng.gamma(params.d / params.q, 1.0, size=n)
    return params.a * g ** (1.0 / params.q)


def gb2_pdf(params: GB2Params, x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"GB2 support is (0, inf), got {x}")
    p, s, a, b = params.p, params.q_scale, params.a, params.b
    r = x / s
    log_pdf = (
        math.log(p) + (a * p - 1.0) * math.log(r)
        - (a + b) * math.log1p(r ** p) - math.log(s) - sc.betaln(a, b)
    )
    return math.exp(log_pdf)


def gb2_sample(params: GB2Params, rng: np.random.Generator, n: int) -> np.ndarray:
    if n < 1:
        raise DomainError("n must be >= 1")
    ga = rng.gamma(params.a, 1.0, size=n)
    gb = rng.gamma(params.b, 1.0, size=n)
    return params.q_scale * (ga / gb) ** (1.0 / params.p)


def g3b_pdf(params: G3BParams, x: float) -> float:
    if not (0.0 < x < 1.0):
        raise DomainError(f"G3B support is (0,1), got {x}")
    a, b, xi = params.a, params.b, params.xi
    log_pdf = (
        a * math.log(xi) + (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x)
        - (a + b) * math.log1p(-(1.0 - xi) * x) - sc.betaln(a, b)
    )
    return math.exp(log_pdf)


def g3b_sample(params: G3BParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """Two-Gamma construction: x1/(x0+x1) with rate ratio xi."""
    if n < 1:
        raise DomainError("n must be >= 1")
    x1 = rng.gamma(params.a, 1.0 / params.xi, size=n)
    x0 = rng.gamma(params.b, 1.0, size=n)
    return x1 / (x0 + x1)


def weight_to_coefficient(g3b: G3BParams) -> GB2Params:
    """Map the shrinkage-weight law to the law of (1-kappa)/kappa.

    Note the shape swap: a G3B(a, b, xi) weight gives a GB2(1, xi, b, a)
    shrinkage coefficient.
    """
    return GB2Params(1.0, g3b.xi, g3b.b, g3b.a)


# ---------------------------------------------------------------------------
# the Gambel family

@lru_cache(maxsize=256)
def _gambel_consts(params: GambelParams):
    q, a, b, xi = params.q, params.a, params.b, params.xi
    ph = phi(q)
    x0 = a + 1.0 / q
    y0 = 1.0 + 1.0 / q - b
    # log of Gamma(a+1/q)/Gamma(1/q) * q/(2 B(a,b)) * phi/xi^{1/q}
    log_pref = (
        sc.gammaln(x0) - sc.gammaln(1.0 / q) + math.log(q) - math.log(2.0)
        - sc.betaln(a, b) + math.log(ph) - math.log(xi) / q
    )
    return ph, x0, y0, log_pref


def _gambel_z(params: GambelParams, theta: float) -> float:
    ph = _gambel_consts(params)[0]
    return (ph * abs(theta)) ** params.q / params.xi


def gambel_logpdf(params: GambelParams, theta: float, folded: bool = False) -> float:
    """Log density; +inf at the origin when the density is unbounded there."""
    if folded and theta <= 0.0:
        raise DomainError("folded density requires theta > 0")
    ph, x0, y0, log_pref = _gambel_consts(params)
    if folded:
        log_pref = log_pref + math.log(2.0)
    z = (ph * abs(theta)) ** params.q / params.xi
    if z == 0.0:
        if params.singular_at_zero:
            return math.inf
        # finite limit: pref * Gamma(b - 1/q) / Gamma(a + b)
        return log_pref + sc.gammaln(params.b - 1.0 / params.q) - sc.gammaln(params.a + params.b)
    return log_pref + tricomi_psi(x0, y0, z).log()


def gambel_pdf(params: GambelParams, theta: float, folded: bool = False) -> float:
    """Density of the prior (symmetric on R) or its folded version on R+.

    Returns +inf at theta = 0 when the density is unbounded there
    (b <= 1/q), the finite limit otherwise.
    """
    lp = gambel_logpdf(params, theta, folded)
    return math.inf if lp == math.inf else math.exp(lp)


def gambel_pdf_grad(params: GambelParams, theta: float, folded: bool = False) -> float:
    """d/dtheta of the density for theta > 0, via dPsi/dz = -x Psi(x+1, y+1, z)."""
    if theta <= 0.0:
        raise DomainError("gambel_pdf_grad requires theta > 0")
    ph, x0, y0, log_pref = _gambel_consts(params)
    if folded:
        log_pref = log_pref + math.log(2.0)
    q, xi = params.q, params.xi
    z = (ph * theta) ** q / xi
    dz = q * ph ** q * theta ** (q - 1.0) / xi
    psi1 = tricomi_psi(x0 + 1.0, y0 + 1.0, z)
    return -x0 * math.exp(log_pref + psi1.log()) * dz


def _cdf_series(params: GambelParams, theta: float) -> float:
    """Two-term 2F2 expansion of the folded CDF (z must be moderate)."""
    q, a, b, xi = params.q, params.a, params.b, params.xi
    ph = _gambel_consts(params)[0]
    w = ph * theta / xi ** (1.0 / q)
    z = w ** q
    iq = 1.0 / q
    beta_ab = math.exp(sc.betaln(a, b))
    t1 = (
        w * q * (sc.gamma(a + iq) * sc.gamma(b - iq) / sc.gamma(a + b))
        / (sc.gamma(iq) * beta_ab)
        * gen_hyp([iq, a + iq], [1.0 + iq, 1.0 + iq - b], z).value
    )
    t2 = (
        w ** (q * b) * sc.gamma(iq - b) / (b * sc.gamma(iq) * beta_ab)
        * gen_hyp([b, b + a], [1.0 + b, 1.0 + b - iq], z).value
    )
    return t1 + t2


def _cdf_quad(params: GambelParams, theta: float) -> float:
    val, _ = integrate.quad(
        lambda t: gambel_pdf(params, t, folded=True),
        0.0, theta, epsabs=1e-13, epsrel=1e-11, limit=200,
    )
    return val


def _sf_quad(params: GambelParams, theta: float) -> float:
    """Survival by tail quadrature with the u = 1/t substitution."""
    val, _ = integrate.quad(
        lambda u: gambel_pdf(params, 1.0 / u, folded=True) / u ** 2,
        0.0, 1.0 / theta, epsabs=1e-300, epsrel=1e-11, limit=200,
    )
    return val


def _cdf_pole_near(params: GambelParams) -> bool:
    bp = params.b - 1.0 / params.q
    return abs(bp - round(bp)) < _CDF_POLE_GUARD


def gambel_cdf(params: GambelParams, theta: float) -> float:
    """CDF of the folded distribution on (0, inf), clamped to [0, 1].

    Uses the hypergeometric expansion for moderate arguments; falls back to
    quadrature of the density when b - 1/q sits near an integer (where the
    expansion's coefficients hit poles) or when its two exponentially
    growing terms would cancel catastrophically.
    """
    if theta <= 0.0:
        if theta == 0.0:
            return 0.0
        raise DomainError("gambel_cdf uses the folded convention: theta > 0")
    z = _gambel_z(params, theta)
    if _cdf_pole_near(params):
        if z > _CDF_SERIES_MAX_Z:
            return min(1.0, max(0.0, 1.0 - _sf_quad(params, theta)))
        return min(1.0, max(0.0, _cdf_quad(params, theta)))
    if z <= _CDF_SERIES_MAX_Z:
        return min(1.0, max(0.0, _cdf_series(params, theta)))
    return min(1.0, max(0.0, 1.0 - _sf_quad(params, theta)))


def gambel_sf(params: GambelParams, theta: float) -> float:
    """Survival function of the folded distribution, accurate in the tail."""
    if theta <= 0.0:
        return 1.0
    z = _gambel_z(params, theta)
    if z <= _CDF_SERIES_MAX_Z and not _cdf_pole_near(params):
        s = 1.0 - _cdf_series(params, theta)
        if s > 1e-3:
            return min(1.0, max(0.0, s))
    return min(1.0, max(0.0, _sf_quad(params, theta)))


def gambel_cdf_grid(params: GambelParams, xs: np.ndarray) -> np.ndarray:
    """CDF evaluated on an ascending grid.

    For parameter sets where every point would need its own quadrature
    fallback, the grid is evaluated cumulatively with fixed-order panels,
    which is orders of magnitude cheaper than independent calls.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or np.any(np.diff(xs) < 0.0) or np.any(xs <= 0.0):
        raise DomainError("grid must be ascending and strictly positive")
    if not _cdf_pole_near(params):
        return np.array([gambel_cdf(params, float(x)) for x in xs])
    nodes, weights = np.polynomial.legendre.leggauss(24)
    out = np.empty_like(xs)
    acc = _cdf_quad(params, float(xs[0]))
    out[0] = acc
    for i in range(1, len(xs)):
        lo, hi = xs[i - 1], xs[i]
        if hi > lo:
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            ts = mid + half * nodes
            vals = np.array([gambel_pdf(params, float(t), folded=True) for t in ts])
            acc += half * float(np.dot(weights, vals))
        out[i] = acc
    return np.clip(out, 0.0, 1.0)


def gambel_quantile(params: GambelParams, p: float) -> float:
    """Inverse folded CDF by bracketing and bisection to |F - p| < 1e-10."""
    if not (0.0 < p < 1.0):
        raise DomainError(f"quantile level must lie in (0,1), got {p}")
    lo = 1e-12
    hi = params.xi ** (1.0 / params.q) / phi(params.q)
    it = 0
    while gambel_cdf(params, hi) < p:
        hi *= 2.0
        it += 1
        if it > 120:
            raise BracketError(f"quantile bracketing failed for p={p}, {params}")
    if gambel_cdf(params, lo) > p:
        raise BracketError(f"quantile bracketing failed near zero for p={p}")
    f = lambda t: gambel_cdf(params, t) - p
    from scipy.optimize import brentq

    root = brentq(f, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=300)
    if abs(gambel_cdf(params, root) - p) > 1e-10:
        raise BracketError(f"quantile refinement failed for p={p}, {params}")
    return float(root)


def gambel_moment(params: GambelParams, k: int) -> float:
    """k-th moment of the folded distribution; exists only for k < a q."""
    if k < 0 or k != int(k):
        raise DomainError(f"moment order must be a nonnegative integer, got {k}")
    if k == 0:
        return 1.0
    q, a, b, xi = params.q, params.a, params.b, params.xi
    if not (k < a * q):
        raise MomentError(f"moment of order {k} does not exist: requires k < a q = {a * q}")
    log_m = (
        k * (math.log(xi) / q - math.log(phi(q)))
        + sc.gammaln((1.0 + k) / q) + sc.gammaln(a - k / q) + sc.gammaln(b + k / q)
        - sc.gammaln(1.0 / q) - sc.gammaln(a) - sc.gammaln(b)
    )
    return math.exp(log_m)


def gambel_variance(params: GambelParams) -> float:
    """Variance of the symmetric (unfolded) prior: the second moment."""
    return gambel_moment(params, 2)


def gambel_kurtosis(params: GambelParams) -> float:
    """Exact kurtosis m4 / m2^2 of the symmetric prior (needs a > 4/q)."""
    return gambel_moment(params, 4) / gambel_moment(params, 2) ** 2


def gambel_kurtosis_approx(params: GambelParams) -> float:
    """Large-parameter kurtosis approximation (3a(qb+2) / (b(qa-4)))^(2/q)."""
    q, a, b = params.q, params.a, params.b
    if a * q <= 4.0:
        raise DomainError(f"kurtosis approximation needs a > 4/q, got a={a}, q={q}")
    return (3.0 * a * (q * b + 2.0) / (b * (q * a - 4.0))) ** (2.0 / q)


def gambel_sample(
    params: GambelParams, rng: np.random.Generator, n: int, folded: bool = False
) -> np.ndarray:
    """Exact draws via the ratio of a GG numerator and a GB2 denominator."""
    if n < 1:
        raise DomainError("n must be >= 1")
    q, a, b, xi = params.q, params.a, params.b, params.xi
    x = gg_sample(GGParams(xi ** (1.0 / q), 1.0, q), rng, n)
    y = gb2_sample(GB2Params(q, phi(q), a, b), rng, n)
    theta = x / y
    if folded:
        return theta
    signs = rng.integers(0, 2, size=n) * 2 - 1
    return signs * theta


# ---------------------------------------------------------------------------
# Gamma-Beta ratio

def gamma_beta_ratio(params: GammaBetaRatioParams, z: float) -> tuple[float, float]:
    """(density, cdf) of Z = X/Y for X ~ Gamma(beta, lam), Y ~ Beta(a, b)."""
    if z <= 0.0:
        raise DomainError(f"support is (0, inf), got {z}")
    beta, lam, a, b = params.beta, params.lam, params.a, params.b
    from .specfun import kummer_m

    log_c_pdf = (
        beta * math.log(lam) + sc.betaln(beta + a, b) - sc.gammaln(beta)
        - sc.betaln(a, b) + (beta - 1.0) * math.log(z)
    )
    pdf = math.exp(log_c_pdf) * kummer_m(beta + a, beta + a + b, -lam * z).to_float()
    log_c_cdf = (
        sc.betaln(b, a + beta) + beta * math.log(lam * z)
        - sc.gammaln(beta + 1.0) - sc.betaln(a, b)
    )
    cdf = math.exp(log_c_cdf) * gen_hyp(
        [beta, a + beta], [beta + 1.0, a + b + beta], -lam * z
    ).value
    return pdf, min(1.0, max(0.0, cdf))
