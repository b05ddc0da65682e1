"""Special functions underlying the closed-form shrinkage-prior calculus.

Everything here is real-valued and aimed at the parameter ranges that occur
for the prior family: Kummer/Tricomi confluent hypergeometric functions,
generalised hypergeometric series up to 3F3, gamma-function ratios, the
regularised incomplete gamma, and Zolotarev's trigonometric function.

Evaluation strategy for the Tricomi function Psi(x, y, z) with x, z > 0:

* small z: sine-reflection combination of two Kummer series, computed in
  80-bit extended precision because the combination cancels like e^z,
* large z: optimally truncated 2F0-type asymptotic series,
* in between: generalised Gauss-Laguerre quadrature of the Laplace
  integral representation, where neither series route is accurate in
  double arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SeriesControl",
    "SpecialValue",
    "DEFAULT_CONTROL",
    "phi",
    "gamma_ratio",
    "reg_lower_inc_gamma",
    "kummer_m",
    "tricomi_psi",
    "gen_hyp",
    "zolotarev_s",
]

_LD = np.longdouble
_LD_EPS = float(np.finfo(_LD).eps)
_EPS = float(np.finfo(float).eps)

# Above this magnitude a linear value would overflow; switch to log scale.
_LOG_SCALE_LIMIT = 700.0
# Largest z for which the extended-precision reflection route is attempted.
_REFLECT_MAX = 12.0
# Reflection results with a worse estimated error fall through to quadrature.
_REFLECT_ERR_CAP = 1e-9
# Second Tricomi argument closer than this to an integer is perturbed.
_Y_PERTURB_FLOOR = 1e-6


@dataclass(frozen=True)
class SeriesControl:
    """Evaluation controls for the hypergeometric series in this module.

    rel_tol           relative truncation tolerance for partial sums
    max_terms         hard cap on the number of series terms
    asymptotic_switch |z| above which the Tricomi asymptotic branch is used
    """

    rel_tol: float = 1e-13
    max_terms: int = 20_000
    asymptotic_switch: float = 50.0

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError("rel_tol must lie in (0, 1e-6]")
        if self.max_terms < 100:
            raise DomainError("max_terms must be at least 100")
        if self.asymptotic_switch <= 0.0:
            raise DomainError("asymptotic_switch must be positive")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SpecialValue:
    """A computed value together with scaling and accuracy metadata.

    When ``log_scaled`` is set, ``value`` holds the natural log of a
    positive quantity whose linear representation would overflow.
    ``est_error`` is an estimate of the relative error.
    """

    value: float
    log_scaled: bool = False
    est_error: float = 0.0

    def __post_init__(self):
        if self.est_error < 0.0:
            raise DomainError("est_error must be nonnegative")

    def to_float(self) -> float:
        """Linear-scale value (may overflow to inf if log_scaled)."""
        return math.exp(self.value) if self.log_scaled else self.value

    def log(self) -> float:
        """Natural log of the (positive) value."""
        if self.log_scaled:
            return self.value
        if self.value <= 0.0:
            raise DomainError("log of a nonpositive SpecialValue")
        return math.log(self.value)


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0.0 and v == math.floor(v)


# ---------------------------------------------------------------------------
# extended-precision gamma helpers (Stirling series with argument shifting)

_HALF_LOG_2PI = _LD("0.91893853320467274178032973640561763986")
# B_{2n} / (2n (2n-1)) for the Stirling asymptotic series
_STIRLING = [
    _LD(1) / 12, -_LD(1) / 360, _LD(1) / 1260, -_LD(1) / 1680, _LD(1) / 1188,
    -_LD(691) / 360360, _LD(1) / 156, -_LD(3617) / 122400, _LD(43867) / 244188,
    -_LD(174611) / 125400,
]


def _lgamma_ld(v):
    """log Gamma(v) for v > 0 in extended precision."""
    v = _LD(v)
    shift = _LD(0.0)
    while v < 16.0:
        shift += np.log(v)
        v += 1
    r = (v - 0.5) * np.log(v) - v + _HALF_LOG_2PI
    w = 1.0 / (v * v)
    s = _LD(0.0)
    p = 1.0 / v
    for c in _STIRLING:
        s += c * p
        p *= w
    return r + s - shift


def _sinpi_ld(v):
    """sin(pi v) with exact zeros at integers."""
    v = _LD(v)
    n = np.floor(v)
    r = v - n
    s = np.sin(np.pi * r)
    if int(n) % 2:
        s = -s
    return s


def _rgamma_ld(v):
    """1 / Gamma(v) in extended precision; zero at the poles."""
    v = _LD(v)
    if v > 0.0:
        return np.exp(-_lgamma_ld(v))
    # reflection: 1/Gamma(v) = sin(pi v) Gamma(1 - v) / pi
    return _sinpi_ld(v) * np.exp(_lgamma_ld(1.0 - v)) / _LD(np.pi)


def phi(q: float) -> float:
    """sqrt(Gamma(3/q) / Gamma(1/q)), via log-gamma differences.

    This is the standardising constant that gives the exponential-power
    density unit scale; computed in logs so small q does not overflow.
    """
    if q <= 0.0:
        raise DomainError(f"phi requires q > 0, got {q}")
    return math.exp(0.5 * (sc.gammaln(3.0 / q) - sc.gammaln(1.0 / q)))


def gamma_ratio(numerators, denominators) -> SpecialValue:
    """prod Gamma(a_i) / prod Gamma(b_j) for strictly positive arguments.

    Evaluated as sums and differences of log-gamma; the result switches to
    log scale when the linear value would overflow.  Nonpositive arguments
    are a domain error (poles are never meaningful here).
    """
    nums = [float(v) for v in numerators]
    dens = [float(v) for v in denominators]
    if any(v <= 0.0 for v in nums + dens):
        raise DomainError("gamma_ratio arguments must be strictly positive")
    log_val = sum(sc.gammaln(v) for v in nums) - sum(sc.gammaln(v) for v in dens)
    scale = sum(abs(sc.gammaln(v)) for v in nums + dens)
    err = (len(nums) + len(dens)) * _EPS * (1.0 + scale)
    if abs(log_val) > _LOG_SCALE_LIMIT:
        return SpecialValue(float(log_val), log_scaled=True, est_error=float(err))
    return SpecialValue(float(math.exp(log_val)), log_scaled=False, est_error=float(err))


def reg_lower_inc_gamma(s: float, x: float) -> float:
    """Regularised lower incomplete gamma P(s, x) = gamma(s, x)/Gamma(s)."""
    if s <= 0.0:
        raise DomainError(f"reg_lower_inc_gamma requires s > 0, got {s}")
    if x < 0.0:
        raise DomainError(f"reg_lower_inc_gamma requires x >= 0, got {x}")
    return float(sc.gammainc(s, x))


def _hyp_series(nums, dens, z, control: SeriesControl, dtype=float) -> tuple[float, float, int]:
    """Kahan-compensated pFq series; returns (sum, tail_estimate, n_terms)."""
    one = dtype(1.0)
    z = dtype(z)
    nums = [dtype(v) for v in nums]
    dens = [dtype(v) for v in dens]
    total = one
    comp = dtype(0.0)
    term = one
    tol = dtype(control.rel_tol) if dtype is float else dtype(1e-17)
    small_streak = 0
    for k in range(control.max_terms):
        kk = dtype(k)
        ratio = z / (kk + 1)
        for a in nums:
            ratio *= a + kk
        for b in dens:
            ratio /= b + kk
        term = term * ratio
        if term == 0.0:
            return total, 0.0, k
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) <= tol * max(abs(total), dtype(1e-300)):
            small_streak += 1
            if small_streak >= 2:
                return total, float(abs(term) / max(abs(total), dtype(1e-300))), k
        else:
            small_streak = 0
        if not np.isfinite(total):
            raise ConvergenceError(f"hypergeometric series overflowed at term {k} (z={z})")
    raise ConvergenceError(
        f"hypergeometric series did not converge in {control.max_terms} terms (z={z})"
    )


def kummer_m(x: float, y: float, z: float, control: SeriesControl | None = None) -> SpecialValue:
    """Kummer confluent hypergeometric M(x, y, z) by direct series.

    For z < 0 the series alternates, so the Kummer transformation
    M(x,y,z) = e^z M(y-x, y, -z) is applied to avoid cancellation.
    """
    control = control or DEFAULT_CONTROL
    if _is_nonpositive_int(y):
        raise PoleError(f"kummer_m pole: second argument {y} is a nonpositive integer")
    if z < 0.0:
        inner = kummer_m(y - x, y, -z, control)
        if inner.log_scaled:
            return SpecialValue(inner.value + z, log_scaled=True, est_error=inner.est_error)
        return SpecialValue(math.exp(z) * inner.value, est_error=inner.est_error)
    total, tail, n = _hyp_series([x], [y], z, control)
    return SpecialValue(float(total), est_error=tail + (n + 4) * _EPS)


# ---------------------------------------------------------------------------
# Tricomi Psi

def _psi_reflection_ld(x: float, y: float, z: float, control: SeriesControl) -> tuple[float, float]:
    """Sine-reflection combination in extended precision (y not integer).

    Returns (value, est_error).  The two Kummer terms cancel like e^z, so
    the estimated error grows with z; the caller rejects poor results.
    """
    xl, yl, zl = _LD(x), _LD(y), _LD(z)
    m1, _, n1 = _hyp_series([xl], [yl], zl, control, dtype=_LD)
    m2, _, n2 = _hyp_series([1 + xl - yl], [2 - yl], zl, control, dtype=_LD)
    t1 = m1 * _rgamma_ld(1 + xl - yl) * _rgamma_ld(yl)
    t2 = np.exp((1 - yl) * np.log(zl)) * m2 * _rgamma_ld(xl) * _rgamma_ld(2 - yl)
    bracket = t1 - t2
    pref = _LD(np.pi) / _sinpi_ld(yl)
    val = pref * bracket
    cancel = float((abs(t1) + abs(t2)) / max(abs(bracket), _LD(1e-300)))
    err = cancel * (n1 + n2 + 8) * _LD_EPS
    return float(val), err


def _psi_reflection_fast(x: float, y: float, z: float, control: SeriesControl) -> tuple[float, float]:
    """Double-precision reflection; cheap first attempt for small z."""
    m1, _, n1 = _hyp_series([x], [y], z, control)
    m2, _, n2 = _hyp_series([1.0 + x - y], [2.0 - y], z, control)
    t1 = m1 * float(sc.rgamma(1.0 + x - y)) * float(sc.rgamma(y))
    t2 = z ** (1.0 - y) * m2 * float(sc.rgamma(x)) * float(sc.rgamma(2.0 - y))
    bracket = t1 - t2
    val = math.pi / math.sin(math.pi * y) * bracket
    cancel = (abs(t1) + abs(t2)) / max(abs(bracket), 1e-300)
    err = cancel * (n1 + n2 + 8) * _EPS
    return val, err


_GL_NODES: dict[tuple[float, int], tuple[np.ndarray, np.ndarray]] = {}
_GL_ORDERS = (96, 144)
_GL_ORDERS_FINE = (160, 224)  # small z: the (1+s/z) factor needs more nodes


def _gen_laguerre(alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    key = (alpha, n)
    if key not in _GL_NODES:
        nodes, weights = sc.roots_genlaguerre(n, alpha)
        _GL_NODES[key] = (nodes, weights)
    return _GL_NODES[key]


def _psi_gauss_laguerre(x: float, y: float, z: float) -> tuple[float, float]:
    """Psi via z^{-x} int_0^inf e^{-s} s^{x-1} (1+s/z)^{y-x-1} ds / Gamma(x).

    Generalised Gauss-Laguerre with weight s^{x-1} e^{-s}; two orders are
    compared to estimate the error.  Sums are normalised by the computed
    total weight, which cancels the quadrature's own Gamma(x) factor.
    """
    vals = []
    orders = _GL_ORDERS_FINE if z < 4.0 else _GL_ORDERS
    for n in orders:
        s, w = _gen_laguerre(x - 1.0, n)
        g = np.power(1.0 + s / z, y - x - 1.0)
        vals.append(float(np.dot(w, g) / np.sum(w)))
    lo, hi = vals
    err = abs(lo - hi) / max(abs(hi), 1e-300)
    log_val = -x * math.log(z) + math.log(hi)
    return log_val, err + 8.0 * _EPS


def _psi_asymptotic(x: float, y: float, z: float, control: SeriesControl) -> tuple[float, float]:
    """z^{-x} 2F0(x, 1+x-y;; -1/z), truncated at its smallest term.

    Returns (log value, est_error).
    """
    total, comp = 1.0, 0.0
    term = 1.0
    err_term = 1.0
    for k in range(control.max_terms):
        nxt = term * (x + k) * (1.0 + x - y + k) * (-1.0 / z) / (k + 1.0)
        if nxt == 0.0:
            err_term = 0.0
            break
        if abs(nxt) >= abs(term) and k > 0:
            err_term = abs(nxt)  # divergence point: truncate optimally
            break
        term = nxt
        yk = term - comp
        t = total + yk
        comp = (t - total) - yk
        total = t
        err_term = abs(term)
        if abs(term) <= control.rel_tol * abs(total):
            break
    if total <= 0.0:
        raise ConvergenceError(f"Tricomi asymptotic series unusable at x={x}, y={y}, z={z}")
    return -x * math.log(z) + math.log(total), err_term / total + 8.0 * _EPS


def _pack_log(log_val: float, err: float) -> SpecialValue:
    if abs(log_val) > _LOG_SCALE_LIMIT:
        return SpecialValue(log_val, log_scaled=True, est_error=err)
    return SpecialValue(math.exp(log_val), est_error=err)


def tricomi_psi(x: float, y: float, z: float, control: SeriesControl | None = None) -> SpecialValue:
    """Tricomi confluent hypergeometric Psi(x, y, z) for x > 0, z > 0."""
    control = control or DEFAULT_CONTROL
    if x <= 0.0:
        raise DomainError(f"tricomi_psi requires x > 0, got {x}")
    if z <= 0.0:
        raise DomainError(f"tricomi_psi requires z > 0, got {z}")

    if z >= control.asymptotic_switch:
        try:
            log_val, err = _psi_asymptotic(x, y, z, control)
        except ConvergenceError:
            if z >= 1e4:
                raise
            log_val, err = _psi_gauss_laguerre(x, y, z)
        else:
            if err > _REFLECT_ERR_CAP and z < 1e4:
                log_val, err = _psi_gauss_laguerre(x, y, z)
        return _pack_log(log_val, err)

    if abs(y - round(y)) < _Y_PERTURB_FLOOR:
        if z > 1.0:
            # the integral representation is smooth in y; no perturbation
            log_val, err = _psi_gauss_laguerre(x, y, z)
            return _pack_log(log_val, err)
        # Richardson average across the integer where the reflection formula
        # degenerates: symmetric pairs at +-d and +-2d cancel the quadratic
        # term; est_error records the extrapolation spread.
        d = 1e-4
        pairs = []
        errs = []
        for dd in (d, 2.0 * d):
            lo, lo_err = _psi_reflection_ld(x, y - dd, z, control)
            hi, hi_err = _psi_reflection_ld(x, y + dd, z, control)
            pairs.append(0.5 * (lo + hi))
            errs.append(0.5 * (lo_err + hi_err))
        val = (4.0 * pairs[0] - pairs[1]) / 3.0
        err = (4.0 * errs[0] + errs[1]) / 3.0 + abs(pairs[0] - pairs[1]) / (
            3.0 * max(abs(val), 1e-300)
        )
        return SpecialValue(val, est_error=max(err, 1e-13))

    if z <= _REFLECT_MAX:
        val, err = _psi_reflection_fast(x, y, z, control)
        if err <= 1e-11:
            return SpecialValue(val, est_error=err)
        val, err = _psi_reflection_ld(x, y, z, control)
        if err <= _REFLECT_ERR_CAP:
            return SpecialValue(val, est_error=err)

    log_val, err = _psi_gauss_laguerre(x, y, z)
    return _pack_log(log_val, err)


def gen_hyp(numerators, denominators, z: float, control: SeriesControl | None = None) -> SpecialValue:
    """Generalised hypergeometric pFq(numerators; denominators; z), p,q <= 3.

    Numerator/denominator parameters that match exactly cancel before
    summation (so e.g. 2F2(a,c;a,c;z) evaluates as e^z by its 0F0 core).
    """
    control = control or DEFAULT_CONTROL
    nums = [float(v) for v in numerators]
    dens = [float(v) for v in denominators]
    for b in list(dens):
        if b in nums:
            nums.remove(b)
            dens.remove(b)
    if len(nums) > 3 or len(dens) > 3:
        raise DomainError("gen_hyp supports at most 3F3")
    for b in dens:
        if _is_nonpositive_int(b):
            raise PoleError(f"gen_hyp pole: denominator parameter {b}")
    total, tail, n = _hyp_series(nums, dens, float(z), control, dtype=_LD)
    return SpecialValue(float(total), est_error=tail + (n + 4) * _EPS)


def zolotarev_s(u: float, q: float) -> float:
    """Zolotarev's trigonometric function on u in (0,1) for 0 < q < 2.

    s(u) = (sin(pi u q/2)/sin(pi u))^{2/(q-2)}
           * sin((1-q/2) pi u)/sin(pi u q/2),
    with the u -> 0 endpoint evaluated by its series limit.
    """
    if not (0.0 < u < 1.0):
        raise DomainError(f"zolotarev_s requires u in (0,1), got {u}")
    if not (0.0 < q < 2.0):
        raise DomainError(f"zolotarev_s requires q in (0,2), got {q}")
    if u < 1e-9:
        return (q / 2.0) ** (2.0 / (q - 2.0)) * (2.0 - q) / q
    s1 = math.sin(math.pi * u * q / 2.0)
    s2 = math.sin(math.pi * u)
    s3 = math.sin((1.0 - q / 2.0) * math.pi * u)
    return (s1 / s2) ** (2.0 / (q - 2.0)) * (s3 / s1)
