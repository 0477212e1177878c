"""Evaluation of P_n^(alpha,beta) and the normalized functions g_n^(alpha,beta).

Three routes are provided: the three-term recurrence in n (the production path,
rescaled by powers of two every step so nothing over- or underflows), a
high-precision summation of the terminating hypergeometric series, and the
trapezoidal rule applied to the Rodrigues/Cauchy circle integral. The last two
exist to check the first.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .gamma_core import DomainError, JacobiParams, log_gamma, log_norm_constant_array

LN2 = math.log(2.0)
SERIES_MAX_DEGREE = 60
CONTOUR_MIN_POINTS = 64
CONTOUR_MAX_POINTS = 2**16


class OracleRangeError(DomainError):
    """The requested input is outside the range an oracle is built for."""


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign and natural log of its magnitude."""

    sign: int
    log_mag: float
    # the double a value was built from, so that from_float -> float is exact
    exact: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if (self.sign == 0) != (self.log_mag == -math.inf):
            raise ValueError("sign 0 and log_mag -inf must occur together")

    @classmethod
    def from_float(cls, value: float) -> SignedLogValue:
        if value == 0.0:
            return cls(0, -math.inf)
        value = float(value)
        return cls(1 if value > 0 else -1, math.log(abs(value)), value)

    @classmethod
    def zero(cls) -> SignedLogValue:
        return cls(0, -math.inf)

    def __float__(self) -> float:
        if self.exact is not None:
            return self.exact
        if self.sign == 0:
            return 0.0
        if self.log_mag > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_mag)

    to_float = __float__

    def __abs__(self) -> SignedLogValue:
        return SignedLogValue(abs(self.sign), self.log_mag)

    def __neg__(self) -> SignedLogValue:
        return SignedLogValue(-self.sign, self.log_mag)

    def __mul__(self, other: SignedLogValue) -> SignedLogValue:
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue(self.sign * other.sign, self.log_mag + other.log_mag)

    def scale_log(self, log_factor: float) -> SignedLogValue:
        """Multiply by exp(log_factor)."""
        if self.sign == 0:
            return self
        return SignedLogValue(self.sign, self.log_mag + log_factor)

    def rel_diff(self, other: SignedLogValue) -> float:
        """|self - other| / |other|, computed without leaving log space."""
        if other.sign == 0:
            return 0.0 if self.sign == 0 else math.inf
        if self.sign == 0:
            return 1.0
        d = self.log_mag - other.log_mag
        if self.sign == other.sign:
            return abs(math.expm1(d))
        return math.exp(d) + 1.0


def _from_arrays(sign, logabs) -> SignedLogValue:
    s = int(sign)
    return SignedLogValue(s, float(logabs) if s != 0 else -math.inf)


class Method(str, enum.Enum):
    RECURRENCE = "recurrence"
    SERIES = "series"
    CONTOUR = "contour"


@dataclass(frozen=True)
class EvalResult:
    value: SignedLogValue
    method: Method
    est_error: float

    def __post_init__(self):
        if not self.est_error >= 0.0:
            raise ValueError("est_error must be >= 0")


def _check_closed(x):
    xa = np.asarray(x, dtype=float)
    if not np.all((xa >= -1.0) & (xa <= 1.0)):
        raise DomainError("x must lie in [-1, 1]")
    return xa


# --------------------------------------------------------------------------
# three-term recurrence

def _recurrence(n, alpha, beta, x, table: bool):
    """Signed logs of P_k^(alpha,beta)(x).

    With ``table`` the result has a leading axis k = 0..n (n a scalar). Otherwise
    ``n`` broadcasts against the other arguments and each element is captured
    at its own degree.
    """
    x = np.asarray(x, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if table:
        nmax = int(n)
        shape = np.broadcast_shapes(x.shape, alpha.shape, beta.shape)
        out_s = np.empty((nmax + 1,) + shape)
        out_l = np.empty((nmax + 1,) + shape)
    else:
        n = np.asarray(n)
        shape = np.broadcast_shapes(n.shape, x.shape, alpha.shape, beta.shape)
        n = np.broadcast_to(n, shape)
        nmax = int(n.max()) if n.size else 0
        out_s = np.ones(shape)
        out_l = np.zeros(shape)
    x = np.broadcast_to(x, shape)
    alpha = np.broadcast_to(alpha, shape)
    beta = np.broadcast_to(beta, shape)

    def store(k, p, logscale):
        with np.errstate(divide="ignore"):
            lg = np.log(np.abs(p)) + logscale
        sg = np.sign(p)
        if table:
            out_s[k] = sg
            out_l[k] = lg
        else:
            hit = n == k
            out_s[hit] = sg[hit]
            out_l[hit] = lg[hit]

    p_prev = np.ones(shape)
    if table:
        out_s[0] = 1.0
        out_l[0] = 0.0
    if nmax >= 1:
        # P_1 = (a+1) + (a+b+2)(x-1)/2, regrouped to avoid cancellation near its zero
        p_cur = 0.5 * ((alpha - beta) + (alpha + beta + 2.0) * x)
        logscale = np.zeros(shape)
        store(1, p_cur, logscale)
        ab = alpha + beta
        amb = (alpha - beta) * ab
        for k in range(2, nmax + 1):
            s = 2.0 * k + ab
            ak = 2.0 * k * (k + ab) * (s - 2.0)
            bk = (s - 1.0) * (s * (s - 2.0) * x + amb)
            ck = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s
            p_new = (bk * p_cur - ck * p_prev) / ak
            # exact power-of-two rescaling of the running pair
            _, e = np.frexp(np.maximum(np.abs(p_cur), np.abs(p_new)))
            p_prev = np.ldexp(p_cur, -e)
            p_cur = np.ldexp(p_new, -e)
            logscale = logscale + e * LN2
            store(k, p_cur, logscale)

    # endpoint values straight from the hypergeometric prefactor
    if table:
        ks = np.arange(nmax + 1).reshape((-1,) + (1,) * len(shape))
        kk = np.broadcast_to(ks, out_s.shape).astype(float)
        aa, bb, xx = (np.broadcast_to(v, out_s.shape) for v in (alpha, beta, x))
    else:
        kk, aa, bb, xx = n.astype(float), alpha, beta, x
    for end, par, parity in ((1.0, aa, False), (-1.0, bb, True)):
        at = xx == end
        if np.any(at):
            k, q = kk[at], par[at]
            out_l[at] = log_gamma(k + q + 1.0) - log_gamma(q + 1.0) - log_gamma(k + 1.0)
            out_s[at] = np.where(parity & (k % 2 == 1), -1.0, 1.0)
    return out_s, out_l


def jacobi_log_table(nmax: int, alpha, beta, x):
    """Signs and log-magnitudes of P_0..P_nmax, stacked along the first axis."""
    return _recurrence(nmax, alpha, beta, _check_closed(x), table=True)


def jacobi_log_at(n, alpha, beta, x):
    """Signs and log-magnitudes of P_n(x) where n, alpha, beta, x broadcast."""
    return _recurrence(n, alpha, beta, _check_closed(x), table=False)


def _log_half_weights(n, alpha, beta, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        # alpha * (log / 2), not (alpha / 2) * log: a subnormal alpha must not underflow to 0
        wm = np.where(alpha == 0, 0.0, alpha * (0.5 * np.log((1.0 - x) * 0.5)))
        wp = np.where(beta == 0, 0.0, beta * (0.5 * np.log((1.0 + x) * 0.5)))
    return log_norm_constant_array(n, alpha, beta) + wm + wp


def g_log_at(n, alpha, beta, x):
    """Signs and log-magnitudes of g_n(x) with every argument broadcast."""
    x = _check_closed(x)
    n = np.asarray(n)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    sg, lg = _recurrence(n, alpha, beta, x, table=False)
    lg = lg + _log_half_weights(n, alpha, beta, x)
    sg = np.where(np.isneginf(lg), 0.0, sg)
    return sg, lg


def g_log_table(nmax: int, alpha, beta, x):
    """Signs and log-magnitudes of g_0..g_nmax along the first axis."""
    x = _check_closed(x)
    sg, lg = _recurrence(nmax, alpha, beta, x, table=True)
    ks = np.arange(nmax + 1, dtype=float).reshape((-1,) + (1,) * (lg.ndim - 1))
    lg = lg + _log_half_weights(ks, np.asarray(alpha, float), np.asarray(beta, float), x)
    sg = np.where(np.isneginf(lg), 0.0, sg)
    return sg, lg


def _scalar_x(x: float) -> float:
    x = float(x)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [-1, 1], got {x}")
    return x


def eval_jacobi(p: JacobiParams, x: float) -> SignedLogValue:
    """P_n^(alpha,beta)(x) by the rescaled three-term recurrence."""
    x = _scalar_x(x)
    sg, lg = _recurrence(p.n, p.alpha, p.beta, x, table=False)
    return _from_arrays(sg, lg)


def eval_g(p: JacobiParams, x: float) -> SignedLogValue:
    """g_n^(alpha,beta)(x), assembled in log space; |g| <= 1."""
    x = _scalar_x(x)
    sg, lg = g_log_at(p.n, p.alpha, p.beta, x)
    return _from_arrays(sg, lg)


# --------------------------------------------------------------------------
# hypergeometric series oracle

@lru_cache(maxsize=4096)
def _series_coefficient_logs(n: int, alpha: float, beta: float, dps: int):
    # log |(-n)_k (n+a+b+1)_k / ((a+1)_k k!)| for k = 0..n, and the log prefactor
    with mpmath.workdps(dps):
        al, be = mpmath.mpf(alpha), mpmath.mpf(beta)
        m = n + al + be + 1
        logs = [mpmath.mpf(0)]
        for k in range(n):
            logs.append(logs[-1] + mpmath.log((n - k) * (m + k) / ((al + 1 + k) * (k + 1))))
        prefactor = mpmath.loggamma(n + al + 1) - mpmath.loggamma(al + 1) - mpmath.loggamma(n + 1)
    return tuple(logs), prefactor


def eval_jacobi_series_oracle(p: JacobiParams, x: float, dps: int = 40) -> SignedLogValue:
    """Finite 2F1(-n, n+a+b+1; a+1; (1-x)/2) sum at extended precision.

    Each term is carried as an explicit sign and a log-magnitude; the terms are
    then summed in mpmath. The working precision doubles until the cancellation
    observed in the sum leaves at least 20 significant digits.
    """
    if p.n > SERIES_MAX_DEGREE:
        raise OracleRangeError(f"series oracle is limited to n <= {SERIES_MAX_DEGREE}")
    x = float(x)
    while True:
        coef, prefactor = _series_coefficient_logs(p.n, p.alpha, p.beta, dps)
        with mpmath.workdps(dps):
            y = (1 - mpmath.mpf(x)) / 2
            if y == 0:
                coef = coef[:1]
                log_y = mpmath.mpf(0)
            else:
                log_y = mpmath.log(y)
            logs = [c + k * log_y for k, c in enumerate(coef)]
            top = max(logs)
            total = mpmath.fsum((-1) ** k * mpmath.exp(t - top) for k, t in enumerate(logs))
            lost = dps if total == 0 else float(-mpmath.log10(abs(total)))
            if lost < dps - 20 or dps >= 1280:
                if total == 0:
                    return SignedLogValue.zero()
                sign = 1 if total > 0 else -1
                return SignedLogValue(sign, float(mpmath.log(abs(total)) + top + prefactor))
        dps *= 2


# --------------------------------------------------------------------------
# contour quadrature oracle

def _require_contour_domain(p: JacobiParams, x: float):
    if not p.is_integer:
        raise DomainError("the circle-integral oracle needs integer alpha and beta")
    if p.n < 1:
        raise DomainError("the circle-integral oracle needs n >= 1")
    if not abs(x) < 1.0:
        raise DomainError(f"the circle-integral oracle needs |x| < 1, got {x}")


def _circle_logs(n: int, alpha: float, beta: float, x: float, r: float, theta: np.ndarray):
    # log of (1-x-s)^(n+alpha) (1+x+s)^(n+beta) / s^n at s = r e^{i theta}; integer
    # exponents make the branch of the logarithm irrelevant after exponentiation
    s = r * np.exp(1j * theta)
    left, right = 1.0 - x - s, 1.0 + x + s
    with np.errstate(divide="ignore", invalid="ignore"):
        logf = (n + alpha) * np.log(left) + (n + beta) * np.log(right) - n * np.log(s)
    # a node landing exactly on z = +-1 contributes an exact zero
    logf[(left == 0) | (right == 0)] = -np.inf
    return logf


def contour_integral(p: JacobiParams, x: float, m: int = 4096):
    """The circle integral I_n(x) as (SignedLogValue, points used, relative error estimate).

    (1-x)^alpha (1+x)^beta P_n(x) = (-1/2)^n I_n(x); the circle is centred at x
    with radius sqrt((1-x^2)/(a+b+1)). The trapezoidal point count doubles,
    reusing the previous nodes, until two successive results agree.
    """
    x = float(x)
    _require_contour_domain(p, x)
    if m < CONTOUR_MIN_POINTS:
        raise DomainError(f"need at least {CONTOUR_MIN_POINTS} quadrature points")
    r = math.sqrt((1.0 - x * x) / (p.a + p.b + 1.0))
    logs = _circle_logs(p.n, p.alpha, p.beta, x, r, (2.0 * np.pi / m) * np.arange(m))
    top = float(np.max(logs.real))
    vals = np.exp(logs - top)
    total, size = complex(vals.sum()), float(np.abs(vals).sum())
    eps = np.finfo(float).eps
    while True:
        # odd nodes of the refined grid
        theta = (np.pi / m) * (2 * np.arange(m) + 1)
        logs = _circle_logs(p.n, p.alpha, p.beta, x, r, theta)
        top2 = max(top, float(np.max(logs.real)))
        shrink = math.exp(top - top2)
        vals = np.exp(logs - top2)
        old = total.real * shrink / m
        total = total * shrink + complex(vals.sum())
        size = size * shrink + float(np.abs(vals).sum())
        m *= 2
        value = total.real / m
        diff = abs(value - old)
        top = top2
        if diff <= 1e-9 * abs(value) or diff <= 64 * eps * size / m or m >= CONTOUR_MAX_POINTS:
            break
    est = diff / abs(value) if value else math.inf
    if value == 0.0:
        return SignedLogValue.zero(), m, est
    return SignedLogValue(1 if value > 0 else -1, math.log(abs(value)) + top), m, est


def _contour_jacobi(p: JacobiParams, x: float, m: int):
    val, _, est = contour_integral(p, x, m)
    shift = -p.n * LN2 - p.alpha * math.log1p(-x) - p.beta * math.log1p(x)
    out = val.scale_log(shift)
    return (-out if p.n % 2 else out), est


def eval_jacobi_contour(p: JacobiParams, x: float, m: int = 4096) -> SignedLogValue:
    """P_n(x) recovered from the circle integral."""
    return _contour_jacobi(p, float(x), m)[0]


def eval_g_contour_oracle(p: JacobiParams, x: float, m: int = 4096) -> SignedLogValue:
    """g_n(x) computed from the circle integral instead of the recurrence."""
    pv = eval_jacobi_contour(p, x, m)
    x = float(x)
    return pv.scale_log(float(_log_half_weights(p.n, p.alpha, p.beta, x)))


# --------------------------------------------------------------------------
# quadrature identities

@lru_cache(maxsize=8)
def gauss_legendre(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _quadrature(order: int, graded: bool):
    """Gauss-Legendre nodes and weights for integrals over x in [-1, 1].

    With ``graded`` the nodes are pushed through x = sin(pi u / 2), which turns an
    endpoint factor (1-x)^alpha into (1-u)^(2 alpha + 1) and keeps the rule
    accurate for small non-integer alpha, beta.
    """
    if order < 64:
        raise DomainError("quadrature_order must be >= 64")
    u, w = gauss_legendre(order)
    if not graded:
        return u, w
    return np.sin(0.5 * np.pi * u), w * (0.5 * np.pi) * np.cos(0.5 * np.pi * u)


def schur_integral(p: JacobiParams, quadrature_order: int = 2000, graded: bool = True) -> float:
    """(1/2) * integral over [-1, 1] of g_n(x)^2, by Gauss-Legendre quadrature."""
    nodes, weights = _quadrature(quadrature_order, graded)
    _, lg = g_log_at(p.n, p.alpha, p.beta, nodes)
    return 0.5 * float(np.dot(weights, np.exp(2.0 * lg)))


def overlap_integral(n: int, m: int, alpha: float, beta: float, quadrature_order: int = 2000,
                     graded: bool = True) -> float:
    """(1/2) * integral of g_n g_m for a shared (alpha, beta)."""
    nodes, weights = _quadrature(quadrature_order, graded)
    sg, lg = g_log_table(max(n, m), alpha, beta, nodes)
    return 0.5 * float(np.dot(weights, sg[n] * np.exp(lg[n]) * sg[m] * np.exp(lg[m])))


def evaluate(p: JacobiParams, x: float, method: Method | str = Method.RECURRENCE) -> EvalResult:
    """P_n(x) by the chosen route with a rough relative error estimate."""
    method = Method(method)
    eps = np.finfo(float).eps
    if method is Method.RECURRENCE:
        return EvalResult(eval_jacobi(p, x), method, 4.0 * (p.n + 1) * eps)
    if method is Method.SERIES:
        return EvalResult(eval_jacobi_series_oracle(p, x), method, 1e-25)
    val, est = _contour_jacobi(p, float(x), 4096)
    return EvalResult(val, method, est)
