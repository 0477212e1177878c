"""Log-gamma plumbing, the normalization constant of g_n and two gamma-ratio inequalities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

# slack, in logs, for the inequality predicates
LOG_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


@dataclass(frozen=True)
class JacobiParams:
    """Degree and parameters (n, alpha, beta) of a Jacobi polynomial."""

    n: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise DomainError(f"degree must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if self.n < 0:
            raise DomainError(f"degree must be >= 0, got {self.n}")
        if not (self.alpha >= 0.0 and self.beta >= 0.0):
            raise DomainError(f"alpha, beta must be >= 0, got ({self.alpha}, {self.beta})")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")

    @property
    def a(self) -> float:
        if self.n == 0:
            raise DomainError("a = alpha/n is undefined for n = 0")
        return self.alpha / self.n

    @property
    def b(self) -> float:
        if self.n == 0:
            raise DomainError("b = beta/n is undefined for n = 0")
        return self.beta / self.n

    @property
    def dimension(self) -> float:
        """2n + alpha + beta + 1."""
        return 2 * self.n + self.alpha + self.beta + 1.0

    @property
    def is_integer(self) -> bool:
        return self.alpha.is_integer() and self.beta.is_integer()


def log_gamma(x):
    """ln Gamma(x) for x > 0; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        x = float(x)
        if not x > 0.0:
            raise DomainError(f"log_gamma requires x > 0, got {x}")
        return math.lgamma(x)
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0.0):
        raise DomainError("log_gamma requires x > 0")
    return gammaln(x)


def _log_gamma_ratio(n, alpha, beta):
    # ln[Gamma(n+1)Gamma(n+a+b+1) / (Gamma(n+a+1)Gamma(n+b+1))], grouped so that
    # alpha == 0 or beta == 0 cancels exactly in floating point
    return (gammaln(n + 1.0) - gammaln(n + alpha + 1.0)) + (
        gammaln(n + alpha + beta + 1.0) - gammaln(n + beta + 1.0)
    )


def log_norm_constant(p: JacobiParams) -> float:
    """Log of the square-root prefactor that turns P_n into g_n.

    Never negative (log-convexity of Gamma) and exactly 0 when alpha or beta is 0.
    """
    return max(0.5 * float(_log_gamma_ratio(p.n, p.alpha, p.beta)), 0.0)


def log_norm_constant_array(n, alpha, beta):
    """Vectorized :func:`log_norm_constant` for broadcastable arrays."""
    n = np.asarray(n, dtype=float)
    return np.maximum(0.5 * _log_gamma_ratio(n, alpha, beta), 0.0)


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool
    log_lhs: float
    log_rhs: float


def _check(log_lhs: float, log_rhs: float) -> InequalityCheck:
    log_lhs, log_rhs = float(log_lhs), float(log_rhs)
    return InequalityCheck(
        lhs=math.exp(log_lhs) if log_lhs < 700 else math.inf,
        rhs=math.exp(log_rhs) if log_rhs < 700 else math.inf,
        holds=log_lhs <= log_rhs + LOG_TOL,
        log_lhs=log_lhs,
        log_rhs=log_rhs,
    )


def gamma_ratio_bound_logs(n, alpha, beta):
    """Both sides, in logs, of the termwise gamma-ratio bound (vectorized).

    Left: Gamma(n+1)Gamma(n+a+b+1) / (Gamma(n+a+1)Gamma(n+b+1)).
    Right: n^n (a+b+n)^(a+b+n) / ((a+n)^(a+n) (b+n)^(b+n)) times the square root of
    (n+1)(n+a+b+1) / ((n+a+1)(n+b+1)), with 0^0 = 1.
    """
    n = np.asarray(n, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    lhs = _log_gamma_ratio(n, alpha, beta)
    powers = (xlogy(n, n) - xlogy(alpha + n, alpha + n)) + (
        xlogy(alpha + beta + n, alpha + beta + n) - xlogy(beta + n, beta + n)
    )
    root = 0.5 * (
        (np.log1p(n) - np.log1p(n + alpha)) + (np.log1p(n + alpha + beta) - np.log1p(n + beta))
    )
    return lhs, powers + root


def check_gamma_ratio_bound(n: float, alpha: float, beta: float) -> InequalityCheck:
    if min(n, alpha, beta) < 0:
        raise DomainError("n, alpha, beta must be >= 0")
    return _check(*gamma_ratio_bound_logs(n, alpha, beta))


def gamma_ratio_bound_half_logs(alpha, beta):
    """Both sides, in logs, of the binomial-type bound with half-shifted powers."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    lhs = (gammaln(alpha + beta + 1.0) - gammaln(alpha + 1.0)) - gammaln(beta + 1.0)
    s, u, v = alpha + beta + 0.5, alpha + 0.5, beta + 0.5
    rhs = (xlogy(s, s) - xlogy(u, u)) - xlogy(v, v) + 0.5 * math.log(0.5)
    return lhs, rhs


def check_gamma_ratio_bound_half(alpha: float, beta: float) -> InequalityCheck:
    if min(alpha, beta) < 0:
        raise DomainError("alpha, beta must be >= 0")
    return _check(*gamma_ratio_bound_half_logs(alpha, beta))
