"""Saddle-point envelope of the Rodrigues circle integral and the bounds built on it.

For n >= 1 write a = alpha/n, b = beta/n. On the circle of radius
r = sqrt((1-x^2)/(a+b+1)) about x the integrand of I_n has modulus
exp(n f(cos theta)) with

    f(t) = (a+1)/2 ln(t2 - t) + (b+1)/2 ln(t - t1) + K,

a concave function on [t1, t2] maximized at t0. Everything here is a closed
form in (a, b, x); the predicates return their two sides so that sweeps can
report margins, not just verdicts.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .gamma_core import DomainError, JacobiParams, log_gamma
from .jacobi_eval import eval_jacobi, eval_g

LN2 = math.log(2.0)


class BoundViolation(RuntimeError):
    """A proven inequality failed numerically."""


class Case(str, enum.Enum):
    """Which of +1, -1 the circle C(x, r) encloses."""

    CASE1 = "Case1"  # +1 inside
    CASE2 = "Case2"  # neither
    CASE3 = "Case3"  # -1 inside


class Mode(str, enum.Enum):
    INTEGER = "integer"
    GENERAL = "general"


@dataclass(frozen=True)
class BoundConstants:
    D: float = 1.0 / 28.0
    D_boundary: float = 1.0 / 140.0
    C1: float = 2.0 * 28.0**0.25
    C2: float = 35.0**0.25
    C3: float = 2.0 * 28.0**0.25 + 35.0**0.25
    C_general: float = 6.0**0.25 * (2.0 * 28.0**0.25 + 35.0**0.25)
    C_integer: float = 2.0 * 168.0**0.25
    bernstein: float = (4.0 / math.pi) ** 0.5
    sharp_asymptote: float = (2.0 / math.pi) ** 0.25


CONSTANTS = BoundConstants()


@dataclass(frozen=True)
class SaddleData:
    a: float
    b: float
    x: float
    r: float
    t1: float
    t2: float
    t0: float
    discriminant: float
    x_minus: float
    x_plus: float
    K: float
    f_t0: float
    fpp_t0: float
    case_tag: Case

    @property
    def case_threshold(self) -> float:
        return (self.a + self.b) / (self.a + self.b + 2.0)


def saddle_from_ratios(a: float, b: float, x: float) -> SaddleData:
    """Saddle quantities for ratios a = alpha/n, b = beta/n and |x| < 1."""
    a, b, x = float(a), float(b), float(x)
    if a < 0 or b < 0:
        raise DomainError("a and b must be >= 0")
    if not abs(x) < 1.0:
        raise DomainError(f"saddle data needs |x| < 1, got {x}")
    s, A = a + b, a + b + 1.0
    one_m_x2 = (1.0 - x) * (1.0 + x)
    denom = 2.0 * math.sqrt(A) * math.sqrt(one_m_x2)
    r = math.sqrt(one_m_x2 / A)
    t1 = (-(s + 2.0) - s * x) / denom
    t2 = ((s + 2.0) - s * x) / denom
    t0 = (b - a - s * x) / denom
    disc = (s + 2.0) ** 2 * x * x + 2.0 * (a - b) * s * x + (a - b) ** 2 - 4.0 * A
    root = 4.0 * math.sqrt((a + 1.0) * (b + 1.0) * A)
    # the exact roots lie in [-1, 1] (equality at a = 0 or b = 0); clamp the rounding
    x_minus = max(((b - a) * s - root) / (s + 2.0) ** 2, -1.0)
    x_plus = min(((b - a) * s + root) / (s + 2.0) ** 2, 1.0)
    log_1mx, log_1px = math.log1p(-x), math.log1p(x)
    K = 0.5 * ((a + 1.0) * log_1mx + (b + 1.0) * log_1px + s * math.log(r) + (s + 2.0) * LN2)
    f_t0 = 0.5 * (
        (s + 2.0) * LN2
        + (a + 1.0) * math.log(a + 1.0)
        + (b + 1.0) * math.log(b + 1.0)
        - A * math.log(A)
        + (a * log_1mx if a else 0.0)
        + (b * log_1px if b else 0.0)
    )
    fpp_t0 = -A * (s + 2.0) * one_m_x2 / (2.0 * (a + 1.0) * (b + 1.0))
    thr = s / (s + 2.0)
    if x > thr:
        case = Case.CASE1
    elif x < -thr:
        case = Case.CASE3
    else:
        case = Case.CASE2
    return SaddleData(a, b, x, r, t1, t2, t0, disc, x_minus, x_plus, K, f_t0, fpp_t0, case)


def saddle_data(p: JacobiParams, x: float) -> SaddleData:
    if p.n < 1:
        raise DomainError("saddle data needs n >= 1")
    return saddle_from_ratios(p.a, p.b, x)


def f_of_t(sd: SaddleData, t: float) -> float:
    """log of the integrand modulus at cos(theta) = t; -inf at t1 and t2."""
    t = float(t)
    if not sd.t1 <= t <= sd.t2:
        raise DomainError(f"t = {t} outside [{sd.t1}, {sd.t2}]")
    if t == sd.t1 or t == sd.t2:
        return -math.inf
    return 0.5 * (sd.a + 1.0) * math.log(sd.t2 - t) + 0.5 * (sd.b + 1.0) * math.log(t - sd.t1) + sd.K


def f_radial(sd: SaddleData, t: float) -> float:
    """The same function written directly in terms of r and x."""
    r, x = sd.r, sd.x
    with np.errstate(divide="ignore"):
        left = np.log(r * r + (1.0 - x) ** 2 - 2.0 * r * (1.0 - x) * t)
        right = np.log(r * r + (1.0 + x) ** 2 + 2.0 * r * (1.0 + x) * t)
    return float(0.5 * (sd.a + 1.0) * left + 0.5 * (sd.b + 1.0) * right - math.log(r))


def f_prime(sd: SaddleData, t):
    t = np.asarray(t, dtype=float)
    return (sd.a + sd.b + 2.0) * (sd.t0 - t) / (2.0 * (sd.t2 - t) * (t - sd.t1))


def f_second(sd: SaddleData, t):
    t = np.asarray(t, dtype=float)
    return -(sd.a + 1.0) / (2.0 * (sd.t2 - t) ** 2) - (sd.b + 1.0) / (2.0 * (t - sd.t1) ** 2)


def initial_bound(p: JacobiParams) -> float:
    """Upper bound for sup |g_n| from the plain envelope; at most 1."""
    if p.n < 1:
        raise DomainError("initial bound needs n >= 1")
    n, al, be = p.n, p.alpha, p.beta
    ratio = ((n + 1.0) / (n + al + 1.0)) * ((n + al + be + 1.0) / (n + be + 1.0))
    return min(ratio, 1.0) ** 0.25


def refined_pointwise_bound(p: JacobiParams, x: float, mode: Mode | str = Mode.GENERAL) -> float:
    """Curvature-refined upper bound for |g_n(x)|.

    integer: initial * 2 * (n D |f''(t0)|)^(-1/4), valid for integer alpha, beta.
    general: initial * C3 * (n |f''(t0)|)^(-1/4), adding the branch-cut remainder.
    """
    mode = Mode(mode)
    sd = saddle_data(p, x)
    curvature = p.n * abs(sd.fpp_t0)
    if mode is Mode.INTEGER:
        if not p.is_integer:
            raise DomainError("integer mode needs integer alpha and beta")
        return initial_bound(p) * 2.0 * (CONSTANTS.D * curvature) ** -0.25
    return initial_bound(p) * CONSTANTS.C3 * curvature**-0.25


def theorem1_bound(p: JacobiParams, x: float) -> float:
    """C * (2n+alpha+beta+1)^(-1/4) * (1-x^2)^(-1/4)."""
    x = float(x)
    if not abs(x) < 1.0:
        raise DomainError(f"theorem bound needs |x| < 1, got {x}")
    return CONSTANTS.C_general * (p.dimension * (1.0 - x) * (1.0 + x)) ** -0.25


@dataclass(frozen=True)
class Comparison:
    lhs: float
    rhs: float
    holds: bool


def _leq(lhs: float, rhs: float, tol: float) -> bool:
    if lhs == -math.inf:
        return True
    return lhs <= rhs + tol * max(1.0, abs(rhs))


def check_prop31(sd: SaddleData, t: float) -> Comparison:
    """f(t) <= f(t0) + f''(t0) (t - t0)^2 / (28 (1 + t0^2)) on [-1, 1]."""
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [-1, 1], got {t}")
    lhs = f_of_t(sd, t)
    rhs = sd.f_t0 + CONSTANTS.D * sd.fpp_t0 * (t - sd.t0) ** 2 / (1.0 + sd.t0**2)
    return Comparison(lhs, rhs, _leq(lhs, rhs, 1e-12))


@dataclass(frozen=True)
class LemmaFlags:
    lemma33: bool
    lemma34: bool
    lemma35: bool
    lemma36: bool

    def all(self) -> bool:
        return self.lemma33 and self.lemma34 and self.lemma35 and self.lemma36


def lemma36_samples(sd: SaddleData, per_side: int = 101) -> np.ndarray:
    """u on [-1, t0] and [t0, 1], each side clipped to [t1, t2] and kept if non-empty."""
    sides = []
    if sd.t0 >= -1.0:
        sides.append(np.linspace(max(-1.0, sd.t1), min(sd.t0, sd.t2), per_side))
    if sd.t0 <= 1.0:
        sides.append(np.linspace(max(sd.t0, sd.t1), min(1.0, sd.t2), per_side))
    return np.concatenate(sides)


def check_saddle_lemmas(sd: SaddleData, tol: float = 1e-10) -> LemmaFlags:
    a, b, x, t0 = sd.a, sd.b, sd.x, sd.t0
    w = 1.0 + t0 * t0

    lhs = (a + b) ** 2 + 4.0 * (a + b + 1.0) * t0 * t0
    rhs = 2.0 * a * a / (1.0 - x) + 2.0 * b * b / (1.0 + x)
    # the absolute floor only matters once both sides are subnormal
    lemma33 = abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs)) + 1e-300

    lemma34 = (1.0 - x) * (1.0 + x) <= 16.0 * (a + 1.0) * (b + 1.0) * w / (a + b + 2.0) ** 2 * (1 + tol)

    gap = 1.0 / (4.0 * math.sqrt(w)) * (1 - tol)
    lemma35 = (sd.t2 - t0) >= gap and (t0 - sd.t1) >= gap

    u = lemma36_samples(sd)
    bound = 14.0 * w * (t0 - sd.t1) * (sd.t2 - t0)
    lemma36 = bool(np.all((u - sd.t1) * (sd.t2 - u) <= bound * (1 + tol)))
    return LemmaFlags(bool(lemma33), bool(lemma34), bool(lemma35), lemma36)


@dataclass(frozen=True)
class ExpIntegralCheck:
    lhs: float
    rhs: float
    holds: bool
    strong_rhs: float
    holds_strong: bool


def exp_integral(u, v, quadrature_order: int = 512):
    """(1/pi) * integral_0^pi exp(-(u + v cos s)^2) ds, vectorized over u, v.

    The integrand extends to an even, analytic, 2*pi-periodic function, so the
    equispaced trapezoidal rule over the full period converges geometrically.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    c = np.cos((2.0 * np.pi / quadrature_order) * np.arange(quadrature_order))
    return np.mean(np.exp(-((u[..., None] + v[..., None] * c) ** 2)), axis=-1)


def exp_integral_bound_check(u: float, v: float, quadrature_order: int = 512) -> ExpIntegralCheck:
    u, v = float(u), float(v)
    if u == 0.0 and v == 0.0:
        raise DomainError("the exponential-integral bound needs u^2 + v^2 > 0")
    lhs = float(exp_integral(u, v, quadrature_order))
    rhs = 2.0 / (u * u + v * v) ** 0.25
    strong = math.sqrt(2.0) / math.sqrt(max(abs(u), abs(v)))
    return ExpIntegralCheck(lhs, rhs, lhs <= rhs + 1e-10, strong, lhs <= strong + 1e-10)


@dataclass(frozen=True)
class N0Bound:
    bound: float
    argmax_x: float
    max_value: float


def n0_bound(alpha: float, beta: float) -> N0Bound:
    """Degree-zero case: closed-form max of (1-x^2)^(1/4) g_0(x) and its bound."""
    if alpha < 0 or beta < 0:
        raise DomainError("alpha, beta must be >= 0")
    mu, nu = alpha + 0.5, beta + 0.5
    log_sq = (
        LN2
        + log_gamma(alpha + beta + 1.0)
        - log_gamma(alpha + 1.0)
        - log_gamma(beta + 1.0)
        + mu * math.log(mu)
        + nu * math.log(nu)
        - (mu + nu) * math.log(mu + nu)
    )
    return N0Bound(
        bound=(alpha + beta + 1.0) ** -0.25,
        argmax_x=(nu - mu) / (nu + mu),
        max_value=math.exp(0.5 * log_sq),
    )


def check_lemma52(sd: SaddleData) -> Comparison:
    """f(+-1) <= f(t0) + f''(t0)/140 in Case 1 (resp. Case 3); vacuous in Case 2."""
    rhs = sd.f_t0 + CONSTANTS.D_boundary * sd.fpp_t0
    if sd.case_tag is Case.CASE2:
        return Comparison(-math.inf, rhs, True)
    end = 1.0 if sd.case_tag is Case.CASE1 else -1.0
    lhs = f_of_t(sd, end)
    return Comparison(lhs, rhs, _leq(lhs, rhs, 1e-12))


def log_remainder_bound(p: JacobiParams, x: float) -> float:
    """log of the bound on the branch-cut remainder R_n; -inf in Case 2."""
    sd = saddle_data(p, x)
    check = check_lemma52(sd)
    if not check.holds:
        raise BoundViolation(f"f(+-1) = {check.lhs} exceeds f(t0) + f''(t0)/140 = {check.rhs}")
    if sd.case_tag is Case.CASE2:
        return -math.inf
    return p.n * check.lhs


def remainder_bound(p: JacobiParams, x: float) -> float:
    log_value = log_remainder_bound(p, x)
    return math.exp(log_value) if log_value < 709.0 else math.inf


def log_envelope(p: JacobiParams, x: float) -> float:
    """n f(t0): log of the envelope that dominates |I_n(x)|."""
    return p.n * saddle_data(p, x).f_t0


def check_envelope_dominance(p: JacobiParams, x: float, tol: float = 1e-10) -> Comparison:
    """log |I_n(x)| <= n f(t0), with |I_n| = 2^n (1-x)^alpha (1+x)^beta |P_n(x)|."""
    x = float(x)
    rhs = log_envelope(p, x)
    pv = eval_jacobi(p, x)
    if pv.sign == 0:
        return Comparison(-math.inf, rhs, True)
    lhs = p.n * LN2 + pv.log_mag
    if p.alpha:
        lhs += p.alpha * math.log1p(-x)
    if p.beta:
        lhs += p.beta * math.log1p(x)
    return Comparison(lhs, rhs, _leq(lhs, rhs, tol))


def check_final_chain(p: JacobiParams) -> tuple[bool, bool]:
    """The two elementary inequalities that turn the refined bound into the theorem form."""
    n, al, be = p.n, p.alpha, p.beta
    if n < 1:
        raise DomainError("needs n >= 1")
    first = (n + al + be + 1.0) / ((n + al + 1.0) * (n + be + 1.0)) <= (
        (n + al + be) / ((n + al) * (n + be))
    ) * (1 + 1e-14)
    second = (n + 1.0) / (n * (2.0 * n + al + be)) <= 3.0 / (2.0 * n + al + be + 1.0) * (1 + 1e-14)
    return first, second


def check_refined_vs_value(p: JacobiParams, x: float, mode: Mode | str = Mode.GENERAL) -> Comparison:
    """|g_n(x)| against the refined pointwise bound."""
    lhs = abs(float(eval_g(p, x)))
    rhs = refined_pointwise_bound(p, x, mode)
    return Comparison(lhs, rhs, lhs <= rhs + 1e-10)

