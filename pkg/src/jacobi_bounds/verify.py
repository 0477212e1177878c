"""Seeded self-verification suites; each returns a JSON-ready, deterministic summary."""
from __future__ import annotations

import math

import numpy as np

from .envelope import (
    check_final_chain,
    check_lemma52,
    check_prop31,
    check_saddle_lemmas,
    exp_integral,
    n0_bound,
    saddle_from_ratios,
)
from .gamma_core import LOG_TOL, JacobiParams, gamma_ratio_bound_half_logs, gamma_ratio_bound_logs
from .jacobi_eval import g_log_at
from .sweep import SCHEMA_VERSION, SLACK, bernstein_check
from .wigner_su2 import (
    spherical_harmonic_magnitude,
    theorem2_sweep,
    unitarity_column_check,
    unitarity_row_check,
)

SUITES = ("gamma", "envelope", "wigner", "bernstein")
DEFAULT_SAMPLES = 2000


class Tally:
    """Count of cases, violations and the smallest margin rhs - lhs seen."""

    def __init__(self):
        self.count = 0
        self.violations = 0
        self.min_margin = math.inf

    def add(self, holds, margin=None):
        holds = np.atleast_1d(np.asarray(holds, dtype=bool))
        self.count += int(holds.size)
        self.violations += int(np.count_nonzero(~holds))
        if margin is not None:
            m = np.asarray(margin, dtype=float)
            m = m[~np.isnan(m)]
            if m.size:
                self.min_margin = min(self.min_margin, float(np.min(m)))

    def as_dict(self):
        margin = self.min_margin if math.isfinite(self.min_margin) else None
        return {"count": self.count, "violations": self.violations, "min_margin": margin}


def _rng(seed: int, suite: str) -> np.random.Generator:
    tag = int.from_bytes(suite.encode(), "little")
    return np.random.default_rng(np.random.SeedSequence([seed % 2**64, tag]))


def sample_ratio(rng, size, top=100.0):
    """Mixture for a = alpha/n: exact zeros, small values and the wide range [0, top]."""
    u = rng.random(size)
    return np.where(u < 0.2, 0.0, np.where(u < 0.5, rng.uniform(0.0, 1.0, size), rng.uniform(0.0, top, size)))


def sample_x(rng, size):
    """x in (-1, 1) with a share pushed toward the endpoints."""
    u = rng.random(size)
    bulk = rng.uniform(-1.0, 1.0, size)
    edge = rng.choice([-1.0, 1.0], size) * (1.0 - 10.0 ** -rng.uniform(1.0, 8.0, size))
    return np.where(u < 0.3, edge, bulk)


def gamma_suite(seed: int, samples: int = DEFAULT_SAMPLES) -> dict:
    rng = _rng(seed, "gamma")
    n = rng.integers(0, 501, samples).astype(float)
    al = sample_ratio(rng, samples, 1000.0)
    be = sample_ratio(rng, samples, 1000.0)
    t41, t42 = Tally(), Tally()
    lhs, rhs = gamma_ratio_bound_logs(n, al, be)
    t41.add(lhs <= rhs + LOG_TOL, rhs - lhs)
    lhs, rhs = gamma_ratio_bound_half_logs(al, be)
    t42.add(lhs <= rhs + LOG_TOL, rhs - lhs)
    return {"lemma41": t41.as_dict(), "lemma42": t42.as_dict()}


def exp_integral_grid(k: int = 401, half_width: float = 10.0, quadrature_order: int = 512):
    """Both forms of the exponential-integral bound on the k x k grid over [-w, w]^2."""
    grid = np.linspace(-half_width, half_width, k)
    weak, strong = Tally(), Tally()
    for u in grid:
        v = grid
        keep = (u != 0.0) | (v != 0.0)
        v = v[keep]
        lhs = exp_integral(np.full_like(v, u), v, quadrature_order)
        rhs = 2.0 / (u * u + v * v) ** 0.25
        srhs = math.sqrt(2.0) / np.sqrt(np.maximum(abs(u), np.abs(v)))
        weak.add(lhs <= rhs + SLACK, rhs - lhs)
        strong.add(lhs <= srhs + SLACK, srhs - lhs)
    return weak, strong


def envelope_suite(seed: int, samples: int = DEFAULT_SAMPLES, exp_grid: int = 401) -> dict:
    rng = _rng(seed, "envelope")
    a = sample_ratio(rng, samples)
    b = sample_ratio(rng, samples)
    x = sample_x(rng, samples)
    s = rng.random(samples)
    tallies = {k: Tally() for k in ("prop31", "lemma33", "lemma34", "lemma35", "lemma36", "lemma52")}
    for i in range(samples):
        sd = saddle_from_ratios(a[i], b[i], x[i])
        lo, hi = max(-1.0, sd.t1), min(1.0, sd.t2)
        c = check_prop31(sd, lo + s[i] * (hi - lo))
        tallies["prop31"].add(c.holds, c.rhs - c.lhs if c.lhs > -math.inf else None)
        flags = check_saddle_lemmas(sd)
        for name in ("lemma33", "lemma34", "lemma35", "lemma36"):
            tallies[name].add(getattr(flags, name))
        c = check_lemma52(sd)
        tallies["lemma52"].add(c.holds, c.rhs - c.lhs if c.lhs > -math.inf else None)

    chain = Tally()
    n = rng.integers(1, 10**4, samples)
    al = sample_ratio(rng, samples, 1000.0)
    be = sample_ratio(rng, samples, 1000.0)
    for i in range(samples):
        chain.add(all(check_final_chain(JacobiParams(int(n[i]), al[i], be[i]))))

    # degree zero: closed-form max against the bound, and sampled values under it
    n0 = Tally()
    al = sample_ratio(rng, samples, 1000.0)
    be = sample_ratio(rng, samples, 1000.0)
    xs = sample_x(rng, samples)
    _, lg = g_log_at(0, al, be, xs)
    weighted = np.exp(lg + 0.25 * (np.log1p(-xs) + np.log1p(xs)))
    bound = (al + be + 1.0) ** -0.25
    maxv = np.array([n0_bound(p, q).max_value for p, q in zip(al, be)])
    n0.add((weighted <= maxv + SLACK) & (maxv <= bound + SLACK), bound - maxv)

    weak, strong = exp_integral_grid(exp_grid)
    out = {k: t.as_dict() for k, t in tallies.items()}
    out["final_chain"] = chain.as_dict()
    out["lemma43"] = n0.as_dict()
    out["lemma37"] = weak.as_dict()
    out["lemma37_strong"] = strong.as_dict()
    return out


def wigner_suite(seed: int, max_two_l: int = 40, theta_points: int = 181) -> dict:
    rng = _rng(seed, "wigner")
    thetas = np.sort(rng.uniform(0.0, math.pi, 7))
    rows = Tally()
    for two_l in range(0, 21):
        for two_p in range(-two_l, two_l + 1, 2):
            for th in thetas:
                for fn in (unitarity_row_check, unitarity_column_check):
                    d = abs(fn(two_l, two_p, th) - 1.0)
                    rows.add(d <= 1e-10, 1e-10 - d)
    t2 = Tally()
    for lvl in theorem2_sweep(max_two_l, np.linspace(0.0, math.pi, theta_points)):
        t2.add(lvl.holds)
    sph = Tally()
    grid = np.linspace(0.0, math.pi, theta_points)
    for l in range(0, 21):
        for m in range(-l, l + 1):
            try:
                spherical_harmonic_magnitude(l, m, grid)
                sph.add(True)
            except AssertionError:
                sph.add(False)
    return {"unitarity": rows.as_dict(), "theorem2": t2.as_dict(), "spherical_harmonics": sph.as_dict()}


def bernstein_suite(seed: int, n_max: int = 200, grid_k: int = 4001) -> dict:
    recs = bernstein_check(n_max, grid_k)
    t = Tally()
    for r in recs:
        t.add(r.holds, r.rhs - r.max_lhs)
    floor = min(r.scaled for r in recs if r.n >= 5)
    return {"bernstein": t.as_dict(), "min_scaled_n_ge_5": floor}


def run_suite(name: str, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> dict:
    if name == "gamma":
        return gamma_suite(seed, samples)
    if name == "envelope":
        return envelope_suite(seed, samples)
    if name == "wigner":
        return wigner_suite(seed)
    if name == "bernstein":
        return bernstein_suite(seed)
    raise ValueError(f"unknown suite {name!r}")


def verify_report(suite: str = "all", seed: int = 0, samples: int = DEFAULT_SAMPLES) -> dict:
    names = SUITES if suite == "all" else (suite,)
    results = {name: run_suite(name, seed, samples) for name in names}
    violations = sum(
        v.get("violations", 0)
        for res in results.values()
        for v in res.values()
        if isinstance(v, dict)
    )
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "seed": seed,
        "samples": samples,
        "results": results,
        "violations": violations,
    }
