"""Wigner d-matrix entries and spherical harmonics through g_n^(alpha,beta).

Spins are stored doubled (two_l = 2l) so half-integers stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import CONSTANTS
from .gamma_core import DomainError
from .jacobi_eval import g_log_at, g_log_table


class SectorError(DomainError):
    """Complex matrix element requested outside the sector |q| <= p."""


@dataclass(frozen=True)
class WignerIndex:
    two_l: int
    two_p: int
    two_q: int

    def __post_init__(self):
        for name in ("two_l", "two_p", "two_q"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.two_l < 0:
            raise DomainError(f"two_l must be >= 0, got {self.two_l}")
        if abs(self.two_p) > self.two_l or abs(self.two_q) > self.two_l:
            raise DomainError(f"need |p|, |q| <= l, got {self}")
        if (self.two_p - self.two_l) % 2 or (self.two_q - self.two_l) % 2:
            raise DomainError(f"p and q must differ from l by integers, got {self}")

    @classmethod
    def from_spin(cls, l: float, p: float, q: float) -> WignerIndex:
        twos = [2 * float(v) for v in (l, p, q)]
        if any(not t.is_integer() for t in twos):
            raise DomainError("l, p, q must be multiples of 1/2")
        return cls(*(int(t) for t in twos))

    @property
    def alpha(self) -> int:
        return abs(self.two_p - self.two_q) // 2

    @property
    def beta(self) -> int:
        return abs(self.two_p + self.two_q) // 2

    @property
    def n(self) -> int:
        return (self.two_l - max(abs(self.two_p), abs(self.two_q))) // 2

    @property
    def dimension(self) -> int:
        return self.two_l + 1

    def jacobi_indices(self) -> tuple[int, int, int]:
        n, al, be = self.n, self.alpha, self.beta
        assert 2 * n + al + be + 1 == self.dimension, "dimension identity"
        return n, al, be


def _magnitude(n, alpha, beta, theta):
    _, lg = g_log_at(n, alpha, beta, np.cos(2.0 * np.asarray(theta, dtype=float)))
    return np.exp(lg)


def wigner_d_magnitude(idx: WignerIndex, theta):
    """|m^l_pq| at k_phi t_theta k_-psi; does not depend on phi, psi."""
    n, al, be = idx.jacobi_indices()
    out = _magnitude(n, al, be, theta)
    return float(out) if np.ndim(out) == 0 else out


def wigner_d_element(idx: WignerIndex, phi: float, theta: float, psi: float) -> complex:
    """m^l_pq(k_phi t_theta k_-psi) for |q| <= p."""
    if abs(idx.two_q) > idx.two_p:
        raise SectorError(f"complex entry only available for |q| <= p, got {idx}")
    n, al, be = idx.jacobi_indices()
    sg, lg = g_log_at(n, al, be, math.cos(2.0 * theta))
    g = float(sg) * math.exp(float(lg))
    phase = np.exp(-1j * idx.two_p * phi) * np.exp(1j * idx.two_q * psi)
    return complex(phase * g)


@dataclass(frozen=True)
class Theorem2Result:
    max_ratio: float
    holds: bool
    argmax_theta: float


def _ratio(mag, theta, dimension):
    return np.sqrt(np.abs(np.sin(2.0 * theta))) * mag * dimension**0.25


def theorem2_check(idx: WignerIndex, theta_grid) -> Theorem2Result:
    """Max over the grid of |sin 2theta|^(1/2) |m^l_pq| (2l+1)^(1/4)."""
    theta = np.asarray(theta_grid, dtype=float)
    ratio = _ratio(np.atleast_1d(wigner_d_magnitude(idx, theta)), np.atleast_1d(theta), idx.dimension)
    k = int(np.argmax(ratio))
    m = float(ratio[k])
    return Theorem2Result(m, m <= CONSTANTS.C_general, float(np.atleast_1d(theta)[k]))


@dataclass(frozen=True)
class Theorem2Level:
    two_l: int
    max_ratio: float
    witness: WignerIndex
    holds: bool


def theorem2_sweep(max_two_l: int, theta_grid) -> list[Theorem2Level]:
    """Theorem 2 over every (p, q) for 2l = 0..max_two_l.

    Indices sharing (alpha, beta) are served from one recurrence table over n,
    since the magnitude depends on (l, p, q) only through (n, alpha, beta).
    """
    theta = np.asarray(theta_grid, dtype=float)
    x = np.cos(2.0 * theta)
    weight = np.sqrt(np.abs(np.sin(2.0 * theta)))
    # best[(n, alpha, beta)] = max over theta of weight * |g|
    best: dict[tuple[int, int, int], float] = {}
    for s in range(max_two_l + 1):
        nmax = (max_two_l - s) // 2
        al = np.arange(s + 1, dtype=float)[:, None]
        _, lg = g_log_table(nmax, al, s - al, x[None, :])
        peak = np.max(np.exp(lg) * weight, axis=-1)
        for n in range(nmax + 1):
            for a in range(s + 1):
                best[(n, a, s - a)] = float(peak[n, a])
    levels = []
    for two_l in range(max_two_l + 1):
        dim = two_l + 1
        top, witness = -1.0, None
        for two_p in range(-two_l, two_l + 1, 2):
            for two_q in range(-two_l, two_l + 1, 2):
                idx = WignerIndex(two_l, two_p, two_q)
                r = best[idx.jacobi_indices()] * dim**0.25
                if r > top:
                    top, witness = r, idx
        levels.append(Theorem2Level(two_l, top, witness, top <= CONSTANTS.C_general))
    return levels


def _line_sum(two_l: int, fixed: int, theta: float, transpose: bool) -> float:
    others = np.arange(-two_l, two_l + 1, 2)
    t2p = np.full_like(others, fixed) if not transpose else others
    t2q = others if not transpose else np.full_like(others, fixed)
    al = np.abs(t2p - t2q) // 2
    be = np.abs(t2p + t2q) // 2
    n = (two_l - np.maximum(np.abs(t2p), np.abs(t2q))) // 2
    assert np.all(2 * n + al + be + 1 == two_l + 1)
    mag = _magnitude(n, al.astype(float), be.astype(float), theta)
    return float(np.sum(mag**2))


def unitarity_row_check(two_l: int, two_p: int, theta: float) -> float:
    """Sum over q of |m^l_pq(theta)|^2, which should be 1."""
    WignerIndex(two_l, two_p, two_l)
    return _line_sum(two_l, two_p, theta, transpose=False)


def unitarity_column_check(two_l: int, two_q: int, theta: float) -> float:
    """Sum over p of |m^l_pq(theta)|^2."""
    WignerIndex(two_l, two_l, two_q)
    return _line_sum(two_l, two_q, theta, transpose=True)


def spherical_harmonic_magnitude(l: int, m: int, theta):
    """|Y_l^m(theta, phi)| in the quantum-mechanics normalization."""
    if isinstance(l, bool) or int(l) != l or l < 0:
        raise DomainError(f"l must be a nonnegative integer, got {l!r}")
    if int(m) != m or abs(m) > l:
        raise DomainError(f"need integer |m| <= l, got m={m!r}")
    l, al = int(l), abs(int(m))
    theta = np.asarray(theta, dtype=float)
    _, lg = g_log_at(l - al, al, al, np.cos(theta))
    y = math.sqrt((2 * l + 1) / (4.0 * math.pi)) * np.exp(lg)
    lhs = np.sqrt(np.abs(np.sin(theta))) * y
    bound = CONSTANTS.C_general / math.sqrt(4.0 * math.pi) * (2 * l + 1) ** 0.25
    assert np.all(lhs <= bound * (1.0 + 1e-10)), "spherical harmonic bound violated"
    return float(y) if y.ndim == 0 else y
