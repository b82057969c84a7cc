"""Exact Riemann solvers.

The isothermal solver provides the Godunov flux and the wave fans used to
reconstruct reference profiles for the isothermal test cases.  The ideal-gas
solver is only used to rebuild reference profiles from converged interface
traces (star-region pressure iteration, standard construction).

Sampling convention: a discontinuity sitting exactly at the sampling speed
returns its right state, so a stationary shock sampled at xi = 0 yields the
downstream state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, TraceSolverError

__all__ = [
    "Wave",
    "WaveFan",
    "solve_riemann",
    "godunov_flux",
    "IdealGasFan",
    "solve_riemann_ideal_gas",
]


@dataclass(frozen=True)
class Wave:
    """One wave of a self-similar fan: a shock or a rarefaction."""

    kind: str  # "shock" or "rarefaction"
    head: float  # shock speed, or speed of the leftmost edge
    tail: float  # equals head for shocks

    @property
    def is_shock(self):
        return self.kind == "shock"


@dataclass(frozen=True)
class WaveFan:
    """Self-similar solution of an isothermal Riemann problem."""

    c: float
    left: np.ndarray
    star: np.ndarray
    right: np.ndarray
    wave1: Wave
    wave2: Wave

    def sample(self, xi: float) -> np.ndarray:
        """State of the fan at x/t = xi."""
        c = self.c
        rho_l, q_l = self.left
        rho_s, q_s = self.star
        rho_r, q_r = self.right
        u_l = q_l / rho_l
        u_s = q_s / rho_s
        u_r = q_r / rho_r

        if self.wave1.is_shock:
            if xi < self.wave1.head:
                return np.array(self.left)
        else:
            if xi < self.wave1.head:
                return np.array(self.left)
            if xi <= self.wave1.tail:
                u = xi + c
                rho = rho_l * math.exp((u_l - u) / c)
                return np.array([rho, rho * u])

        if self.wave2.is_shock:
            if xi < self.wave2.head:
                return np.array(self.star)
            return np.array(self.right)
        if xi < self.wave2.head:
            return np.array(self.star)
        if xi <= self.wave2.tail:
            u = xi - c
            rho = rho_r * math.exp((u - u_r) / c)
            return np.array([rho, rho * u])
        return np.array(self.right)


def _u_across_1wave(c, rho_l, u_l, rho):
    """Velocity along the forward 1-wave curve from (rho_l, u_l)."""
    if rho <= rho_l:  # rarefaction: u + c log rho invariant
        return u_l - c * math.log(rho / rho_l)
    return u_l - c * (rho - rho_l) / math.sqrt(rho * rho_l)


def _u_across_2wave(c, rho_r, u_r, rho):
    """Velocity along the backward 2-wave curve from (rho_r, u_r)."""
    if rho <= rho_r:  # rarefaction: u - c log rho invariant
        return u_r + c * math.log(rho / rho_r)
    return u_r + c * (rho - rho_r) / math.sqrt(rho * rho_r)


def _du1_drho(c, rho_l, rho):
    if rho <= rho_l:
        return -c / rho
    return -c * (rho + rho_l) / (2.0 * rho * math.sqrt(rho * rho_l))


def _du2_drho(c, rho_r, rho):
    if rho <= rho_r:
        return c / rho
    return c * (rho + rho_r) / (2.0 * rho * math.sqrt(rho * rho_r))


def _star_density(c, rho_l, u_l, rho_r, u_r, tol=1e-13, max_iter=200):
    """Root of the monotone velocity mismatch between the two wave curves.

    Safeguarded Newton on a bracket grown geometrically from the initial
    densities; the mismatch is strictly decreasing in rho so the root is
    unique (no vacuum for isothermal flow).
    """

    def phi(rho):
        return _u_across_1wave(c, rho_l, u_l, rho) - _u_across_2wave(c, rho_r, u_r, rho)

    def dphi(rho):
        return _du1_drho(c, rho_l, rho) - _du2_drho(c, rho_r, rho)

    lo = min(rho_l, rho_r)
    hi = max(rho_l, rho_r)
    for _ in range(2000):
        if phi(lo) > 0.0:
            break
        lo *= 0.5
    else:
        raise TraceSolverError("failed to bracket the wave-curve intersection from below")
    for _ in range(2000):
        if phi(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise TraceSolverError("failed to bracket the wave-curve intersection from above")

    rho = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = phi(rho)
        if abs(f) < tol:
            return rho
        if f > 0.0:
            lo = rho
        else:
            hi = rho
        step = f / dphi(rho)
        cand = rho - step
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        rho = cand
    raise TraceSolverError(
        f"wave-curve Newton did not converge; last iterate rho={rho}, mismatch={phi(rho)}"
    )


def solve_riemann(c: float, UL, UR) -> WaveFan:
    """Exact isothermal Riemann fan between left state UL and right state UR."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    rho_l, q_l = UL
    rho_r, q_r = UR
    if rho_l <= 0.0 or rho_r <= 0.0:
        raise DomainError("Riemann data must have positive density")
    u_l = q_l / rho_l
    u_r = q_r / rho_r

    if rho_l == rho_r and q_l == q_r:
        wave = Wave("rarefaction", u_l - c, u_l - c)
        wave2 = Wave("rarefaction", u_l + c, u_l + c)
        return WaveFan(c=c, left=UL.copy(), star=UL.copy(), right=UR.copy(), wave1=wave, wave2=wave2)

    rho_s = _star_density(c, rho_l, u_l, rho_r, u_r)
    u_s = 0.5 * (
        _u_across_1wave(c, rho_l, u_l, rho_s) + _u_across_2wave(c, rho_r, u_r, rho_s)
    )
    q_s = rho_s * u_s
    star = np.array([rho_s, q_s])

    if rho_s > rho_l:
        wave1 = Wave("shock", (q_s - q_l) / (rho_s - rho_l), (q_s - q_l) / (rho_s - rho_l))
    else:
        wave1 = Wave("rarefaction", u_l - c, u_s - c)
    if rho_s > rho_r:
        wave2 = Wave("shock", (q_r - q_s) / (rho_r - rho_s), (q_r - q_s) / (rho_r - rho_s))
    else:
        wave2 = Wave("rarefaction", u_s + c, u_r + c)
    return WaveFan(c=c, left=UL.copy(), star=star, right=UR.copy(), wave1=wave1, wave2=wave2)


def godunov_flux(c: float, UL, UR) -> np.ndarray:
    """Physical flux of the fan sampled on the t-axis."""
    fan = solve_riemann(c, UL, UR)
    rho, q = fan.sample(0.0)
    return np.array([q, q * q / rho + c * c * rho])


class IdealGasFan:
    """Self-similar solution of an ideal-gas Riemann problem in primitives."""

    def __init__(self, gamma, left, right, p_star, u_star):
        self.gamma = float(gamma)
        self.left = tuple(map(float, left))  # (rho, u, p)
        self.right = tuple(map(float, right))
        self.p_star = float(p_star)
        self.u_star = float(u_star)

    def sample_primitives(self, xi: float):
        """(rho, u, p) at x/t = xi, full left/right sampling tree."""
        g = self.gamma
        gm1 = g - 1.0
        gp1 = g + 1.0
        rho_l, u_l, p_l = self.left
        rho_r, u_r, p_r = self.right
        a_l = math.sqrt(g * p_l / rho_l)
        a_r = math.sqrt(g * p_r / rho_r)
        p_s, u_s = self.p_star, self.u_star

        if xi < u_s:  # left of the contact
            if p_s > p_l:  # left shock
                rho_sl = rho_l * ((p_s / p_l + gm1 / gp1) / (gm1 / gp1 * p_s / p_l + 1.0))
                s_l = u_l - a_l * math.sqrt(gp1 / (2.0 * g) * p_s / p_l + gm1 / (2.0 * g))
                if xi < s_l:
                    return rho_l, u_l, p_l
                return rho_sl, u_s, p_s
            # left rarefaction
            rho_sl = rho_l * (p_s / p_l) ** (1.0 / g)
            a_sl = a_l * (p_s / p_l) ** (gm1 / (2.0 * g))
            if xi < u_l - a_l:
                return rho_l, u_l, p_l
            if xi > u_s - a_sl:
                return rho_sl, u_s, p_s
            u = (2.0 / gp1) * (a_l + 0.5 * gm1 * u_l + xi)
            a = u - xi
            rho = rho_l * (a / a_l) ** (2.0 / gm1)
            return rho, u, rho * a * a / g
        # right of the contact
        if p_s > p_r:  # right shock
            rho_sr = rho_r * ((p_s / p_r + gm1 / gp1) / (gm1 / gp1 * p_s / p_r + 1.0))
            s_r = u_r + a_r * math.sqrt(gp1 / (2.0 * g) * p_s / p_r + gm1 / (2.0 * g))
            if xi >= s_r:
                return rho_r, u_r, p_r
            return rho_sr, u_s, p_s
        # right rarefaction
        rho_sr = rho_r * (p_s / p_r) ** (1.0 / g)
        a_sr = a_r * (p_s / p_r) ** (gm1 / (2.0 * g))
        if xi >= u_r + a_r:
            return rho_r, u_r, p_r
        if xi <= u_s + a_sr:
            return rho_sr, u_s, p_s
        u = (2.0 / gp1) * (-a_r + 0.5 * gm1 * u_r + xi)
        a = xi - u
        rho = rho_r * (a / a_r) ** (2.0 / gm1)
        return rho, u, rho * a * a / g

    def sample(self, xi: float) -> np.ndarray:
        """Conserved state (rho, q, E) at x/t = xi."""
        rho, u, p = self.sample_primitives(xi)
        return np.array([rho, rho * u, p / (self.gamma - 1.0) + 0.5 * rho * u * u])


def _pressure_fn(p, rho_k, p_k, a_k, gamma):
    gm1 = gamma - 1.0
    gp1 = gamma + 1.0
    if p > p_k:
        A = 2.0 / (gp1 * rho_k)
        B = gm1 / gp1 * p_k
        return (p - p_k) * math.sqrt(A / (p + B))
    return 2.0 * a_k / gm1 * ((p / p_k) ** (gm1 / (2.0 * gamma)) - 1.0)


def solve_riemann_ideal_gas(gamma, left, right, tol=1e-13) -> IdealGasFan:
    """Exact ideal-gas Riemann fan; left/right are (rho, u, p) triples.

    Star pressure from the monotone pressure function (bracketed Brent),
    star velocity from the average of the two curve values.
    """
    from scipy.optimize import brentq

    rho_l, u_l, p_l = map(float, left)
    rho_r, u_r, p_r = map(float, right)
    if min(rho_l, rho_r, p_l, p_r) <= 0.0:
        raise DomainError("Riemann data must have positive density and pressure")
    a_l = math.sqrt(gamma * p_l / rho_l)
    a_r = math.sqrt(gamma * p_r / rho_r)
    if 2.0 * (a_l + a_r) / (gamma - 1.0) <= u_r - u_l:
        raise DomainError("vacuum-forming Riemann data rejected")

    def total(p):
        return (
            _pressure_fn(p, rho_l, p_l, a_l, gamma)
            + _pressure_fn(p, rho_r, p_r, a_r, gamma)
            + (u_r - u_l)
        )

    lo = 1e-14 * min(p_l, p_r)
    hi = max(p_l, p_r)
    while total(hi) < 0.0:
        hi *= 4.0
        if hi > 1e14 * max(p_l, p_r):
            raise TraceSolverError("failed to bracket the star pressure")
    p_star = brentq(total, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=200)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (
        _pressure_fn(p_star, rho_r, p_r, a_r, gamma)
        - _pressure_fn(p_star, rho_l, p_l, a_l, gamma)
    )
    return IdealGasFan(gamma, (rho_l, u_l, p_l), (rho_r, u_r, p_r), p_star, u_star)
