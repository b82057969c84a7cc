"""Interface coupling conditions.

Each coupling condition exposes

* ``residual(Um, Up)``      -- vector of equality constraints in natural units,
* ``admissible(Um, Up)``    -- inequality/entropy predicate with a reason string,
* ``conserved_components``  -- flux components equal across the interface for
                               any pair satisfying the equalities.

States are conserved-variable arrays of the side models declared at
construction.  All objects are immutable and thread-safe.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError
from .models import BarotropicNozzle, IdealGasEuler

__all__ = [
    "ClassicalCoupling",
    "ParticleCoupling",
    "HeatExchangeCoupling",
    "FluxCoupling",
    "StateCoupling",
    "NozzleCoupling",
    "coupling_from_dict",
    "regularized_profile_oracle",
]

_CMP_TOL = 1e-12  # tolerance on inequality comparisons


def _leq(a, b, tol=_CMP_TOL):
    return a <= b + tol


class ClassicalCoupling:
    """Plain continuity of the flux: f(U-) = f(U+), entropy flux nonincreasing."""

    kind = "classical"

    def __init__(self, model):
        self.model = model
        self.equality_count = model.dim
        self.conserved_components = tuple(range(model.dim))

    def residual(self, Um, Up):
        return np.asarray(self.model.flux(Um) - self.model.flux(Up), dtype=float)

    def admissible(self, Um, Up):
        drop = self.model.entropy_flux(Up) - self.model.entropy_flux(Um)
        if _leq(drop, 0.0):
            return True, ""
        return False, f"entropy flux increases across the interface by {drop:.3e}"

    def to_dict(self):
        return {"kind": self.kind}


class ParticleCoupling:
    """Fixed obstacle in an isothermal flow: mass through, momentum drag lam*q.

    The two implication conditions say a subsonic approach on the upstream
    side must stay subsonic on the downstream side.
    """

    kind = "particle"

    def __init__(self, lam: float, c: float):
        if lam < 0.0:
            raise ValueError("friction parameter must be nonnegative")
        self.lam = float(lam)
        self.c = float(c)
        self.equality_count = 2
        self.conserved_components = (0,)

    def _eta(self, rho, q):
        return q * q / rho + self.c * self.c * rho

    def residual(self, Um, Up):
        rho_m, q_m = np.asarray(Um, dtype=float)
        rho_p, q_p = np.asarray(Up, dtype=float)
        if rho_m <= 0.0 or rho_p <= 0.0:
            raise DomainError("nonpositive density in coupling residual")
        q = 0.5 * (q_m + q_p)
        return np.array(
            [q_m - q_p, self._eta(rho_m, q_m) - self._eta(rho_p, q_p) - self.lam * q]
        )

    def admissible(self, Um, Up):
        c = self.c
        rho_m, q_m = np.asarray(Um, dtype=float)
        rho_p, q_p = np.asarray(Up, dtype=float)
        q = 0.5 * (q_m + q_p)
        if _leq(0.0, q) and _leq(q, c * rho_m):
            if not (_leq(0.0, q) and _leq(q, c * rho_p)):
                return False, "subsonic entrance with supersonic exit (q > 0)"
        if _leq(-c * rho_p, q) and _leq(q, 0.0):
            if not (_leq(-c * rho_m, q) and _leq(q, 0.0)):
                return False, "subsonic entrance with supersonic exit (q < 0)"
        return True, ""

    def to_dict(self):
        return {"kind": self.kind, "lam": self.lam, "c": self.c}


class HeatExchangeCoupling:
    """Obstacle in a gamma-gas flow with drag lam and heat exchange mu.

    Relations: q continuous, momentum-flux jump lam*q, and the specific
    entropy deviation from s_P decays by exp(-mu/|q|) from the upwind to the
    downwind side.  For q = 0 the entropy relation degenerates to s = s_P on
    both sides and the residual gains one extra component.
    """

    kind = "heat_exchange"

    def __init__(self, lam: float, mu: float, s_p: float, rho0: float, gamma: float):
        if lam < 0.0 or mu < 0.0 or s_p < 0.0:
            raise ValueError("lam, mu and s_P must be nonnegative")
        self.lam = float(lam)
        self.mu = float(mu)
        self.s_p = float(s_p)
        self.rho0 = float(rho0)
        self.gamma = float(gamma)
        self.equality_count = 3
        self.conserved_components = (0,)
        self._gas = IdealGasEuler(gamma=self.gamma, rho0=self.rho0)

    def residual(self, Um, Up):
        gas = self._gas
        Um = np.asarray(Um, dtype=float)
        Up = np.asarray(Up, dtype=float)
        q_m, q_p = Um[1], Up[1]
        q = 0.5 * (q_m + q_p)
        eta_m = float(gas.momentum_flux(Um))
        eta_p = float(gas.momentum_flux(Up))
        s_m = float(gas.specific_entropy(Um))
        s_p_side = float(gas.specific_entropy(Up))
        base = [q_m - q_p, eta_m - eta_p - self.lam * q]
        if q == 0.0:
            return np.array(base + [s_p_side - self.s_p, s_m - self.s_p])
        decay = math.exp(-self.mu / abs(q))
        if q > 0.0:
            ds = (s_p_side - self.s_p) - decay * (s_m - self.s_p)
        else:
            ds = (s_m - self.s_p) - decay * (s_p_side - self.s_p)
        return np.array(base + [ds])

    def admissible(self, Um, Up):
        return True, ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "lam": self.lam,
            "mu": self.mu,
            "s_p": self.s_p,
            "rho0": self.rho0,
            "gamma": self.gamma,
        }


class FluxCoupling:
    """Continuity of the full flux across a pressure-law jump."""

    kind = "flux_coupling"

    def __init__(self, gamma_left: float, gamma_right: float):
        self.gamma_left = float(gamma_left)
        self.gamma_right = float(gamma_right)
        self.equality_count = 3
        self.conserved_components = (0, 1, 2)
        self._left = IdealGasEuler(gamma=self.gamma_left)
        self._right = IdealGasEuler(gamma=self.gamma_right)

    def residual(self, Um, Up):
        return np.asarray(self._left.flux(Um) - self._right.flux(Up), dtype=float)

    def admissible(self, Um, Up):
        return True, ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "gamma_left": self.gamma_left,
            "gamma_right": self.gamma_right,
        }


class StateCoupling:
    """Continuity of density, velocity and pressure across a pressure-law jump.

    Equal primitive triples force the mass and momentum fluxes to agree, but
    not the energy flux when the adiabatic exponents differ.
    """

    kind = "state_coupling"

    def __init__(self, gamma_left: float, gamma_right: float):
        self.gamma_left = float(gamma_left)
        self.gamma_right = float(gamma_right)
        self.equality_count = 3
        self.conserved_components = (0, 1)
        self._left = IdealGasEuler(gamma=self.gamma_left)
        self._right = IdealGasEuler(gamma=self.gamma_right)

    def residual(self, Um, Up):
        Um = np.asarray(Um, dtype=float)
        Up = np.asarray(Up, dtype=float)
        return np.array(
            [
                Um[0] - Up[0],
                Um[1] / Um[0] - Up[1] / Up[0],
                float(self._left.pressure(Um) - self._right.pressure(Up)),
            ]
        )

    def admissible(self, Um, Up):
        return True, ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "gamma_left": self.gamma_left,
            "gamma_right": self.gamma_right,
        }


class NozzleCoupling:
    """Cross-section jump in a barotropic duct: mass flux and Bernoulli head
    are continuous at the jump."""

    kind = "nozzle"

    def __init__(self, alpha_left: float, alpha_right: float, exponent: float = 3.0):
        if alpha_left <= 0.0 or alpha_right <= 0.0:
            raise ValueError("cross-sections must be positive")
        self.alpha_left = float(alpha_left)
        self.alpha_right = float(alpha_right)
        self.exponent = float(exponent)
        self.equality_count = 2
        self.conserved_components = (0,)
        self._left = BarotropicNozzle(alpha=self.alpha_left, exponent=self.exponent)
        self._right = BarotropicNozzle(alpha=self.alpha_right, exponent=self.exponent)

    def residual(self, Um, Up):
        Um = np.asarray(Um, dtype=float)
        Up = np.asarray(Up, dtype=float)
        return np.array(
            [
                Um[1] - Up[1],  # alpha rho w on each side
                float(self._left.bernoulli(Um) - self._right.bernoulli(Up)),
            ]
        )

    def admissible(self, Um, Up):
        return True, ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "alpha_left": self.alpha_left,
            "alpha_right": self.alpha_right,
            "exponent": self.exponent,
        }


def coupling_from_dict(d: dict, model_left=None, model_right=None):
    """Rebuild a coupling condition from its to_dict() form.

    The classical coupling needs its model, which serialization cannot carry;
    pass it (or let it default to the left model).
    """
    kind = d["kind"]
    if kind == "classical":
        if model_left is None:
            raise ValueError("classical coupling needs its model")
        return ClassicalCoupling(model_left)
    if kind == "particle":
        return ParticleCoupling(lam=d["lam"], c=d["c"])
    if kind == "heat_exchange":
        return HeatExchangeCoupling(
            lam=d["lam"], mu=d["mu"], s_p=d["s_p"], rho0=d["rho0"], gamma=d["gamma"]
        )
    if kind == "flux_coupling":
        return FluxCoupling(gamma_left=d["gamma_left"], gamma_right=d["gamma_right"])
    if kind == "state_coupling":
        return StateCoupling(gamma_left=d["gamma_left"], gamma_right=d["gamma_right"])
    if kind == "nozzle":
        return NozzleCoupling(
            alpha_left=d["alpha_left"],
            alpha_right=d["alpha_right"],
            exponent=d.get("exponent", 3.0),
        )
    raise ValueError(f"unknown coupling kind {kind!r}")


# ---------------------------------------------------------------------------
# Regularized-profile oracle for the heat-exchange coupling
# ---------------------------------------------------------------------------

_RAMPS = {
    # C^1 monotone ramps from 0 at -eps to 1 at +eps, derivative vanishing at
    # the edges; t below is the normalized coordinate in [0, 1].
    "cosine": (
        lambda t: 0.5 * (1.0 - math.cos(math.pi * t)),
        lambda t: 0.5 * math.pi * math.sin(math.pi * t),
    ),
    "smoothstep": (
        lambda t: t * t * (3.0 - 2.0 * t),
        lambda t: 6.0 * t * (1.0 - t),
    ),
    "smootherstep": (
        lambda t: t * t * t * (t * (6.0 * t - 15.0) + 10.0),
        lambda t: 30.0 * t * t * (t - 1.0) * (t - 1.0),
    ),
}


def _recover_velocity(q, eta, G, gamma, u_prev):
    """Velocity from the integrated quantities (q, eta, G).

    G = u (E + p) is quadratic in u once p = eta - q u is substituted; the
    root continuous with the running profile is returned.
    """
    beta = gamma / (gamma - 1.0)
    a = q * (0.5 - beta)
    b = beta * eta
    disc = b * b - 4.0 * a * (-G)
    if disc < 0.0:
        raise DomainError("velocity recovery lost its real roots (left subsonic region?)")
    sq = math.sqrt(disc)
    r1 = (-b + sq) / (2.0 * a)
    r2 = (-b - sq) / (2.0 * a)
    return r1 if abs(r1 - u_prev) <= abs(r2 - u_prev) else r2


def regularized_profile_oracle(
    lam,
    mu,
    s_p,
    rho0,
    gamma,
    Uminus,
    eps: float = 0.5,
    n_steps: int = 10_000,
    ramp: str = "cosine",
):
    """Integrate the thickened-obstacle balance laws across [-eps, eps].

    Classical RK4 on (momentum flux, energy flux) with constant mass flux;
    the obstacle indicator is the chosen smooth ramp.  Returns the conserved
    state at +eps.  Raises DomainError if the profile leaves the subsonic
    region, where the construction is meaningless.
    """
    gas = IdealGasEuler(gamma=gamma, rho0=rho0)
    U = np.asarray(Uminus, dtype=float)
    gas.validate(U)
    q = float(U[1])
    if q == 0.0:
        raise ValueError("the oracle needs a nonzero mass flux")
    if abs(q / U[0]) >= float(gas.sound_speed(U)):
        raise DomainError("inflow state must be subsonic")
    _, hprime = _RAMPS[ramp]

    eta = float(gas.momentum_flux(U))
    G = float(gas.flux(U)[2])
    u = q / float(U[0])

    h = 2.0 * eps / n_steps

    def rhs(x, y, u_guess):
        eta_x, G_x = y
        u_x = _recover_velocity(q, eta_x, G_x, gamma, u_guess)
        t = (x + eps) / (2.0 * eps)
        w = hprime(min(max(t, 0.0), 1.0)) / (2.0 * eps)
        rho_x = q / u_x
        p_x = eta_x - q * u_x
        e_x = p_x / ((gamma - 1.0) * rho_x)
        heat = e_x - s_p * (rho_x / rho0) ** (gamma - 1.0)
        return np.array([-lam * q * w, -lam * q * u_x * w - mu * heat * w]), u_x

    x = -eps
    y = np.array([eta, G])
    for _ in range(n_steps):
        k1, u1 = rhs(x, y, u)
        k2, u2 = rhs(x + 0.5 * h, y + 0.5 * h * k1, u1)
        k3, u3 = rhs(x + 0.5 * h, y + 0.5 * h * k2, u2)
        k4, u4 = rhs(x + h, y + h * k3, u3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x += h
        u = _recover_velocity(q, y[0], y[1], gamma, u4)
        rho = q / u
        p = y[0] - q * u
        if rho <= 0.0 or p <= 0.0:
            raise DomainError("profile left the physical domain")
        if abs(u) >= math.sqrt(gamma * p / rho):
            raise DomainError("profile left the subsonic region")

    rho = q / u
    p = y[0] - q * u
    return gas.from_primitives(rho, u, p)
