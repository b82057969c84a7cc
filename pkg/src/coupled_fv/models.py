"""Conservation-law systems: fluxes, primitives, wave speeds, entropy pairs.

Three models are supported:

* isothermal Euler, U = (rho, q), flux (q, q^2/rho + c^2 rho);
* ideal-gas Euler, U = (rho, q, E), pressure p = (gamma-1) rho e;
* barotropic flow in a duct of constant cross-section alpha,
  U = (alpha rho, alpha rho w), pressure p(tau) = tau^(-n) in the
  specific volume tau = 1/rho.

All operations accept a single state of shape (dim,) or a batch of shape
(N, dim) and are pure functions, safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError

__all__ = [
    "IsothermalEuler",
    "IdealGasEuler",
    "BarotropicNozzle",
    "model_from_dict",
]


def _first_bad(mask):
    """Index of the first offending entry of a boolean array."""
    idx = np.nonzero(np.atleast_1d(mask))[0]
    return int(idx[0]) if idx.size else -1


def _pow(x, k: float):
    """x**k, via exact repeated multiplication for small integer k.

    numpy's vectorized pow may round differently from its scalar path, which
    would break the bitwise agreement between the batched and the per-cell
    sweep kernels (and mirror symmetry); plain multiplication is exact.
    """
    ki = int(k)
    if ki == k and 1 <= ki <= 6:
        out = x
        for _ in range(ki - 1):
            out = out * x
        return out
    return x**k


class IsothermalEuler:
    """Isothermal Euler equations with constant sound speed c."""

    kind = "isothermal"
    dim = 2

    def __init__(self, c: float):
        if c <= 0.0:
            raise ValueError(f"sound speed must be positive, got {c}")
        self.c = float(c)

    def __repr__(self):
        return f"IsothermalEuler(c={self.c})"

    def __eq__(self, other):
        return isinstance(other, IsothermalEuler) and other.c == self.c

    def validate(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        if not np.all(np.isfinite(U)):
            raise DomainError("non-finite state component")
        if np.any(rho <= 0.0):
            raise DomainError(
                f"nonpositive density (component 0) at entry {_first_bad(rho <= 0.0)}"
            )

    def is_valid(self, U) -> bool:
        U = np.asarray(U, dtype=float)
        return bool(np.all(np.isfinite(U)) and np.all(U[..., 0] > 0.0))

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return self._flux_raw(U)

    def _flux_raw(self, U):
        rho = U[..., 0]
        q = U[..., 1]
        return np.stack([q, q * q / rho + self.c * self.c * rho], axis=-1)

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return np.abs(U[..., 1] / U[..., 0]) + self.c

    def momentum_flux(self, U):
        """Charge eta = q^2/rho + c^2 rho (even in q)."""
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        q = U[..., 1]
        return q * q / rho + self.c * self.c * rho

    def primitives(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        rho = U[..., 0]
        u = U[..., 1] / rho
        return {"rho": rho, "u": u, "eta": self.momentum_flux(U)}

    def sound_speed(self, U):
        U = np.asarray(U, dtype=float)
        return np.full(U[..., 0].shape, self.c)

    def entropy(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        q = U[..., 1]
        return q * q / (2.0 * rho) + self.c * self.c * rho * np.log(rho)

    def entropy_flux(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        q = U[..., 1]
        return (q / rho) * (self.entropy(U) + self.c * self.c * rho)

    def from_primitives(self, rho, u):
        return np.stack(
            [np.asarray(rho, dtype=float), np.asarray(rho, dtype=float) * np.asarray(u, dtype=float)],
            axis=-1,
        )

    def to_dict(self):
        return {"kind": self.kind, "c": self.c}


class IdealGasEuler:
    """Full Euler equations closed with p = (gamma - 1) rho e.

    rho0 is the reference density entering the specific entropy
    s = e (rho/rho0)^(1-gamma); it only matters for the heat-exchange
    coupling and the entropy diagnostics.
    """

    kind = "ideal_gas"
    dim = 3

    def __init__(self, gamma: float, rho0: float = 1.0):
        if gamma <= 1.0:
            raise ValueError(f"adiabatic exponent must exceed 1, got {gamma}")
        if rho0 <= 0.0:
            raise ValueError(f"reference density must be positive, got {rho0}")
        self.gamma = float(gamma)
        self.rho0 = float(rho0)

    def __repr__(self):
        return f"IdealGasEuler(gamma={self.gamma}, rho0={self.rho0})"

    def __eq__(self, other):
        return (
            isinstance(other, IdealGasEuler)
            and other.gamma == self.gamma
            and other.rho0 == self.rho0
        )

    def internal_energy(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        q = U[..., 1]
        E = U[..., 2]
        return E / rho - 0.5 * (q / rho) ** 2

    def validate(self, U):
        U = np.asarray(U, dtype=float)
        if not np.all(np.isfinite(U)):
            raise DomainError("non-finite state component")
        rho = U[..., 0]
        if np.any(rho <= 0.0):
            raise DomainError(
                f"nonpositive density (component 0) at entry {_first_bad(rho <= 0.0)}"
            )
        e = self.internal_energy(U)
        if np.any(e <= 0.0):
            raise DomainError(
                f"nonpositive internal energy (component 2) at entry {_first_bad(e <= 0.0)}"
            )

    def is_valid(self, U) -> bool:
        U = np.asarray(U, dtype=float)
        if not (np.all(np.isfinite(U)) and np.all(U[..., 0] > 0.0)):
            return False
        return bool(np.all(self.internal_energy(U) > 0.0))

    def pressure(self, U):
        U = np.asarray(U, dtype=float)
        return (self.gamma - 1.0) * U[..., 0] * self.internal_energy(U)

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return self._flux_raw(U)

    def _flux_raw(self, U):
        rho = U[..., 0]
        q = U[..., 1]
        E = U[..., 2]
        p = (self.gamma - 1.0) * (E - 0.5 * q * q / rho)
        u = q / rho
        return np.stack([q, q * u + p, u * (E + p)], axis=-1)

    def sound_speed(self, U):
        U = np.asarray(U, dtype=float)
        return np.sqrt(self.gamma * self.pressure(U) / U[..., 0])

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return np.abs(U[..., 1] / U[..., 0]) + self.sound_speed(U)

    def momentum_flux(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        q = U[..., 1]
        return q * q / rho + self.pressure(U)

    def specific_entropy(self, U):
        """s = e (rho/rho0)^(1-gamma)."""
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        return self.internal_energy(U) * (rho / self.rho0) ** (1.0 - self.gamma)

    def primitives(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        rho = U[..., 0]
        u = U[..., 1] / rho
        return {
            "rho": rho,
            "u": u,
            "p": self.pressure(U),
            "e": self.internal_energy(U),
            "s": self.specific_entropy(U),
            "eta": self.momentum_flux(U),
        }

    def entropy(self, U):
        """Convex entropy -rho log s; its flux is u times itself."""
        U = np.asarray(U, dtype=float)
        return -U[..., 0] * np.log(self.specific_entropy(U))

    def entropy_flux(self, U):
        U = np.asarray(U, dtype=float)
        return (U[..., 1] / U[..., 0]) * self.entropy(U)

    def from_primitives(self, rho, u, p):
        rho = np.asarray(rho, dtype=float)
        u = np.asarray(u, dtype=float)
        p = np.asarray(p, dtype=float)
        E = p / (self.gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, E], axis=-1)

    def to_dict(self):
        return {"kind": self.kind, "gamma": self.gamma, "rho0": self.rho0}


class BarotropicNozzle:
    """Barotropic flow in a duct section of constant cross-section alpha.

    Conserved variables are (alpha rho, alpha rho w).  The pressure law is
    p(tau) = tau^(-n) with n > 1, i.e. P(rho) = rho^n; the specific internal
    energy is the antiderivative of -p with zero integration constant,
    e(tau) = tau^(1-n)/(n-1).  For the default n = 3 the sound speed is
    sqrt(3) rho and the Bernoulli head is w^2/2 + (3/2) rho^2.
    """

    kind = "nozzle"
    dim = 2

    def __init__(self, alpha: float, exponent: float = 3.0):
        if alpha <= 0.0:
            raise ValueError(f"cross-section must be positive, got {alpha}")
        if exponent <= 1.0:
            raise ValueError(f"pressure exponent must exceed 1, got {exponent}")
        self.alpha = float(alpha)
        self.exponent = float(exponent)

    def __repr__(self):
        return f"BarotropicNozzle(alpha={self.alpha}, exponent={self.exponent})"

    def __eq__(self, other):
        return (
            isinstance(other, BarotropicNozzle)
            and other.alpha == self.alpha
            and other.exponent == self.exponent
        )

    def validate(self, U):
        U = np.asarray(U, dtype=float)
        if not np.all(np.isfinite(U)):
            raise DomainError("non-finite state component")
        m = U[..., 0]
        if np.any(m <= 0.0):
            raise DomainError(
                f"nonpositive density (component 0) at entry {_first_bad(m <= 0.0)}"
            )

    def is_valid(self, U) -> bool:
        U = np.asarray(U, dtype=float)
        return bool(np.all(np.isfinite(U)) and np.all(U[..., 0] > 0.0))

    def density(self, U):
        return np.asarray(U, dtype=float)[..., 0] / self.alpha

    def velocity(self, U):
        U = np.asarray(U, dtype=float)
        return U[..., 1] / U[..., 0]

    def pressure(self, U):
        return _pow(self.density(U), self.exponent)

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return self._flux_raw(U)

    def _flux_raw(self, U):
        m = U[..., 0]
        mw = U[..., 1]
        w = mw / m
        rho = m / self.alpha
        return np.stack([mw, mw * w + self.alpha * _pow(rho, self.exponent)], axis=-1)

    def sound_speed(self, U):
        rho = self.density(U)
        n = self.exponent
        return np.sqrt(n * _pow(rho, n - 1.0))

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        return np.abs(self.velocity(U)) + self.sound_speed(U)

    def bernoulli(self, U):
        """Bernoulli head w^2/2 + e(tau) + tau p(tau) = w^2/2 + n/(n-1) rho^(n-1)."""
        U = np.asarray(U, dtype=float)
        w = self.velocity(U)
        rho = self.density(U)
        n = self.exponent
        return 0.5 * w * w + (n / (n - 1.0)) * _pow(rho, n - 1.0)

    def primitives(self, U):
        U = np.asarray(U, dtype=float)
        self.validate(U)
        rho = self.density(U)
        n = self.exponent
        return {
            "rho": rho,
            "u": self.velocity(U),
            "p": _pow(rho, n),
            "e": _pow(rho, n - 1.0) / (n - 1.0),
        }

    def entropy(self, U):
        """alpha (rho w^2/2 + rho e(1/rho)), convex in the conserved pair."""
        U = np.asarray(U, dtype=float)
        m = U[..., 0]
        mw = U[..., 1]
        rho = m / self.alpha
        n = self.exponent
        return 0.5 * mw * mw / m + m * _pow(rho, n - 1.0) / (n - 1.0)

    def entropy_flux(self, U):
        U = np.asarray(U, dtype=float)
        return self.velocity(U) * (self.entropy(U) + self.alpha * _pow(self.density(U), self.exponent))

    def from_primitives(self, rho, w):
        rho = np.asarray(rho, dtype=float)
        w = np.asarray(w, dtype=float)
        return np.stack([self.alpha * rho, self.alpha * rho * w], axis=-1)

    def to_dict(self):
        return {"kind": self.kind, "alpha": self.alpha, "exponent": self.exponent}


_MODEL_KINDS = {
    "isothermal": lambda d: IsothermalEuler(c=d["c"]),
    "ideal_gas": lambda d: IdealGasEuler(gamma=d["gamma"], rho0=d.get("rho0", 1.0)),
    "nozzle": lambda d: BarotropicNozzle(alpha=d["alpha"], exponent=d.get("exponent", 3.0)),
}


def model_from_dict(d: dict):
    """Rebuild a model from its to_dict() representation."""
    try:
        return _MODEL_KINDS[d["kind"]](d)
    except KeyError as exc:
        raise ValueError(f"unknown model kind in {d!r}") from exc
