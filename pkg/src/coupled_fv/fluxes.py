"""Two-point numerical fluxes and the matching numerical entropy flux.

All functions are array-native: state arguments may be single states of
shape (dim,) or batches of shape (N, dim); the dissipation speed A may be a
float or an array broadcastable against the batch.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateInputError
from .riemann import godunov_flux

__all__ = [
    "middle_state",
    "select_A",
    "subcharacteristic_ok",
    "rusanov",
    "force",
    "numerical_entropy_flux",
    "FluxScheme",
    "make_scheme",
]

_GROWTH = 1.1  # speed growth factor for the middle-state fixed point
_GROWTH_CAP = 1e6


def middle_state(model, UL, UR, A):
    """HLL middle state U* = (UL+UR)/2 - (f(UR)-f(UL))/(2A)."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    A = np.asarray(A, dtype=float)[..., None] if np.ndim(A) else A
    return 0.5 * (UL + UR) - (model._flux_raw(UR) - model._flux_raw(UL)) / (2.0 * A)


def _raw_speed(model, U):
    """max_wave_speed without validation; U must already be screened."""
    return np.abs(U[..., 1] / U[..., 0]) + model.sound_speed(U)


def _middle_ok(model, UL, UR, A):
    """True where U*(A) is a valid state with wave speed at most A."""
    Ustar = middle_state(model, UL, UR, A)
    rho = Ustar[..., 0]
    with np.errstate(all="ignore"):
        ok = np.isfinite(rho) & (rho > 0.0)
        if model.dim == 3:
            e = Ustar[..., 2] / rho - 0.5 * (Ustar[..., 1] / rho) ** 2
            ok = ok & np.isfinite(e) & (e > 0.0)
        dummy = np.array([1.0, 0.0, 1.0])[: model.dim]
        safe = np.where(ok[..., None], Ustar, dummy)
        speed = _raw_speed(model, safe)
    return ok & (np.asarray(A) >= speed)


def select_A(model, UL, UR):
    """Dissipation speed satisfying the subcharacteristic bound.

    Starts from max(|u_L|, |u_R|) + c and grows by 1.1 until the recomputed
    middle state is valid and no faster than A.  Scalar inputs give a float,
    batched inputs an array.
    """
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    scalar = UL.ndim == 1
    UL2 = np.atleast_2d(UL)
    UR2 = np.atleast_2d(UR)
    model.validate(UL2)
    model.validate(UR2)
    A = np.maximum(model.max_wave_speed(UL2), model.max_wave_speed(UR2))
    A0 = A.copy()
    pending = ~_middle_ok(model, UL2, UR2, A)
    while np.any(pending):
        A = np.where(pending, A * _GROWTH, A)
        if np.any(A[pending] > _GROWTH_CAP * A0[pending]):
            raise DegenerateInputError(
                "no dissipation speed up to the cap yields a valid middle state"
            )
        pending = pending & ~_middle_ok(model, UL2, UR2, A)
    return float(A[0]) if scalar else A


def subcharacteristic_ok(model, UL, UR, A) -> bool:
    """Check A >= max(|u_L|+c, |u_R|+c, |u_*|+c_*) with U* recomputed at A."""
    UL2 = np.atleast_2d(np.asarray(UL, dtype=float))
    UR2 = np.atleast_2d(np.asarray(UR, dtype=float))
    A2 = np.atleast_1d(np.asarray(A, dtype=float))
    ok = (A2 >= model.max_wave_speed(UL2)) & (A2 >= model.max_wave_speed(UR2))
    ok = ok & _middle_ok(model, UL2, UR2, A2)
    return bool(np.all(ok))


def rusanov(model, UL, UR, A):
    """g = (f(UL)+f(UR))/2 - (A/2)(UR-UL)."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    Ab = np.asarray(A, dtype=float)[..., None] if np.ndim(A) else A
    return 0.5 * (model._flux_raw(UL) + model._flux_raw(UR)) - 0.5 * Ab * (UR - UL)


def force(model, UL, UR, A):
    """Average of the Rusanov flux and the physical flux of the middle state."""
    Ustar = middle_state(model, UL, UR, A)
    if not model.is_valid(Ustar):
        raise DegenerateInputError("FORCE middle state left the physical domain")
    return 0.5 * (rusanov(model, UL, UR, A) + model._flux_raw(Ustar))


def numerical_entropy_flux(model, UL, UR, A):
    """(F(UL)+F(UR))/2 - (A/2)(E(UR)-E(UL)), the Rusanov entropy flux."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    return 0.5 * (model.entropy_flux(UL) + model.entropy_flux(UR)) - 0.5 * np.asarray(
        A, dtype=float
    ) * (model.entropy(UR) - model.entropy(UL))


class FluxScheme:
    """A named two-point flux bound to one model.

    kind is one of "rusanov", "force", "godunov"; the Godunov kind is only
    valid for the isothermal model.
    """

    KINDS = ("rusanov", "force", "godunov")

    def __init__(self, kind: str, model):
        kind = kind.lower()
        if kind not in self.KINDS:
            raise ValueError(f"unknown flux kind {kind!r}")
        if kind == "godunov" and model.kind != "isothermal":
            raise ValueError("the Godunov flux is only available for isothermal flow")
        self.kind = kind
        self.model = model

    def __repr__(self):
        return f"FluxScheme({self.kind!r}, {self.model!r})"

    @property
    def needs_speed(self):
        return self.kind != "godunov"

    def __call__(self, UL, UR, A=None):
        if self.kind == "rusanov":
            return rusanov(self.model, UL, UR, A)
        if self.kind == "force":
            return force(self.model, UL, UR, A)
        return godunov_flux(self.model.c, UL, UR)


def make_scheme(kind: str, model) -> FluxScheme:
    return FluxScheme(kind, model)
