"""Interior flux sweep: vectorized NumPy core with a pure-Python fallback.

The sweep is the hot loop of a run.  The NumPy path evaluates all interior
interfaces of one side in whole-array operations; the Python path loops over
interfaces calling the same scalar formulas, and doubles as a readable
reference.  Both produce bitwise-identical results; select with

    COUPLED_FV_KERNEL=python | numpy   (default: numpy)

See benchmarks/kernel_bench.py for a speed comparison.
"""

from __future__ import annotations

import os

import numpy as np

from .fluxes import force, numerical_entropy_flux, rusanov, select_A

__all__ = ["interior_fluxes", "interior_entropy_fluxes", "active_kernel"]


def _interior_fluxes_numpy(model, scheme_kind, U):
    UL = U[:-1]
    UR = U[1:]
    A = select_A(model, UL, UR)
    if scheme_kind == "force":
        g = force(model, UL, UR, A)
    else:
        g = rusanov(model, UL, UR, A)
    return g, A


def _interior_fluxes_python(model, scheme_kind, U):
    m = U.shape[0] - 1
    g = np.empty((m, model.dim))
    A = np.empty(m)
    for j in range(m):
        Aj = select_A(model, U[j], U[j + 1])
        if scheme_kind == "force":
            g[j] = force(model, U[j], U[j + 1], Aj)
        else:
            g[j] = rusanov(model, U[j], U[j + 1], Aj)
        A[j] = Aj
    return g, A


def _interior_entropy_numpy(model, U, A):
    return numerical_entropy_flux(model, U[:-1], U[1:], A)


def _interior_entropy_python(model, U, A):
    m = U.shape[0] - 1
    out = np.empty(m)
    for j in range(m):
        out[j] = numerical_entropy_flux(model, U[j], U[j + 1], float(A[j]))
    return out


_KERNEL = os.environ.get("COUPLED_FV_KERNEL", "numpy").lower()
if _KERNEL not in ("numpy", "python"):
    raise ValueError(f"COUPLED_FV_KERNEL must be 'numpy' or 'python', got {_KERNEL!r}")

if _KERNEL == "python":
    _fluxes_impl = _interior_fluxes_python
    _entropy_impl = _interior_entropy_python
else:
    _fluxes_impl = _interior_fluxes_numpy
    _entropy_impl = _interior_entropy_numpy


def active_kernel() -> str:
    """Name of the sweep implementation selected at import time."""
    return _KERNEL


def interior_fluxes(model, scheme_kind: str, U):
    """Fluxes and dissipation speeds for the N-1 interior interfaces of one
    side given its N cell states (N, dim)."""
    U = np.asarray(U, dtype=float)
    if U.shape[0] < 2:
        return np.empty((0, model.dim)), np.empty(0)
    return _fluxes_impl(model, scheme_kind, U)


def interior_entropy_fluxes(model, U, A):
    """Numerical entropy fluxes matching interior_fluxes for the same A."""
    U = np.asarray(U, dtype=float)
    if U.shape[0] < 2:
        return np.empty(0)
    return _entropy_impl(model, U, np.asarray(A, dtype=float))
