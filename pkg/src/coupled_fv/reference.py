"""Reference solutions and error measures.

Two kinds of references exist:

* tabulated exact interface traces with published per-resolution error
  tables (test11/test12, where the exact solution is known);
* self-consistency references for the Riemann-problem scenarios: take the
  converged numeric traces, solve the exact side Riemann problems between
  each initial state and its trace, and sample the fans.  This checks that
  the one-sided solutions have only outgoing waves and gives a profile to
  compare against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError
from .riemann import solve_riemann, solve_riemann_ideal_gas
from .scenarios import ScenarioConfig, initial_grid
from .simulator import Trajectory

__all__ = [
    "ReferenceData",
    "EXACT_TRACES",
    "ERROR_TABLES",
    "reference_solution",
    "trace_error",
    "reference_profile",
    "structure_check",
    "l1_distance",
    "total_variation",
    "self_convergence",
]

# Exact interface traces (rho-, w-, rho+, w+) for the duct scenarios.
EXACT_TRACES = {
    "test11": {
        "rho_minus": 0.1440929013128,
        "w_minus": 0.10409950707725,
        "rho_plus": 0.15,
        "w_plus": 0.075,
    },
    "test12": {
        "rho_minus": 0.9980372070299,
        "w_minus": 0.108472909864928,
        "rho_plus": 1.0,
        "w_plus": 0.0010826,
    },
}

# Published trace errors per flux and resolution, same component order.
ERROR_TABLES = {
    "test11": {
        ("rusanov", 1e-2): (6.22e-3, 1.36e-4, 3.09e-4, 6.931e-5),
        ("rusanov", 1e-3): (8.83e-6, 8.26e-5, 1.86e-5, 5.48e-5),
        ("force", 1e-2): (1.49e-4, 1.38e-4, 1.54e-4, 1.15e-4),
        ("force", 1e-3): (4.54e-6, 4.59e-5, 9.99e-6, 3.04e-5),
    },
    "test12": {
        ("rusanov", 1e-2): (4.96e-7, 2.27e-5, 2.45e-6, 2.91e-7),
        ("rusanov", 1e-3): (6.35e-7, 6.3e-7, 6.63e-7, 7.57e-9),
        ("force", 1e-2): (1.68e-6, 1.63e-7, 1.69e-6, 3.35e-8),
        ("force", 1e-3): (4.82e-7, 3.13e-8, 4.83e-7, 1.22e-9),
    },
}

_COMPONENTS = ("rho_minus", "w_minus", "rho_plus", "w_plus")


@dataclass
class ReferenceData:
    """Exact traces (when known) plus expected numeric errors."""

    source: str  # "tabulated-exact" or "self-consistency"
    exact_traces: dict | None = None
    error_table: dict | None = None


def reference_solution(cfg: ScenarioConfig) -> ReferenceData:
    if cfg.name in EXACT_TRACES:
        table = {
            f"{flux}@dx={dx:g}": dict(zip(_COMPONENTS, errs))
            for (flux, dx), errs in ERROR_TABLES[cfg.name].items()
        }
        return ReferenceData(
            source="tabulated-exact",
            exact_traces=dict(EXACT_TRACES[cfg.name]),
            error_table=table,
        )
    return ReferenceData(source="self-consistency")


def trace_error(cfg: ScenarioConfig, traj: Trajectory) -> dict:
    """Absolute trace errors of the cells hugging the interface.

    Only defined for scenarios with tabulated exact traces; values are
    |numeric - exact| for (rho-, w-, rho+, w+) read from the final-time
    states of the cells adjacent to x = 0.
    """
    if cfg.name not in EXACT_TRACES:
        raise ConfigError(f"no exact traces available for {cfg.name!r}")
    exact = EXACT_TRACES[cfg.name]
    model_L, model_R = cfg.models()
    grid = traj.grid
    U0 = grid.U[grid.n_left - 1]
    U1 = grid.U[grid.n_left]
    rho_m = float(model_L.density(U0))
    w_m = float(model_L.velocity(U0))
    rho_p = float(model_R.density(U1))
    w_p = float(model_R.velocity(U1))
    return {
        "rho_minus": abs(rho_m - exact["rho_minus"]),
        "w_minus": abs(w_m - exact["w_minus"]),
        "rho_plus": abs(rho_p - exact["rho_plus"]),
        "w_plus": abs(w_p - exact["w_plus"]),
    }


def _side_fans(cfg: ScenarioConfig, traj: Trajectory):
    """Exact Riemann fans between each initial state and its final trace."""
    model_L, model_R = cfg.models()
    UL, UR = cfg.initial_states()
    tr = traj.final_traces
    if model_L.kind == "isothermal":
        fan_l = solve_riemann(model_L.c, UL, tr.Uminus)
        fan_r = solve_riemann(model_R.c, tr.Uplus, UR)

        def sample_l(xi):
            return fan_l.sample(xi)

        def sample_r(xi):
            return fan_r.sample(xi)

    elif model_L.kind == "ideal_gas":
        pL = model_L.primitives(UL)
        pm = model_L.primitives(tr.Uminus)
        pp = model_R.primitives(tr.Uplus)
        pR = model_R.primitives(UR)
        fan_l = solve_riemann_ideal_gas(
            model_L.gamma,
            (float(pL["rho"]), float(pL["u"]), float(pL["p"])),
            (float(pm["rho"]), float(pm["u"]), float(pm["p"])),
        )
        fan_r = solve_riemann_ideal_gas(
            model_R.gamma,
            (float(pp["rho"]), float(pp["u"]), float(pp["p"])),
            (float(pR["rho"]), float(pR["u"]), float(pR["p"])),
        )
        sample_l = fan_l.sample
        sample_r = fan_r.sample
    else:
        raise ConfigError(f"no exact side fans for model kind {cfg.models()[0].kind!r}")
    return sample_l, sample_r


def reference_profile(cfg: ScenarioConfig, traj: Trajectory) -> np.ndarray:
    """Self-consistency reference sampled on the scenario grid at t_final.

    x < 0 carries the fan between the left initial state and U-, x > 0 the
    fan between U+ and the right initial state; see the structure conditions
    the exact coupled solution satisfies.
    """
    sample_l, sample_r = _side_fans(cfg, traj)
    grid = initial_grid(cfg)
    xs = grid.centers()
    T = cfg.t_final
    out = np.empty_like(grid.U)
    for j, x in enumerate(xs):
        out[j] = sample_l(x / T) if x < 0.0 else sample_r(x / T)
    return out


def structure_check(cfg: ScenarioConfig, traj: Trajectory) -> float:
    """Max relative mismatch between the traces and their side-fan limits.

    Small values confirm that the one-sided Riemann solutions only carry
    outgoing waves, i.e. the numeric traces respect the exact structure.
    """
    sample_l, sample_r = _side_fans(cfg, traj)
    tr = traj.final_traces
    lim_l = sample_l(-1e-12)
    lim_r = sample_r(+1e-12)
    err_l = np.max(np.abs(lim_l - tr.Uminus) / np.maximum(np.abs(tr.Uminus), 1.0))
    err_r = np.max(np.abs(lim_r - tr.Uplus) / np.maximum(np.abs(tr.Uplus), 1.0))
    return float(max(err_l, err_r))


def l1_distance(dx: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Componentwise L1 distance of two cellwise profiles."""
    return dx * np.sum(np.abs(np.asarray(A) - np.asarray(B)), axis=0)


def total_variation(A: np.ndarray) -> np.ndarray:
    """Componentwise total variation of a cellwise profile."""
    A = np.asarray(A)
    return np.sum(np.abs(np.diff(A, axis=0)), axis=0)


def self_convergence(profiles: dict[int, np.ndarray], domain, exclude_radius=0.0,
                     component=0):
    """L1 self-convergence against the finest grid.

    profiles maps cell counts to (N, dim) arrays on nested uniform grids of
    the same domain.  Each coarse profile is compared with the finest one
    averaged onto the coarse cells; cells within exclude_radius of x=0 are
    skipped.  Returns (cells, errors, orders).
    """
    counts = sorted(profiles)
    finest = counts[-1]
    x_min, x_max = domain
    L = x_max - x_min
    errors = []
    for n in counts[:-1]:
        ratio = finest // n
        if ratio * n != finest:
            raise ConfigError("cell counts must nest into the finest one")
        fine = profiles[finest][..., component]
        coarse = profiles[n][..., component]
        fine_avg = fine.reshape(n, ratio).mean(axis=1)
        dx = L / n
        xs = x_min + (np.arange(n) + 0.5) * dx
        mask = np.abs(xs) >= exclude_radius
        errors.append(float(np.sum(np.abs(coarse[mask] - fine_avg[mask])) * dx))
    orders = [
        float(np.log2(errors[i] / errors[i + 1])) for i in range(len(errors) - 1)
    ]
    return counts[:-1], errors, orders
