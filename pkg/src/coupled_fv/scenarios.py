"""Scenario catalog, configuration files, and run assembly.

The twelve builtin scenarios are the published test problems this solver
reproduces: five isothermal obstacle Riemann problems, three heated-obstacle
runs of the gamma-gas model, two pressure-law couplings, and two duct
cross-section jumps.  Configurations serialize to JSON with initial states
in primitive variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .coupling import coupling_from_dict
from .exceptions import ConfigError
from .fluxes import FluxScheme
from .models import model_from_dict
from .simulator import GridState, Trajectory, run
from .trace_solver import DEFAULT_OPTIONS, SolverOptions

__all__ = ["ScenarioConfig", "builtin_scenario", "builtin_names", "initial_grid",
           "run_scenario", "with_overrides"]

BUILTIN_NAMES = tuple(f"test{i}" for i in range(1, 13))


@dataclass
class ScenarioConfig:
    """Complete description of one run."""

    name: str
    model_left: dict
    model_right: dict
    coupling: dict
    left: dict  # primitive initial state on x < 0
    right: dict  # primitive initial state on x > 0
    domain: tuple[float, float]
    cells: int
    t_final: float
    courant: float = 0.95
    flux: str = "rusanov"
    output_dir: str | None = None

    def __post_init__(self):
        x_min, x_max = self.domain
        if not (x_min < 0.0 < x_max):
            raise ConfigError(f"domain {self.domain} must contain x=0 strictly inside")
        if self.cells < 4:
            raise ConfigError("at least 4 cells are required")
        if self.flux not in FluxScheme.KINDS:
            raise ConfigError(f"unknown flux {self.flux!r}")
        dx = (x_max - x_min) / self.cells
        n_left = round(-x_min / dx)
        if abs(x_min + n_left * dx) > 1e-9 * (x_max - x_min) or not (0 < n_left < self.cells):
            raise ConfigError(
                "the interface x=0 must fall on a cell boundary; adjust cells or domain"
            )

    # -- construction helpers ------------------------------------------------

    def models(self):
        return model_from_dict(self.model_left), model_from_dict(self.model_right)

    def coupling_condition(self):
        mL, mR = self.models()
        return coupling_from_dict(self.coupling, mL, mR)

    def schemes(self):
        mL, mR = self.models()
        try:
            return FluxScheme(self.flux, mL), FluxScheme(self.flux, mR)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def initial_states(self):
        mL, mR = self.models()
        return _primitive_to_state(mL, self.left), _primitive_to_state(mR, self.right)

    @property
    def dx(self):
        return (self.domain[1] - self.domain[0]) / self.cells

    # -- serialization --------------------------------------------------------

    def to_dict(self):
        return {
            "name": self.name,
            "model_left": self.model_left,
            "model_right": self.model_right,
            "coupling": self.coupling,
            "left": self.left,
            "right": self.right,
            "domain": list(self.domain),
            "cells": self.cells,
            "t_final": self.t_final,
            "courant": self.courant,
            "flux": self.flux,
        }

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["domain"] = tuple(d["domain"])
        d.pop("output_dir", None)
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _primitive_to_state(model, prim: dict) -> np.ndarray:
    if model.kind == "isothermal":
        return model.from_primitives(prim["rho"], prim["u"])
    if model.kind == "ideal_gas":
        return model.from_primitives(prim["rho"], prim["u"], prim["p"])
    return model.from_primitives(prim["rho"], prim["w"])


def builtin_names():
    return list(BUILTIN_NAMES)


def builtin_scenario(name: str, coupling_variant: str | None = None) -> ScenarioConfig:
    """One of the twelve builtin scenarios.

    coupling_variant selects "flux" or "state" for test9/test10 (default
    "flux"); other scenarios ignore it.
    """
    if name not in BUILTIN_NAMES:
        raise ConfigError(
            f"unknown scenario {name!r}; builtin scenarios: {', '.join(BUILTIN_NAMES)}"
        )
    iso = {"kind": "isothermal", "c": 1.0}

    def particle(lam, rho_l, q_l, rho_r, q_r, cells=200, t_final=0.1):
        return ScenarioConfig(
            name=name,
            model_left=iso, model_right=iso,
            coupling={"kind": "particle", "lam": lam, "c": 1.0},
            left={"rho": rho_l, "u": q_l / rho_l},
            right={"rho": rho_r, "u": q_r / rho_r},
            domain=(-0.5, 0.5), cells=cells, t_final=t_final,
        )

    if name == "test1":
        return particle(1.0, 3.0, 1.0, 3.0, 1.0)
    if name == "test2":
        return particle(0.5, 1.0, 0.0, 20.0, 0.0)
    if name == "test3":
        return particle(1.0, 1.0, 3.0, 1.0, 3.0, t_final=0.08)
    if name == "test4":
        return particle(10.0, 1.0, 3.0, 1.0, 3.0, cells=800, t_final=0.08)
    if name == "test5":
        return particle(10.0, 2.5, 3.0, 2.5, 3.0, t_final=0.08)

    if name in ("test6", "test7", "test8"):
        lam, mu = {"test6": (1.0, 0.0), "test7": (0.0, 0.5), "test8": (1.0, 0.5)}[name]
        gas = {"kind": "ideal_gas", "gamma": 1.5, "rho0": 1.0}
        state = {"rho": 4.0, "u": 1.0, "p": 4.0}
        return ScenarioConfig(
            name=name,
            model_left=gas, model_right=gas,
            coupling={
                "kind": "heat_exchange", "lam": lam, "mu": mu,
                "s_p": 2.0, "rho0": 1.0, "gamma": 1.5,
            },
            left=dict(state), right=dict(state),
            domain=(-0.1, 0.1), cells=500, t_final=0.03,
        )

    if name in ("test9", "test10"):
        variant = coupling_variant or "flux"
        if variant not in ("flux", "state"):
            raise ConfigError(f"coupling variant must be 'flux' or 'state', got {variant!r}")
        kind = "flux_coupling" if variant == "flux" else "state_coupling"
        left = {"rho": 1.6, "u": 0.4, "p": 2.35}
        right = dict(left) if name == "test9" else {"rho": 1.4, "u": 0.4, "p": 1.9}
        return ScenarioConfig(
            name=name,
            model_left={"kind": "ideal_gas", "gamma": 1.4, "rho0": 1.0},
            model_right={"kind": "ideal_gas", "gamma": 1.28, "rho0": 1.0},
            coupling={"kind": kind, "gamma_left": 1.4, "gamma_right": 1.28},
            left=left, right=right,
            domain=(-0.5, 0.5), cells=200, t_final=0.12, flux="force",
        )

    if name in ("test11", "test12"):
        if name == "test11":
            a_l, a_r = 0.3, 0.4
            left = {"rho": 0.206052848877390, "w": -0.003218270138816}
            right = {"rho": 0.099, "w": -0.015876669673295}
            t_final = 1.0
        else:
            a_l, a_r = 1.0, 100.0
            left = {"rho": 0.988056834959612, "w": 0.125759712385390}
            right = {"rho": 1.01, "w": 0.018403108075689}
            t_final = 0.15
        return ScenarioConfig(
            name=name,
            model_left={"kind": "nozzle", "alpha": a_l, "exponent": 3.0},
            model_right={"kind": "nozzle", "alpha": a_r, "exponent": 3.0},
            coupling={
                "kind": "nozzle", "alpha_left": a_l, "alpha_right": a_r,
                "exponent": 3.0,
            },
            left=left, right=right,
            domain=(-0.5, 0.5), cells=100, t_final=t_final,
        )
    raise AssertionError("unreachable")


def initial_grid(cfg: ScenarioConfig) -> GridState:
    x_min, x_max = cfg.domain
    dx = cfg.dx
    n_left = round(-x_min / dx)
    UL, UR = cfg.initial_states()
    U = np.empty((cfg.cells, UL.shape[-1]))
    U[:n_left] = UL
    U[n_left:] = UR
    return GridState(U=U, dx=dx, x_left=x_min, n_left=n_left)


def run_scenario(cfg: ScenarioConfig, options: SolverOptions = DEFAULT_OPTIONS,
                 collect_entropy: bool = False) -> Trajectory:
    """Build everything from the config and advance to the final time."""
    model_L, model_R = cfg.models()
    scheme_L, scheme_R = cfg.schemes()
    coupling = coupling_from_dict(cfg.coupling, model_L, model_R)
    grid = initial_grid(cfg)
    return run(
        grid, model_L, model_R, scheme_L, scheme_R, coupling,
        t_final=cfg.t_final, courant=cfg.courant, options=options,
        collect_entropy=collect_entropy,
    )


def with_overrides(cfg: ScenarioConfig, cells=None, flux=None, courant=None) -> ScenarioConfig:
    """Copy with CLI-style overrides applied."""
    changes = {}
    if cells is not None:
        changes["cells"] = int(cells)
    if flux is not None:
        changes["flux"] = flux
    if courant is not None:
        changes["courant"] = float(courant)
    return replace(cfg, **changes) if changes else cfg
