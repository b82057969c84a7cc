"""Command-line entry point.

Subcommands:
  run     advance one scenario and write profile/traces/ledger(/errors) files
  verify  run the acceptance checks registered for a scenario
  list    print the builtin scenario names
  sweep   run one scenario over several resolutions and emit an error table
  roots   emit the trace-cubic roots over a friction-parameter grid
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .exceptions import CoupledFVError
from .fluxes import select_A
from .models import IsothermalEuler
from .output import _atomic_write, default_output_dir, write_run_outputs
from .reference import EXACT_TRACES, trace_error
from .scenarios import (
    BUILTIN_NAMES,
    ScenarioConfig,
    builtin_scenario,
    run_scenario,
    with_overrides,
)
from .trace_solver import CubicProblem, interface_momentum, solve_cubic
from .verification import verify_scenario

__all__ = ["main"]


def _load_scenario(spec: str, germ: str | None) -> ScenarioConfig:
    if spec in BUILTIN_NAMES:
        return builtin_scenario(spec, coupling_variant=germ)
    if os.path.exists(spec):
        return ScenarioConfig.from_json(spec)
    raise CoupledFVError(
        f"{spec!r} is neither a builtin scenario nor a config file; "
        f"builtin names: {', '.join(BUILTIN_NAMES)}"
    )


def _cmd_run(args) -> int:
    cfg = _load_scenario(args.scenario, args.germ)
    cfg = with_overrides(cfg, cells=args.cells, flux=args.flux, courant=args.courant)
    out_dir = args.out or default_output_dir()
    try:
        traj = run_scenario(cfg)
    except CoupledFVError as exc:
        os.makedirs(out_dir, exist_ok=True)
        diag = os.path.join(out_dir, f"{cfg.name}_failure.json")
        _atomic_write(diag, json.dumps(
            {"scenario": cfg.name, "error": type(exc).__name__, "message": str(exc)},
            indent=1) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        print(f"diagnostics: {diag}", file=sys.stderr)
        return 1
    paths = write_run_outputs(out_dir, cfg, traj)
    for kind, path in sorted(paths.items()):
        print(f"{kind}: {path}")
    return 0


def _cmd_verify(args) -> int:
    results = verify_scenario(args.scenario)
    failed = 0
    for res in results:
        print(res)
        failed += 0 if res.passed else 1
    return 0 if failed == 0 else 1


def _cmd_list(_args) -> int:
    for name in BUILTIN_NAMES:
        print(name)
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_scenario(args.scenario, args.germ)
    if args.flux:
        cfg = with_overrides(cfg, flux=args.flux)
    cells_list = [int(v) for v in args.cells.split(",")]
    out_dir = args.out or default_output_dir()
    rows = []
    profiles = {}
    for cells in cells_list:
        variant = replace(cfg, cells=cells)
        traj = run_scenario(variant)
        row = {"cells": cells, "dx": variant.dx}
        if cfg.name in EXACT_TRACES:
            row["errors"] = trace_error(variant, traj)
        profiles[cells] = traj.grid.U
        rows.append(row)
    if cfg.name not in EXACT_TRACES and len(cells_list) >= 2:
        from .reference import self_convergence

        try:
            counts, errors, orders = self_convergence(profiles, cfg.domain)
            for row, err in zip(rows, errors):
                row["l1_self_error"] = err
            for row, order in zip(rows[1:], orders):
                row["observed_order"] = order
        except CoupledFVError:
            pass
    payload = {"scenario": cfg.name, "flux": cfg.flux, "table": rows}
    path = os.path.join(out_dir, f"{cfg.name}_sweep.json")
    os.makedirs(out_dir, exist_ok=True)
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    print(f"sweep: {path}")
    return 0


def _cmd_roots(args) -> int:
    lams = np.geomspace(args.lam_min, args.lam_max, args.num) if args.lam_min > 0 \
        else np.linspace(args.lam_min, args.lam_max, args.num)
    model = IsothermalEuler(c=args.c)
    U = np.array([args.rho, args.q])
    A = select_A(model, U, U)
    eta = float(model.momentum_flux(U))
    records = []
    for lam in lams:
        # root branches of the trace cubic at the requested momentum, plus
        # the lam-dependent interface momentum (which decays to zero as the
        # obstacle hardens into a wall)
        q_star = interface_momentum(args.q, args.q, eta, eta, A, float(lam))
        roots = solve_cubic(CubicProblem(args.rho, abs(args.q), args.c, float(lam)))
        sign = 1.0 if args.q >= 0 else -1.0
        records.append(
            {
                "lam": float(lam),
                "interface_q": q_star,
                "roots": [sign * r for r in roots],
            }
        )
    payload = {
        "rho": args.rho, "q": args.q, "c": args.c, "A": A, "table": records,
    }
    out_dir = args.out or default_output_dir()
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "roots.json")
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    print(f"roots: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupled-fv",
        description="1D finite-volume solver for interface-coupled conservation laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write its outputs")
    p_run.add_argument("--scenario", required=True, help="builtin name or config path")
    p_run.add_argument("--flux", choices=["rusanov", "force", "godunov"])
    p_run.add_argument("--cells", type=int)
    p_run.add_argument("--courant", type=float)
    p_run.add_argument("--germ", choices=["flux", "state"],
                       help="coupling variant for test9/test10")
    p_run.add_argument("--out", help="output directory (default $COUPLED_FV_OUT or ./out)")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run a scenario's acceptance checks")
    p_verify.add_argument("--scenario", required=True)
    p_verify.set_defaults(func=_cmd_verify)

    p_list = sub.add_parser("list", help="print the builtin scenario names")
    p_list.set_defaults(func=_cmd_list)

    p_sweep = sub.add_parser("sweep", help="convergence study over cell counts")
    p_sweep.add_argument("--scenario", required=True)
    p_sweep.add_argument("--cells", required=True, help="comma-separated cell counts")
    p_sweep.add_argument("--flux", choices=["rusanov", "force", "godunov"])
    p_sweep.add_argument("--germ", choices=["flux", "state"])
    p_sweep.add_argument("--out")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_roots = sub.add_parser("roots", help="trace-cubic roots over a lambda grid")
    p_roots.add_argument("--rho", type=float, default=5.0)
    p_roots.add_argument("--q", type=float, default=2.5)
    p_roots.add_argument("--c", type=float, default=1.0)
    p_roots.add_argument("--lam-min", type=float, default=0.01)
    p_roots.add_argument("--lam-max", type=float, default=100.0)
    p_roots.add_argument("--num", type=int, default=60)
    p_roots.add_argument("--out")
    p_roots.set_defaults(func=_cmd_roots)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CoupledFVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
