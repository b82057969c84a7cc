"""File emission: profile CSV, traces/ledger/errors JSON.

Floating point is written with 17 significant digits so runs are
byte-reproducible; files are written atomically (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile

from .reference import EXACT_TRACES, reference_solution, trace_error
from .scenarios import ScenarioConfig
from .simulator import Trajectory

__all__ = [
    "default_output_dir",
    "write_profile_csv",
    "write_traces_json",
    "write_ledger_json",
    "write_errors_json",
    "write_run_outputs",
]

ENV_OUTPUT_DIR = "COUPLED_FV_OUT"


def default_output_dir() -> str:
    return os.environ.get(ENV_OUTPUT_DIR, "out")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _atomic_write(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _profile_columns(model):
    if model.kind == "isothermal":
        return ["rho", "q"], ["u"]
    if model.kind == "ideal_gas":
        return ["rho", "q", "E"], ["u", "p", "e"]
    return ["alpha_rho", "alpha_rho_w"], ["rho", "w", "p"]


def _primitive_row(model, U):
    if model.kind == "isothermal":
        return [U[1] / U[0]]
    if model.kind == "ideal_gas":
        p = model.primitives(U)
        return [float(p["u"]), float(p["p"]), float(p["e"])]
    return [float(model.density(U)), float(model.velocity(U)), float(model.pressure(U))]


def write_profile_csv(path, cfg: ScenarioConfig, traj: Trajectory):
    model_L, model_R = cfg.models()
    cons, prim = _profile_columns(model_L)
    header = ["x"] + cons + prim
    lines = [",".join(header)]
    grid = traj.grid
    xs = grid.centers()
    for j in range(grid.n_cells):
        model = model_L if j < grid.n_left else model_R
        row = [xs[j], *grid.U[j], *_primitive_row(model, grid.U[j])]
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_traces_json(path, traj: Trajectory):
    records = []
    for t, tr in zip(traj.times, traj.trace_history):
        records.append(
            {
                "time": t,
                "U_minus": [float(v) for v in tr.Uminus],
                "U_plus": [float(v) for v in tr.Uplus],
                "branch": tr.branch,
                "root_index": tr.root_index,
                "residual_norm": tr.residual_norm,
                "A_used": tr.A_used,
                "entropy_check": tr.entropy_check,
            }
        )
    _atomic_write(path, json.dumps(records, indent=1) + "\n")


def write_ledger_json(path, cfg: ScenarioConfig, traj: Trajectory):
    coupling = cfg.coupling_condition()
    payload = {
        "scenario": cfg.name,
        "conserved_components": list(coupling.conserved_components),
        **traj.ledger.to_dict(),
        "steps": traj.steps,
        "fallback_steps": traj.fallback_steps,
    }
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")


def write_errors_json(path, cfg: ScenarioConfig, traj: Trajectory):
    ref = reference_solution(cfg)
    payload = {
        "scenario": cfg.name,
        "source": ref.source,
        "dx": cfg.dx,
        "flux": cfg.flux,
    }
    if cfg.name in EXACT_TRACES:
        payload["exact_traces"] = ref.exact_traces
        payload["errors"] = trace_error(cfg, traj)
        payload["published_errors"] = ref.error_table
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")


def write_run_outputs(out_dir, cfg: ScenarioConfig, traj: Trajectory) -> dict:
    """Emit every applicable output file; returns their paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "profile": os.path.join(out_dir, f"{cfg.name}_profile.csv"),
        "traces": os.path.join(out_dir, f"{cfg.name}_traces.json"),
        "ledger": os.path.join(out_dir, f"{cfg.name}_ledger.json"),
    }
    write_profile_csv(paths["profile"], cfg, traj)
    write_traces_json(paths["traces"], traj)
    write_ledger_json(paths["ledger"], cfg, traj)
    if cfg.name in EXACT_TRACES:
        paths["errors"] = os.path.join(out_dir, f"{cfg.name}_errors.json")
        write_errors_json(paths["errors"], cfg, traj)
    return paths
