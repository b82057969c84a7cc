"""Figure rendering from solver output files.

Three figure kinds:

* profile     -- cell profiles at the final time, one panel per variable,
                 with exact-trace overlays when an errors file is given;
* roots       -- trace-cubic root branches against the friction parameter,
                 plus the interface momentum decaying to zero;
* convergence -- log-log error against cell size from a sweep table, with
                 the fitted slope annotated.

Rendering is deterministic for fixed inputs (fixed figure geometry, no
randomness) and never writes to the input files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, profile_kind, read_json, read_profile

__all__ = ["render_profile", "render_roots", "render_convergence"]

_PANELS = {
    "isothermal": [("rho", "density"), ("u", "velocity")],
    "gas": [("rho", "density"), ("u", "velocity"), ("p", "pressure"), ("e", "internal energy")],
    "duct": [("rho", "density"), ("w", "velocity"), ("p", "pressure")],
}

_TRACE_KEYS = {"rho": ("rho_minus", "rho_plus"), "w": ("w_minus", "w_plus")}


def render_profile(profile_path, out_path, errors_path=None, title=None):
    columns, data = read_profile(profile_path)
    kind = profile_kind(columns)
    panels = _PANELS[kind]
    x = data[:, columns.index("x")]

    exact = None
    if errors_path is not None:
        payload = read_json(errors_path, required_keys=("exact_traces",))
        exact = payload["exact_traces"]

    n = len(panels)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(9.0, 3.0 * nrows), squeeze=False)
    span = 0.25 * (x[-1] - x[0])
    for ax, (col, label) in zip(axes.flat, panels):
        ax.plot(x, data[:, columns.index(col)], lw=1.2, color="tab:blue")
        ax.axvline(0.0, color="0.6", lw=0.6, ls=":")
        ax.set_xlabel("x")
        ax.set_ylabel(label)
        if exact is not None and col in _TRACE_KEYS:
            key_m, key_p = _TRACE_KEYS[col]
            ax.hlines(exact[key_m], -span, 0.0, color="k", ls="--", lw=1.0,
                      label="exact trace")
            ax.hlines(exact[key_p], 0.0, span, color="k", ls="--", lw=1.0)
            ax.legend(loc="best", fontsize=8)
    for ax in axes.flat[n:]:
        ax.set_visible(False)
    fig.suptitle(title or str(profile_path))
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def render_roots(roots_path, out_path, title=None):
    payload = read_json(roots_path, required_keys=("table",))
    table = payload["table"]
    if not table:
        raise SchemaError(f"{roots_path}: empty roots table")
    if not all({"lam", "roots", "interface_q"} <= set(row) for row in table):
        raise SchemaError(f"{roots_path}: rows must carry lam/roots/interface_q")
    lams = np.array([row["lam"] for row in table])
    counts = np.array([len(row["roots"]) for row in table])
    q = np.array([row["interface_q"] for row in table])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    for row in table:
        ax1.plot([row["lam"]] * len(row["roots"]), row["roots"], "o",
                 ms=2.5, color="tab:blue")
    ax1.set_xscale("log" if lams.min() > 0 else "linear")
    ax1.set_xlabel("friction parameter")
    ax1.set_ylabel("cubic roots r")
    ax1.set_title(f"root count {counts[0]} -> {counts[-1]}")

    ax2.plot(lams, q, lw=1.2, color="tab:red")
    ax2.set_xscale("log" if lams.min() > 0 else "linear")
    ax2.set_xlabel("friction parameter")
    ax2.set_ylabel("interface momentum")
    ax2.set_title("blocking limit q -> 0")
    fig.suptitle(title or str(roots_path))
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def _sweep_series(payload):
    """Error-vs-dx series from a sweep table (exact-trace or self errors)."""
    table = payload.get("table", [])
    if not table:
        raise SchemaError("sweep file has an empty table")
    if not all("dx" in row for row in table):
        raise SchemaError("sweep rows must carry dx")
    dx = np.array([row["dx"] for row in table])
    series = {}
    if "errors" in table[0]:
        for comp in table[0]["errors"]:
            series[comp] = np.array([row["errors"][comp] for row in table])
    rows_with_self = [row for row in table if "l1_self_error" in row]
    if rows_with_self:
        series["l1 self-error"] = np.array([row["l1_self_error"] for row in rows_with_self])
        dx_self = np.array([row["dx"] for row in rows_with_self])
        return dx, series, dx_self
    if not series:
        raise SchemaError("sweep table carries neither exact nor self errors")
    return dx, series, dx


def render_convergence(sweep_path, out_path, title=None):
    payload = read_json(sweep_path, required_keys=("table",))
    dx, series, dx_self = _sweep_series(payload)

    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    slopes = []
    for label, err in series.items():
        xs = dx_self if label == "l1 self-error" else dx
        keep = err > 0
        ax.loglog(xs[keep], err[keep], "o-", ms=4, lw=1.1, label=label)
        if np.count_nonzero(keep) >= 2:
            slope = np.polyfit(np.log(xs[keep]), np.log(err[keep]), 1)[0]
            slopes.append(slope)
    ax.set_xlabel("cell size")
    ax.set_ylabel("error")
    ax.legend(fontsize=8)
    if slopes:
        ax.set_title(f"mean observed order {np.mean(slopes):.2f}")
    fig.suptitle(title or payload.get("scenario", str(sweep_path)))
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
