import json
import shutil
import subprocess

import pytest

SCENARIOS = [f"test{i}" for i in range(1, 13)]

# reduced resolutions keep the fixture cheap; the schemas are unchanged
CELL_OVERRIDES = {
    "test4": 200,
    "test6": 100,
    "test7": 100,
    "test8": 100,
    "test9": 100,
    "test10": 100,
}


def run_cli(*args):
    return subprocess.run(["coupled-fv", *args], capture_output=True, text=True)


@pytest.fixture(scope="session")
def primary_outputs(tmp_path_factory):
    """Real output files of every builtin scenario, via the solver CLI."""
    if shutil.which("coupled-fv") is None:
        pytest.skip("coupled-fv CLI not installed")
    out = tmp_path_factory.mktemp("primary")
    for name in SCENARIOS:
        args = ["run", "--scenario", name, "--out", str(out)]
        if name in CELL_OVERRIDES:
            args += ["--cells", str(CELL_OVERRIDES[name])]
        res = run_cli(*args)
        assert res.returncode == 0, f"{name}: {res.stderr}"
    res = run_cli("sweep", "--scenario", "test1", "--cells", "50,100", "--out", str(out))
    assert res.returncode == 0, res.stderr
    res = run_cli("sweep", "--scenario", "test11", "--cells", "50,100", "--out", str(out))
    assert res.returncode == 0, res.stderr
    res = run_cli("roots", "--rho", "5", "--q", "2.5", "--num", "25", "--out", str(out))
    assert res.returncode == 0, res.stderr
    return out


@pytest.fixture
def synthetic_dir(tmp_path):
    """Hand-built minimal files matching the documented schemas."""
    profile = tmp_path / "mini_profile.csv"
    profile.write_text(
        "x,rho,q,u\n"
        "-0.75,1,0.5,0.5\n-0.25,1.2,0.5,0.41666666666666669\n"
        "0.25,0.8,0.5,0.625\n0.75,0.8,0.5,0.625\n"
    )
    errors = tmp_path / "mini_errors.json"
    errors.write_text(json.dumps({
        "scenario": "mini",
        "exact_traces": {"rho_minus": 1.2, "w_minus": 0.4, "rho_plus": 0.8,
                         "w_plus": 0.6},
        "errors": {"rho_minus": 0.01, "w_minus": 0.001, "rho_plus": 0.005,
                   "w_plus": 0.002},
    }))
    roots = tmp_path / "mini_roots.json"
    roots.write_text(json.dumps({
        "rho": 5.0, "q": 2.5, "c": 1.0, "A": 1.5,
        "table": [
            {"lam": 0.01, "interface_q": 2.49, "roots": [-4.3, 0.01, 4.3]},
            {"lam": 10.0, "interface_q": 0.57, "roots": [3.9]},
        ],
    }))
    sweep = tmp_path / "mini_sweep.json"
    sweep.write_text(json.dumps({
        "scenario": "mini", "flux": "rusanov",
        "table": [
            {"cells": 50, "dx": 0.02, "l1_self_error": 4e-3},
            {"cells": 100, "dx": 0.01, "l1_self_error": 2.1e-3},
            {"cells": 200, "dx": 0.005},
        ],
    }))
    return tmp_path
