"""Readers for the solver's output files.

The file schemas are the solver CLI's documented interface: a profile CSV
with an x column followed by conserved and primitive variables, and JSON
files for traces, trace errors, resolution sweeps, and cubic-root tables.
"""

from __future__ import annotations

import csv
import json

import numpy as np

__all__ = ["SchemaError", "read_profile", "read_json", "profile_kind"]


class SchemaError(Exception):
    """An input file does not match the documented schema."""


def read_profile(path):
    """Profile CSV -> (column names, float array of shape (cells, n_cols))."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty profile file") from None
        if not header or header[0] != "x":
            raise SchemaError(f"{path}: profile header must start with 'x', got {header!r}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise SchemaError(f"{path}:{line_no}: expected {len(header)} columns")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise SchemaError(f"{path}:{line_no}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return header, np.asarray(rows)


def read_json(path, required_keys=()):
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    missing = [k for k in required_keys if k not in payload]
    if missing:
        raise SchemaError(f"{path}: missing keys {missing}")
    return payload


def profile_kind(columns) -> str:
    """Classify a profile by its header: duct, gas, or isothermal flow."""
    if "alpha_rho" in columns:
        return "duct"
    if "E" in columns:
        return "gas"
    if {"rho", "q", "u"} <= set(columns):
        return "isothermal"
    raise SchemaError(f"unrecognized profile columns {columns!r}")
