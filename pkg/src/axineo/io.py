"""
CSV and JSON serialization.

Floats are written with ``repr`` so every file round-trips exactly; field CSVs
have columns ``r, z, v1, v2`` with one row per node, row-major in ``(z, r)``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .grid import MeridianGrid
from .kinematics import DeformationField
from .solve import HISTORY_COLUMNS, SolveHistory

FIELD_COLUMNS = ("r", "z", "v1", "v2")


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return "" if x is None else str(x)


def write_table_csv(path, rows, columns) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
    return path


def write_history_csv(path, history: SolveHistory) -> Path:
    rows = [dict(zip(HISTORY_COLUMNS, row)) for row in history.rows()]
    return write_table_csv(path, rows, HISTORY_COLUMNS)


def read_history_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(HISTORY_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"history CSV lacks columns {sorted(missing)}")
        return [{k: (int(v) if k == "iter" else float(v)) for k, v in row.items() if k in HISTORY_COLUMNS}
                for row in reader]


def write_field_csv(path, grid: MeridianGrid, field: DeformationField) -> Path:
    rows = ({"r": p[0], "z": p[1], "v1": a, "v2": b} for p, a, b in zip(grid.nodes, field.v1, field.v2))
    return write_table_csv(path, rows, FIELD_COLUMNS)


def read_field_csv(path, grid: MeridianGrid, tol: float = 1e-9) -> DeformationField:
    """Load a field CSV and check its node coordinates against ``grid``."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape != (grid.n_nodes, 4):
        raise ValueError(f"field CSV has shape {data.shape}, expected ({grid.n_nodes}, 4)")
    scale = max(1.0, float(np.abs(grid.nodes).max()))
    if np.abs(data[:, :2] - grid.nodes).max() > tol * scale:
        raise ValueError("field CSV node coordinates do not match the configured grid")
    return DeformationField(data[:, 2], data[:, 3])


def _clean(obj):
    """JSON-ready copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
    return path
