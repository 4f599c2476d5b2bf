"""File formats for datasets, labels, similarity dumps, bounds, and sweeps.

All formats are plain text, written deterministically so a rerun with the
same seed is byte-identical:

  * dataset CSV: header ``x,y,z``; floats with 17 significant digits
    (lossless float64 round-trip), labels as integers; the ``z`` column may
    be absent on input (unlabeled data);
  * params JSON: keys ``alpha, half_length, sigma, n_points, seed``
    (the symmetric-cross geometry), sorted keys, 2-space indent;
  * labels CSV: header ``index,z_hat``;
  * similarity CSV: header ``i,j,count``, upper-triangle nonzero entries in
    row-major order;
  * bounds CSV: header ``bound_name,params,theory,mc_estimate,mc_se,pass``;
    Monte-Carlo columns are empty for bounds without a sampling validator;
  * sweep CSV: one row per (cell, trial) with the column order pinned in
    ``SWEEP_COLUMNS``; ``runtime_ms`` is the only column exempt from
    rerun determinism.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from .errors import LineClusterError
from .model import LabeledDataset, ModelParams, standard_cross

SCHEMA_VERSION = 1

SWEEP_COLUMNS = (
    "n",
    "sigma",
    "t",
    "trial",
    "seed",
    "ham_star",
    "rate",
    "exact",
    "runtime_ms",
    "p_hat",
    "q_hat",
    "sin_angle_1",
    "sin_angle_2",
    "center_err_1",
    "center_err_2",
    "error",
)


def fmt_float(v: float) -> str:
    """17-significant-digit decimal form (round-trips any float64)."""
    return f"{float(v):.17g}"


def write_points_csv(path, points, labels=None) -> None:
    pts = np.asarray(points, dtype=np.float64)
    lines = ["x,y,z" if labels is not None else "x,y"]
    if labels is not None:
        labs = np.asarray(labels)
        for (px, py), z in zip(pts, labs):
            lines.append(f"{fmt_float(px)},{fmt_float(py)},{int(z)}")
    else:
        for px, py in pts:
            lines.append(f"{fmt_float(px)},{fmt_float(py)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_points_csv(path) -> tuple[np.ndarray, np.ndarray | None]:
    """Read a dataset CSV; returns (points, labels or None)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise LineClusterError(f"{path}: empty dataset file")
        cols = [c.strip().lower() for c in header]
        if cols[:2] != ["x", "y"] or len(cols) > 3 or (len(cols) == 3 and cols[2] != "z"):
            raise LineClusterError(f"{path}: expected header 'x,y[,z]', got {','.join(header)}")
        has_z = len(cols) == 3
        xs: list[float] = []
        ys: list[float] = []
        zs: list[int] = []
        for row in reader:
            if not row:
                continue
            try:
                xs.append(float(row[0]))
                ys.append(float(row[1]))
                if has_z:
                    zs.append(int(row[2]))
            except (ValueError, IndexError) as exc:
                raise LineClusterError(f"{path}: malformed row {row!r}") from exc
    points = np.column_stack([xs, ys]) if xs else np.empty((0, 2))
    labels = np.asarray(zs, dtype=np.int8) if has_z else None
    return points, labels


def write_params_json(path, alpha: float, half_length: float, sigma: float, n_points: int, seed: int) -> None:
    payload = {
        "alpha": alpha,
        "half_length": half_length,
        "sigma": sigma,
        "n_points": int(n_points),
        "seed": int(seed),
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def read_params_json(path) -> ModelParams:
    """Reconstruct cross-geometry model parameters from a params JSON."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise LineClusterError(f"{path}: invalid JSON ({exc})") from exc
    try:
        seg1, seg2 = standard_cross(float(payload["alpha"]), float(payload["half_length"]))
        return ModelParams(
            seg1=seg1,
            seg2=seg2,
            sigma=float(payload["sigma"]),
            n_points=int(payload["n_points"]),
            seed=int(payload["seed"]),
        )
    except KeyError as exc:
        raise LineClusterError(f"{path}: missing key {exc} in params JSON") from exc


def dataset_from_files(points_path, params_path) -> LabeledDataset:
    points, labels = read_points_csv(points_path)
    params = read_params_json(params_path)
    if labels is None:
        raise LineClusterError(f"{points_path}: dataset has no z column")
    return LabeledDataset(points=points, labels=labels, params=params)


def write_labels_csv(path, labels) -> None:
    lines = ["index,z_hat"]
    for i, z in enumerate(np.asarray(labels)):
        lines.append(f"{i},{int(z)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_labels_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header] != ["index", "z_hat"]:
            raise LineClusterError(f"{path}: expected header 'index,z_hat'")
        pairs = [(int(row[0]), int(row[1])) for row in reader if row]
    labels = np.zeros(len(pairs), dtype=np.int8)
    for idx, z in pairs:
        if not 0 <= idx < len(pairs):
            raise LineClusterError(f"{path}: index {idx} out of range")
        labels[idx] = z
    return labels


def write_similarity_csv(path, counts) -> None:
    mat = np.asarray(counts)
    lines = ["i,j,count"]
    ii, jj = np.nonzero(np.triu(mat, 1))
    for i, j in zip(ii, jj):
        lines.append(f"{i},{j},{int(mat[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_bounds_csv(path, rows: list[dict]) -> None:
    lines = ["bound_name,params,theory,mc_estimate,mc_se,pass"]
    for row in rows:
        mc_est = fmt_float(row["mc_estimate"]) if row.get("mc_estimate") is not None else ""
        mc_se = fmt_float(row["mc_se"]) if row.get("mc_se") is not None else ""
        ok = "" if row.get("pass") is None else ("1" if row["pass"] else "0")
        lines.append(
            f"{row['bound_name']},{row['params']},{fmt_float(row['theory'])},{mc_est},{mc_se},{ok}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def sweep_row_to_strings(row) -> list[str]:
    values = dataclasses.asdict(row) if dataclasses.is_dataclass(row) else dict(row)
    out = []
    for col in SWEEP_COLUMNS:
        v = values[col]
        if col == "error":
            # Keep the bare comma-join format intact for arbitrary messages.
            out.append(str(v).replace(",", ";").replace("\n", " ") if v else "")
        elif col in ("n", "trial", "seed", "ham_star"):
            out.append("nan" if isinstance(v, float) and math.isnan(v) else str(int(v)))
        elif col == "exact":
            out.append("1" if v else "0")
        else:
            out.append(fmt_float(v) if v is not None and not (isinstance(v, float) and math.isnan(v)) else "nan")
    return out


def write_sweep_csv(path, rows) -> None:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join(sweep_row_to_strings(row)))
    Path(path).write_text("\n".join(lines) + "\n")


def to_jsonable(obj):
    """Recursively convert dataclasses/arrays/numpy scalars to JSON-safe values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj
