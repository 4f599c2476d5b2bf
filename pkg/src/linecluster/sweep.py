"""Grid sweeps over (n, sigma, t) cells with per-trial derived seeds.

Each (cell, trial) pair gets its own seed derived from the master seed via
``SeedSequence(entropy=seed, spawn_key=(cell_index, trial))``, so results
are independent of execution order and a rerun with the same config file
reproduces every row byte-for-byte (the ``runtime_ms`` column excepted).

The per-trial pipeline depends on ``algorithm``:
  * ``spectral``: sample, scan at the fixed cell threshold (also collecting
    the within/mixed acceptance rates), embed, k-means;
  * ``autocluster``: sample, pick the threshold from sampled triples, then
    cluster the untouched points (the t column reports the selected t*);
  * ``oracle``: classify with the exact component densities (t, p_hat and
    q_hat are not applicable and render as nan).

Line-parameter errors are computed from the swap-aligned labels against the
true segments; a degenerate cluster (fewer than 2 points) renders as nan.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ClusterTooSmallError, LineClusterError
from .hypergraph import hyperedge_probabilities, scan
from .metrics import align_swap, report
from .mle import mle_recover
from .model import ModelParams, sample_glmm, standard_cross
from .recovery import angle_error, center_error, recover_lines
from .spectral import cluster_from_similarity
from .threshold import autocluster

_ALGORITHMS = ("spectral", "autocluster", "oracle")


@dataclass(frozen=True)
class SweepConfig:
    """Declarative description of one sweep grid."""

    n_points: tuple[int, ...]
    sigma: tuple[float, ...]
    t: tuple[float, ...] | str  # explicit thresholds, or "auto"
    alpha: float = math.pi / 2.0
    ell: float = 2.0
    trials: int = 1
    seed: int = 0
    algorithm: str = "spectral"
    m: int = 30  # sampled triples for the auto threshold
    theta: float = 0.25  # order-statistic quantile for the auto threshold

    def __post_init__(self) -> None:
        if self.algorithm not in _ALGORITHMS:
            raise LineClusterError(
                f"algorithm must be one of {_ALGORITHMS}, got {self.algorithm!r}"
            )
        if not self.n_points or any(int(n) < 3 for n in self.n_points):
            raise LineClusterError("n_points must be a non-empty list of integers >= 3")
        if not self.sigma or any(not (s >= 0.0) for s in self.sigma):
            raise LineClusterError("sigma must be a non-empty list of values >= 0")
        if int(self.trials) < 1:
            raise LineClusterError(f"trials must be >= 1, got {self.trials}")
        if isinstance(self.t, str):
            if self.t != "auto":
                raise LineClusterError(f"t must be a list of thresholds or 'auto', got {self.t!r}")
            if self.algorithm == "spectral":
                raise LineClusterError("t='auto' requires algorithm 'autocluster' or 'oracle'")
        else:
            if self.algorithm != "spectral":
                raise LineClusterError(
                    f"algorithm {self.algorithm!r} selects its own threshold; set t to 'auto'"
                )
            if not self.t or any(not (v > 0.0) for v in self.t):
                raise LineClusterError("spectral sweeps need a non-empty list of thresholds > 0")
        # The grid is a set of cells: enumerate it in sorted order so the CSV
        # comes out sorted by (n, sigma, t, trial) and cell indices (which
        # seed the trials) do not depend on how the lists were typed in.
        object.__setattr__(self, "n_points", tuple(sorted(int(n) for n in self.n_points)))
        object.__setattr__(self, "sigma", tuple(sorted(float(s) for s in self.sigma)))
        if not isinstance(self.t, str):
            object.__setattr__(self, "t", tuple(sorted(float(v) for v in self.t)))

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        try:
            payload = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise LineClusterError(f"{path}: invalid JSON ({exc})") from exc
        known = {
            "n_points", "sigma", "t", "alpha", "ell", "trials", "seed",
            "algorithm", "m", "theta",
        }
        unknown = set(payload) - known
        if unknown:
            raise LineClusterError(f"{path}: unknown config keys {sorted(unknown)}")
        kwargs = dict(payload)
        for key in ("n_points", "sigma"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        if "t" in kwargs and not isinstance(kwargs["t"], str):
            kwargs["t"] = tuple(kwargs["t"])
        missing = {"n_points", "sigma", "t"} - set(kwargs)
        if missing:
            raise LineClusterError(f"{path}: missing config keys {sorted(missing)}")
        return cls(**kwargs)


@dataclass(frozen=True)
class SweepRow:
    """One (cell, trial) result; column order pinned by io.SWEEP_COLUMNS."""

    n: int
    sigma: float
    t: float
    trial: int
    seed: int
    ham_star: int
    rate: float
    exact: bool
    runtime_ms: float
    p_hat: float
    q_hat: float
    sin_angle_1: float
    sin_angle_2: float
    center_err_1: float
    center_err_2: float
    error: str = ""


def _line_errors(points, labels_hat, truth_labels, seg1, seg2) -> tuple[float, float, float, float]:
    aligned = align_swap(labels_hat, truth_labels)
    try:
        est1, est2 = recover_lines(points, aligned)
    except ClusterTooSmallError:
        return math.nan, math.nan, math.nan, math.nan
    return (
        angle_error(est1, seg1),
        angle_error(est2, seg2),
        center_error(est1, seg1.center),
        center_error(est2, seg2.center),
    )


def _run_trial(config: SweepConfig, n: int, sig: float, t_cell: float, trial: int, run_seed: int) -> SweepRow:
    seg1, seg2 = standard_cross(config.alpha, 0.5 * config.ell)
    params = ModelParams(seg1=seg1, seg2=seg2, sigma=sig, n_points=n, seed=run_seed)
    ds = sample_glmm(params)
    t_used = math.nan
    p_hat = math.nan
    q_hat = math.nan
    start = time.perf_counter()
    if config.algorithm == "spectral":
        sim, stats = scan(ds.points, t_cell, ds.labels)
        res = cluster_from_similarity(sim, run_seed)
        labels_hat = res.labels
        t_used = t_cell
        p_hat, q_hat = stats.p_hat, stats.q_hat
    elif config.algorithm == "autocluster":
        res = autocluster(ds.points, config.m, config.theta, run_seed)
        labels_hat = res.labels
        t_used = res.choice.t_star
        if t_used > 0.0:
            stats = hyperedge_probabilities(ds.points, ds.labels, t_used)
            p_hat, q_hat = stats.p_hat, stats.q_hat
    else:  # oracle
        labels_hat = mle_recover(ds).labels
    runtime_ms = (time.perf_counter() - start) * 1000.0

    rep = report(labels_hat, ds.labels)
    sin1, sin2, cen1, cen2 = _line_errors(ds.points, labels_hat, ds.labels, seg1, seg2)
    return SweepRow(
        n=n,
        sigma=sig,
        t=t_used,
        trial=trial,
        seed=run_seed,
        ham_star=rep.ham_star,
        rate=rep.rate,
        exact=rep.exact,
        runtime_ms=runtime_ms,
        p_hat=p_hat,
        q_hat=q_hat,
        sin_angle_1=sin1,
        sin_angle_2=sin2,
        center_err_1=cen1,
        center_err_2=cen2,
    )


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Run every (n, sigma, t) cell for the configured number of trials.

    A trial that raises is recorded as a row with nan metrics and the message
    in the ``error`` column; the sweep continues with the remaining trials.
    """
    t_values: tuple[float, ...]
    if isinstance(config.t, str):
        t_values = (math.nan,)
    else:
        t_values = tuple(config.t)
    cells = [
        (n, sig, t) for n in config.n_points for sig in config.sigma for t in t_values
    ]
    rows: list[SweepRow] = []
    for cell_idx, (n, sig, t_cell) in enumerate(cells):
        for trial in range(int(config.trials)):
            ss = np.random.SeedSequence(entropy=int(config.seed), spawn_key=(cell_idx, trial))
            run_seed = int(ss.generate_state(1, np.uint64)[0])
            try:
                rows.append(_run_trial(config, int(n), float(sig), float(t_cell), trial, run_seed))
            except Exception as exc:  # noqa: BLE001 - a bad cell must not kill the sweep
                rows.append(
                    SweepRow(
                        n=int(n), sigma=float(sig), t=float(t_cell), trial=trial,
                        seed=run_seed, ham_star=math.nan, rate=math.nan, exact=False,
                        runtime_ms=math.nan, p_hat=math.nan, q_hat=math.nan,
                        sin_angle_1=math.nan, sin_angle_2=math.nan,
                        center_err_1=math.nan, center_err_2=math.nan,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return rows
