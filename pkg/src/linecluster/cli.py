"""Command-line interface.

Subcommands: gen, tls-score, cluster, autocluster, recover-lines, oracle,
bounds, sweep. Every command prints a JSON summary to stdout; ``--out DIR``
commands write their CSV artifacts under that directory (created if missing)
with fixed names, in the formats of ``linecluster.io``. Exit codes: 0 on
success, 1 on runtime errors (bad files, invalid values), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, bounds, io, metrics, montecarlo
from .errors import LineClusterError, OutOfValidityError
from .hypergraph import active_backend, scan
from .mle import mle_recover, perr_exact
from .model import LabeledDataset, ModelParams, sample_glmm, standard_cross
from .recovery import angle_error, center_error, recover_lines
from .spectral import cluster_from_similarity
from .sweep import SweepConfig, run_sweep
from .threshold import autocluster
from .tls import scatter, sigma_tls_sq


def _print_json(payload: dict) -> None:
    payload = {"schema_version": io.SCHEMA_VERSION, **payload}
    print(json.dumps(io.to_jsonable(payload), indent=2, sort_keys=True))


def _artifact(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _cmd_gen(args) -> int:
    seg1, seg2 = standard_cross(args.alpha, args.half_length)
    params = ModelParams(seg1=seg1, seg2=seg2, sigma=args.sigma, n_points=args.n, seed=args.seed)
    ds = sample_glmm(params)
    points_out = _artifact(args.out, "points.csv")
    params_out = _artifact(args.out, "params.json")
    io.write_points_csv(points_out, ds.points, ds.labels)
    io.write_params_json(params_out, args.alpha, args.half_length, args.sigma, args.n, args.seed)
    _print_json(
        {
            "command": "gen",
            "n": ds.n,
            "sigma": args.sigma,
            "alpha": args.alpha,
            "half_length": args.half_length,
            "seed": args.seed,
            "points_out": points_out,
            "params_out": params_out,
            "label_counts": {
                "1": int(np.count_nonzero(ds.labels == 1)),
                "2": int(np.count_nonzero(ds.labels == 2)),
            },
        }
    )
    return 0


def _parse_triple(text: str) -> np.ndarray:
    try:
        pts = [[float(v) for v in chunk.split(",")] for chunk in text.split(";")]
    except ValueError as exc:
        raise LineClusterError(f"could not parse --points {text!r}: {exc}") from exc
    arr = np.asarray(pts, dtype=np.float64)
    if arr.shape != (3, 2):
        raise LineClusterError(f"--points needs 'x1,y1;x2,y2;x3,y3', parsed shape {arr.shape}")
    return arr


def _read_triple_stdin() -> np.ndarray:
    rows = []
    for line in sys.stdin.read().splitlines():
        line = line.strip()
        if not line or line.lower().replace(" ", "") in ("x,y", "x,y,z"):
            continue
        parts = line.split(",")
        rows.append((float(parts[0]), float(parts[1])))
    arr = np.asarray(rows, dtype=np.float64)
    if arr.shape != (3, 2):
        raise LineClusterError(f"stdin must supply exactly three x,y rows, got {arr.shape[0]}")
    return arr


def _cmd_tls_score(args) -> int:
    triple = _parse_triple(args.points) if args.points else _read_triple_stdin()
    s = scatter(triple)
    score = sigma_tls_sq(triple)
    _print_json(
        {
            "command": "tls-score",
            "s_xx": s.s_xx,
            "s_xy": s.s_xy,
            "s_yy": s.s_yy,
            "sigma_tls_sq": score,
            "sigma_tls": math.sqrt(score),
        }
    )
    return 0


def _cmd_cluster(args) -> int:
    points, labels = io.read_points_csv(args.infile)
    sim, stats = scan(points, args.t, labels)
    res = cluster_from_similarity(sim, args.seed)
    payload = {
        "command": "cluster",
        "n": sim.n,
        "t": args.t,
        "seed": args.seed,
        "backend": active_backend(),
        "eigenvalues": list(res.embedding.eigenvalues) if res.embedding else None,
        "kmeans_inertia": res.kmeans_inertia,
        "degenerate": res.degenerate,
    }
    if labels is not None and stats is not None:
        rep = metrics.report(res.labels, labels)
        payload.update(
            {
                "ham_star": rep.ham_star,
                "rate": rep.rate,
                "exact": rep.exact,
                "p_hat": stats.p_hat,
                "q_hat": stats.q_hat,
            }
        )
    if args.out:
        labels_out = _artifact(args.out, "labels.csv")
        w_out = _artifact(args.out, "similarity.csv")
        io.write_labels_csv(labels_out, res.labels)
        io.write_similarity_csv(w_out, sim.counts)
        payload["labels_out"] = labels_out
        payload["w_out"] = w_out
    _print_json(payload)
    return 0


def _cmd_autocluster(args) -> int:
    points, labels = io.read_points_csv(args.infile)
    res = autocluster(points, args.m, args.theta, args.seed)
    payload = {
        "command": "autocluster",
        "n": int(points.shape[0]),
        "m": args.m,
        "theta": args.theta,
        "seed": args.seed,
        "t_star": res.choice.t_star,
        "k": res.choice.k,
        "clamped": res.choice.clamped,
        "touched_nodes": int(res.sample.touched_nodes.size),
        "rest": int(res.rest_indices.size),
        "degenerate": res.degenerate,
    }
    if labels is not None:
        rep_full = metrics.report(res.labels, labels)
        rest = res.rest_indices
        rep_rest = metrics.report(res.labels[rest], np.asarray(labels)[rest])
        payload["full"] = {"ham_star": rep_full.ham_star, "rate": rep_full.rate, "exact": rep_full.exact}
        payload["rest_only"] = {
            "ham_star": rep_rest.ham_star,
            "rate": rep_rest.rate,
            "exact": rep_rest.exact,
        }
    if args.out:
        labels_out = _artifact(args.out, "labels.csv")
        io.write_labels_csv(labels_out, res.labels)
        payload["labels_out"] = labels_out
    _print_json(payload)
    return 0


def _line_payload(est) -> dict:
    return {
        "center": list(est.center),
        "direction": list(est.direction),
        "cluster_size": est.cluster_size,
        "top_eigenvalue": est.top_eigenvalue,
        "bottom_eigenvalue": est.bottom_eigenvalue,
        "rank_deficient": est.rank_deficient,
    }


def _cmd_recover_lines(args) -> int:
    points, truth = io.read_points_csv(args.infile)
    if args.labels:
        labels_hat = io.read_labels_csv(args.labels)
    elif truth is not None:
        labels_hat = truth
    else:
        raise LineClusterError("need --labels, or a z column in the dataset CSV")
    if truth is not None:
        labels_hat = metrics.align_swap(labels_hat, truth)
    est1, est2 = recover_lines(points, labels_hat)
    payload = {
        "command": "recover-lines",
        "n": int(points.shape[0]),
        "line1": _line_payload(est1),
        "line2": _line_payload(est2),
    }
    if args.params:
        params = io.read_params_json(args.params)
        payload["errors"] = {
            "sin_angle_1": angle_error(est1, params.seg1),
            "sin_angle_2": angle_error(est2, params.seg2),
            "center_err_1": center_error(est1, params.seg1.center),
            "center_err_2": center_error(est2, params.seg2.center),
        }
    _print_json(payload)
    return 0


def _cmd_oracle(args) -> int:
    points, labels = io.read_points_csv(args.infile)
    params = io.read_params_json(args.params)
    if labels is None:
        ds = LabeledDataset(points=points, labels=np.ones(points.shape[0], dtype=np.int8), params=params)
    else:
        ds = LabeledDataset(points=points, labels=np.asarray(labels, dtype=np.int8), params=params)
    res = mle_recover(ds)
    # Recover the cross geometry from the segment pair for the error report.
    d1, d2 = params.seg1.direction, params.seg2.direction
    alpha = math.acos(max(-1.0, min(1.0, d1[0] * d2[0] + d1[1] * d2[1])))
    err = perr_exact(alpha, 2.0 * params.seg1.half_length, params.sigma)
    payload = {
        "command": "oracle",
        "n": int(points.shape[0]),
        "sigma": params.sigma,
        "perr": err.perr,
        "perr_asymptote": err.asymptote,
    }
    if labels is not None:
        rep = metrics.report(res.labels, labels)
        payload.update({"ham_star": rep.ham_star, "rate": rep.rate, "exact": rep.exact})
    if args.out:
        labels_out = _artifact(args.out, "labels.csv")
        io.write_labels_csv(labels_out, res.labels)
        payload["labels_out"] = labels_out
    _print_json(payload)
    return 0


def _bounds_rows(args) -> tuple[list[dict], list[str]]:
    rows: list[dict] = []
    skipped: list[str] = []
    t, sig, ell = args.t, args.sigma, args.ell
    geo_params = f"t={t:g};sigma={sig:g};ell={ell:g}"
    mc = args.mc
    n_mc = args.mc_samples

    within_mc = montecarlo.mc_within_miss(t, sig, ell, n_mc, args.seed) if mc else None
    try:
        theory = bounds.within_miss_upper(t, sig)
        row = {"bound_name": "within_miss_upper", "params": geo_params, "theory": theory}
        if within_mc is not None:
            row.update(
                mc_estimate=within_mc.estimate,
                mc_se=within_mc.se,
                **{"pass": within_mc.estimate <= theory + 3.0 * within_mc.se},
            )
        rows.append(row)
    except OutOfValidityError as exc:
        skipped.append(f"within_miss_upper: {exc}")

    rates = (
        montecarlo.mc_hyperedge_rates(t, sig, args.alpha, ell, n_mc, args.seed) if mc else None
    )
    try:
        theory = bounds.between_accept_lower(t, sig, ell)
        row = {"bound_name": "between_accept_lower", "params": geo_params, "theory": theory}
        if rates is not None:
            q = rates[1]
            row.update(
                mc_estimate=q.estimate,
                mc_se=q.se,
                **{"pass": q.estimate >= theory - 3.0 * q.se},
            )
        rows.append(row)
    except OutOfValidityError as exc:
        skipped.append(f"between_accept_lower: {exc}")
    try:
        theory = bounds.between_accept_upper(t, sig, ell)
        row = {"bound_name": "between_accept_upper", "params": geo_params, "theory": theory}
        if rates is not None:
            q = rates[1]
            row.update(mc_estimate=q.estimate, mc_se=q.se, **{"pass": q.estimate <= 2.0 * theory})
        rows.append(row)
    except OutOfValidityError as exc:
        skipped.append(f"between_accept_upper: {exc}")

    rows.append(
        {
            "bound_name": "disc_intersect_upper",
            "params": geo_params,
            "theory": bounds.disc_intersect_upper(t, sig, ell),
        }
    )

    chi_params = f"k={args.chi2_k};theta={args.chi2_theta:g}"
    theory = bounds.tail_chi2(args.chi2_k, args.chi2_theta)
    row = {"bound_name": "tail_chi2", "params": chi_params, "theory": theory}
    if mc:
        est = montecarlo.mc_chi2_tail(args.chi2_k, args.chi2_theta, n_mc, args.seed)
        row.update(mc_estimate=est.estimate, mc_se=est.se, **{"pass": est.estimate <= theory + 3.0 * est.se})
    rows.append(row)

    ray_params = f"t={t:g};scale={sig:g}"
    theory = bounds.cdf_rayleigh(t, sig)
    row = {"bound_name": "cdf_rayleigh", "params": ray_params, "theory": theory}
    if mc:
        est = montecarlo.mc_rayleigh_cdf(t, sig, n_mc, args.seed)
        row.update(
            mc_estimate=est.estimate,
            mc_se=est.se,
            **{"pass": abs(est.estimate - theory) <= 3.0 * max(est.se, 1e-12)},
        )
    rows.append(row)

    bin_params = f"mu={args.binom_mu:g};delta={args.binom_delta:g}"
    theory = bounds.tail_binomial(args.binom_mu, args.binom_delta)
    row = {"bound_name": "tail_binomial", "params": bin_params, "theory": theory}
    if mc:
        est = montecarlo.mc_binomial_tail(args.binom_mu, args.binom_delta, 1000, n_mc, args.seed)
        row.update(mc_estimate=est.estimate, mc_se=est.se, **{"pass": est.estimate <= theory + 3.0 * est.se})
    rows.append(row)
    return rows, skipped


def _cmd_bounds(args) -> int:
    rows, skipped = _bounds_rows(args)
    payload = {
        "command": "bounds",
        "rows": rows,
        "skipped": skipped,
        "mc": bool(args.mc),
    }
    if args.out:
        bounds_out = _artifact(args.out, "bounds.csv")
        io.write_bounds_csv(bounds_out, rows)
        payload["out"] = bounds_out
    _print_json(payload)
    if any(row.get("pass") is False for row in rows):
        return 1
    return 0


def _cmd_sweep(args) -> int:
    config = SweepConfig.from_json(args.config)
    rows = run_sweep(config)
    payload = {
        "command": "sweep",
        "algorithm": config.algorithm,
        "trials": config.trials,
        "rows": len(rows),
        "failed_rows": sum(1 for r in rows if r.error),
        "exact_fraction": float(np.mean([1.0 if r.exact else 0.0 for r in rows])),
        "median_rate": float(np.median([r.rate for r in rows])),
    }
    if args.out:
        sweep_out = _artifact(args.out, "sweep.csv")
        io.write_sweep_csv(sweep_out, rows)
        payload["out"] = sweep_out
    _print_json(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linecluster",
        description="Two-line clustering of noisy planar points via triple-collinearity scans.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a dataset from the cross mixture")
    p.add_argument("--alpha", type=float, default=math.pi / 2.0, help="cross opening angle (rad)")
    p.add_argument("--half-length", type=float, default=1.0, dest="half_length")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory (points.csv, params.json)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("tls-score", help="score one triple (args or stdin CSV)")
    p.add_argument("--points", help="'x1,y1;x2,y2;x3,y3' (otherwise reads three CSV rows from stdin)")
    p.set_defaults(func=_cmd_tls_score)

    p = sub.add_parser("cluster", help="spectral clustering at a fixed threshold")
    p.add_argument("--in", dest="infile", required=True, help="dataset CSV")
    p.add_argument("--t", type=float, required=True, help="acceptance threshold")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (labels.csv, similarity.csv)")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("autocluster", help="pick the threshold from sampled triples, then cluster")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", type=int, default=30, help="number of sampled triples")
    p.add_argument("--theta", type=float, default=0.25, help="order-statistic quantile")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (labels.csv)")
    p.set_defaults(func=_cmd_autocluster)

    p = sub.add_parser("recover-lines", help="fit a line per cluster label")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--labels", help="labels CSV (default: z column of the dataset)")
    p.add_argument("--params", help="params JSON for error columns")
    p.set_defaults(func=_cmd_recover_lines)

    p = sub.add_parser("oracle", help="classify with the true model parameters")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--out", help="output directory (labels.csv)")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds, optionally vs Monte Carlo")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--ell", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=math.pi / 2.0)
    p.add_argument("--mc", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--mc-samples", dest="mc_samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chi2-k", dest="chi2_k", type=int, default=3)
    p.add_argument("--chi2-theta", dest="chi2_theta", type=float, default=2.0)
    p.add_argument("--binom-mu", dest="binom_mu", type=float, default=300.0)
    p.add_argument("--binom-delta", dest="binom_delta", type=float, default=0.1)
    p.add_argument("--out", help="output directory (bounds.csv)")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("sweep", help="run a sweep config")
    p.add_argument("--config", required=True, help="sweep config JSON")
    p.add_argument("--out", help="output directory (sweep.csv)")
    p.set_defaults(func=_cmd_sweep)
    return parser


def cli_dispatch(argv=None) -> int:
    """Parse and run; returns the process exit code (0 ok / 1 runtime / 2 usage)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except (LineClusterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch())
