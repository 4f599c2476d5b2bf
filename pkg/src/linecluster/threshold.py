"""Data-driven threshold selection from sampled triples.

Draw M triples uniformly at random (with replacement, distinct nodes per
triple), score each on the *square-root* scale s_i = sqrt(sigma_tls_sq),
and set the threshold to the order statistic

    t* = s_(k),   k = round(theta * M)   (half away from zero),

so the empirical CDF satisfies F_M(t*) ~= theta. Edge rules: k < 1 uses the
smallest score; k > M (impossible for theta in [0, 1], kept defensively)
clamps to the largest with a flag. The empirical CDF uses non-strict
comparison, F_M(t) = #{ s_i <= t } / M, while hyperedge acceptance is
strict (score < t^2): the CDF *includes* ties so the mass at t* is counted,
whereas acceptance treats t as an open upper bound.

``autocluster`` runs the full pipeline with the selected threshold on the
points not touched by the sample; the touched nodes (union of sampled
triples) receive independent uniform labels, as their scores were consumed
by selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import DOMAIN_ASSIGN, DOMAIN_TRIPLES, generator
from ._validate import as_points
from .errors import EmptySampleError, LineClusterError, SampleExhaustsNodesError
from .spectral import ClusterResult, SpectralEmbedding, cluster
from .tls import sigma_tls_sq


@dataclass(frozen=True, eq=False)
class TripleSample:
    """Uniformly sampled triples with square-root-scale scores."""

    triples: np.ndarray  # (m, 3) int64, each row three distinct node indices
    scores: np.ndarray  # (m,) float64, s_i = sqrt(sigma_tls_sq)
    touched_nodes: np.ndarray  # sorted unique node indices appearing in any triple


@dataclass(frozen=True)
class ThresholdChoice:
    """The selected order statistic and its bookkeeping."""

    t_star: float
    k: int
    theta: float
    clamped: bool = False


@dataclass(frozen=True, eq=False)
class AutoClusterResult(ClusterResult):
    """Cluster labels for all n points plus the threshold-selection record.

    Points in ``rest_indices`` were clustered at ``choice.t_star``; the
    ``sample.touched_nodes`` got independent uniform labels.
    """

    sample: TripleSample = None  # type: ignore[assignment]
    choice: ThresholdChoice = None  # type: ignore[assignment]
    rest_indices: np.ndarray = None  # type: ignore[assignment]


def empirical_cdf(scores, t: float) -> float:
    """F_M(t) = fraction of scores <= t (non-strict; right-continuous)."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1:
        raise LineClusterError(f"scores must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptySampleError("empirical CDF of an empty score sample is undefined")
    return float(np.count_nonzero(arr <= t)) / arr.size


def choose_order_stat(scores, theta: float) -> ThresholdChoice:
    """Apply the k = round(theta * M) order-statistic rule to given scores."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.size == 0:
        raise EmptySampleError("cannot choose a threshold from zero scores")
    if not (0.0 <= theta <= 1.0):
        raise LineClusterError(f"theta must lie in [0, 1], got {theta}")
    m = arr.size
    k_raw = math.floor(theta * m + 0.5)  # round half away from zero
    k = min(max(k_raw, 1), m)
    ordered = np.sort(arr)
    return ThresholdChoice(t_star=float(ordered[k - 1]), k=k, theta=float(theta), clamped=k != k_raw)


def sample_triples(n: int, m: int, seed: int) -> np.ndarray:
    """M uniform triples of distinct nodes, sampled with replacement."""
    if n < 3:
        raise LineClusterError(f"sampling triples needs n >= 3 points, got {n}")
    if m < 1:
        raise EmptySampleError(f"need at least one sampled triple, got m = {m}")
    rng = generator(seed, DOMAIN_TRIPLES)
    triples = np.empty((m, 3), dtype=np.int64)
    for row in range(m):
        triples[row] = rng.choice(n, size=3, replace=False)
    return triples


def select_threshold(points, m: int, theta: float, seed: int) -> tuple[TripleSample, ThresholdChoice]:
    """Sample M triples and pick t* as the round(theta*M)-th smallest score."""
    pts = as_points(points, min_n=3)
    triples = sample_triples(pts.shape[0], m, seed)
    scores = np.array([math.sqrt(sigma_tls_sq(pts[row])) for row in triples])
    touched = np.unique(triples)
    sample = TripleSample(triples=triples, scores=scores, touched_nodes=touched)
    return sample, choose_order_stat(scores, theta)


def autocluster(points, m: int, theta: float, seed: int) -> AutoClusterResult:
    """Select a threshold from sampled triples, then cluster the rest.

    The sampled (touched) nodes are labeled uniformly at random; the
    remaining points are clustered spectrally at the selected threshold.
    Raises ``SampleExhaustsNodesError`` when fewer than 3 points remain.
    """
    pts = as_points(points, min_n=3)
    n = pts.shape[0]
    sample, choice = select_threshold(pts, m, theta, seed)
    rest = np.setdiff1d(np.arange(n), sample.touched_nodes)
    if rest.size < 3:
        raise SampleExhaustsNodesError(
            f"sample touched {sample.touched_nodes.size} of {n} nodes; "
            f"only {rest.size} points remain to cluster"
        )
    # t* can be exactly 0 on noiseless data (collinear sampled triples).
    # Acceptance is strict, so a zero threshold accepts nothing; the smallest
    # positive double squares to 0 and reproduces that behavior while
    # satisfying the scan's t > 0 contract.
    t_run = choice.t_star if choice.t_star > 0.0 else math.ulp(0.0)
    sub = cluster(pts[rest], t_run, seed)

    labels = np.empty(n, dtype=np.int8)
    labels[rest] = sub.labels
    assign_rng = generator(seed, DOMAIN_ASSIGN)
    labels[sample.touched_nodes] = assign_rng.integers(1, 3, size=sample.touched_nodes.size).astype(
        np.int8
    )
    return AutoClusterResult(
        labels=labels,
        embedding=sub.embedding,
        kmeans_inertia=sub.kmeans_inertia,
        centers=sub.centers,
        degenerate=sub.degenerate,
        sample=sample,
        choice=choice,
        rest_indices=rest,
    )
