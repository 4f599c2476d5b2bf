"""Triple-collinearity hypergraph and its pair-similarity projection.

A triple {i, j, k} is a hyperedge iff its squared TLS residual is strictly
below ``t**2``. Projecting to pairs gives the similarity matrix

    W[i, j] = #{ k : {i, j, k} is a hyperedge },

a symmetric integer matrix with zero diagonal and entries at most n - 2.

Two interchangeable scan backends evaluate the identical score expression:
a compiled kernel (``linecluster._scan``, used when built, parallelizable
via ``LINECLUSTER_THREADS``) and a vectorized numpy fallback. Setting
``LINECLUSTER_FORCE_NUMPY=1`` before import forces the fallback. Counts are
integers accumulated per disjoint outer-index range, so the result is
independent of backend and thread count.

The scan is O(n^3); n is capped at 5000 (about 2.1e10 triples) to keep a
single call within practical time and memory.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validate import as_labels, as_points
from .errors import LineClusterError

_FORCE_NUMPY = os.environ.get("LINECLUSTER_FORCE_NUMPY", "") not in ("", "0")
if _FORCE_NUMPY:
    from . import _scan_numpy as _kernel
else:
    try:
        from . import _scan as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _scan_numpy as _kernel  # type: ignore[no-redef]

        warnings.warn(
            "compiled scan kernel not available; falling back to the slower numpy backend",
            RuntimeWarning,
            stacklevel=2,
        )

MAX_POINTS = 5000


def active_backend() -> str:
    """Name of the scan backend selected at import: 'compiled' or 'numpy'."""
    return "compiled" if _kernel.compiled else "numpy"


def thread_count() -> int:
    """Scan threads: LINECLUSTER_THREADS if set, else all cores (compiled only)."""
    env = os.environ.get("LINECLUSTER_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise LineClusterError(f"LINECLUSTER_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Pair co-incidence counts of accepted triples."""

    n: int
    counts: np.ndarray  # (n, n) int32, symmetric, zero diagonal


@dataclass(frozen=True)
class HyperedgeStats:
    """Acceptance tallies split by triple label composition."""

    total_triples: int
    accepted_triples: int
    accepted_within: int
    accepted_between: int
    total_within: int
    total_between: int

    @property
    def p_hat(self) -> float:
        """Empirical acceptance rate of single-component triples."""
        return self.accepted_within / self.total_within if self.total_within else math.nan

    @property
    def q_hat(self) -> float:
        """Empirical acceptance rate of mixed triples."""
        return self.accepted_between / self.total_between if self.total_between else math.nan


def _partition(n: int, parts: int) -> list[tuple[int, int]]:
    """Split outer indices into ranges of roughly equal triple mass."""
    if parts <= 1:
        return [(0, n)]
    weights = np.array([(n - 1 - i) * (n - 2 - i) // 2 for i in range(n)], dtype=np.int64)
    cum = np.cumsum(weights)
    total = int(cum[-1])
    cuts = [0]
    for p in range(1, parts):
        idx = int(np.searchsorted(cum, total * p / parts))
        cuts.append(min(max(idx, cuts[-1]), n))
    cuts.append(n)
    return [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]


def scan(points, t: float, labels=None) -> tuple[SimilarityMatrix, HyperedgeStats | None]:
    """Score all triples against threshold ``t`` in one pass.

    Returns the similarity matrix and, when true ``labels`` are supplied,
    the acceptance tallies split into within-component and mixed triples.
    """
    pts = as_points(points, min_n=3)
    n = pts.shape[0]
    if n > MAX_POINTS:
        raise LineClusterError(
            f"n = {n} exceeds the supported maximum {MAX_POINTS} (the scan is O(n^3))"
        )
    if not (t > 0.0) or not math.isfinite(t):
        raise LineClusterError(f"threshold t must be positive and finite, got {t}")
    z = as_labels(labels, n) if labels is not None else None
    x = np.ascontiguousarray(pts[:, 0])
    y = np.ascontiguousarray(pts[:, 1])
    t2 = t * t

    threads = thread_count() if _kernel.compiled else 1
    ranges = _partition(n, min(threads, n) * 2 if threads > 1 else 1)

    if len(ranges) == 1 or threads == 1:
        w_flat = np.zeros(n * n, dtype=np.int32)
        counts = np.zeros(2, dtype=np.int64)
        for lo, hi in ranges:
            _kernel.scan_triples(x, y, z, t2, lo, hi, w_flat, counts)
    else:
        buffers = []

        def run(bounds: tuple[int, int]) -> None:
            w_part = np.zeros(n * n, dtype=np.int32)
            c_part = np.zeros(2, dtype=np.int64)
            _kernel.scan_triples(x, y, z, t2, bounds[0], bounds[1], w_part, c_part)
            buffers.append((w_part, c_part))

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, ranges))
        w_flat = np.zeros(n * n, dtype=np.int32)
        counts = np.zeros(2, dtype=np.int64)
        for w_part, c_part in buffers:
            w_flat += w_part
            counts += c_part

    upper = w_flat.reshape(n, n)
    w = upper + upper.T
    sim = SimilarityMatrix(n=n, counts=w)

    stats: HyperedgeStats | None = None
    if z is not None:
        total = math.comb(n, 3)
        n1 = int(np.count_nonzero(z == 1))
        total_within = math.comb(n1, 3) + math.comb(n - n1, 3)
        accepted = int(counts[0])
        within = int(counts[1])
        stats = HyperedgeStats(
            total_triples=total,
            accepted_triples=accepted,
            accepted_within=within,
            accepted_between=accepted - within,
            total_within=total_within,
            total_between=total - total_within,
        )
    return sim, stats


def build_similarity(points, t: float) -> SimilarityMatrix:
    """Similarity matrix of pair co-incidence counts at threshold ``t``."""
    return scan(points, t)[0]


def hyperedge_probabilities(points, labels, t: float) -> HyperedgeStats:
    """Empirical within/mixed acceptance rates at threshold ``t``."""
    if labels is None:
        raise LineClusterError("hyperedge_probabilities requires true labels")
    stats = scan(points, t, labels)[1]
    assert stats is not None
    return stats
