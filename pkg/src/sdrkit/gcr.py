"""General contour regression.

Instead of thresholding the raw response increment, GCR scores each pair of
observations by the sample variance of the response inside a tube of radius
rho around the line through the pair, computed on the whitened scale. Pairs
with the smallest tube variance align with the contours even when the
response surface is strongly nonmonotone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegeneratePair
from .linalg import Dataset, SubspaceEstimate, standardize
from .scr import PairSelection, ThresholdSpec, _selection_from_values, _trailing_basis, h_matrix


@dataclass(frozen=True)
class TubeConfig:
    """Tube radius (whitened scale) plus the threshold applied to variances.

    ``subsample`` optionally restricts the candidate pairs to a seeded
    uniform random subset of that size; it is off by default so exact
    estimates are the norm, and only matters for very large n.
    """

    rho: float
    threshold: ThresholdSpec
    subsample: int | None = None
    subsample_seed: int = 0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("tube radius rho must be positive")
        if self.subsample is not None and self.subsample < 1:
            raise ValueError("subsample size must be positive")


@dataclass(frozen=True)
class TubeStats:
    """Membership count, response mean and variance for one tube."""

    member_count: int
    mean_y: float
    variance_y: float

    def __post_init__(self):
        if self.member_count < 2:
            raise ValueError("a tube always contains its two endpoints")
        if self.variance_y < 0:
            raise ValueError("variance cannot be negative")


def point_line_distance(x_k, x_i, x_j) -> float:
    """Euclidean distance from x_k to the line through x_i and x_j.

    Uses the closed form sqrt(|x_k - x_i|^2 - ((x_k - x_i).(x_j - x_i))^2
    / |x_j - x_i|^2), clamping the radicand at zero against floating-point
    cancellation.
    """
    x_k = np.asarray(x_k, dtype=np.float64)
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    b = x_j - x_i
    nb2 = float(b @ b)
    if nb2 <= _kernels._DEGENERATE_SQ:
        raise DegeneratePair("line endpoints coincide (duplicate predictor rows?)")
    a = x_k - x_i
    rad = float(a @ a) - float(a @ b) ** 2 / nb2
    return float(np.sqrt(max(rad, 0.0)))


def tube_membership(z, i: int, j: int, rho: float) -> np.ndarray:
    """Indices of rows within distance rho of the line through rows i and j."""
    z = np.asarray(z, dtype=np.float64)
    b = z[j] - z[i]
    nb2 = float(b @ b)
    if nb2 <= _kernels._DEGENERATE_SQ:
        raise DegeneratePair(f"rows {i} and {j} coincide")
    diff = z - z[i]
    proj = diff @ b
    d2 = np.einsum("kp,kp->k", diff, diff) - proj * proj / nb2
    return np.flatnonzero(d2 <= rho * rho)


def tube_stats(z, y, i: int, j: int, cfg: TubeConfig) -> TubeStats:
    """Response statistics inside the tube around the line through rows i, j.

    Membership always includes the endpoints; the variance uses the 1/n_ij
    population divisor.
    """
    if i == j:
        raise ValueError("tube endpoints must be distinct observations")
    y = np.asarray(y, dtype=np.float64)
    members = tube_membership(z, i, j, cfg.rho)
    vals = y[members]
    mean = float(vals.mean())
    return TubeStats(
        member_count=members.size,
        mean_y=mean,
        variance_y=float(np.mean((vals - mean) ** 2)),
    )


def _duplicate_positions(z: np.ndarray) -> np.ndarray:
    """Condensed positions of pairs with identical predictor rows."""
    n = z.shape[0]
    order = np.lexsort(z.T[::-1])
    zs = z[order]
    same = np.all(zs[1:] == zs[:-1], axis=1)
    positions = []
    start = 0
    for stop in np.flatnonzero(~same):
        if stop > start:
            positions.append(order[start : stop + 1])
        start = stop + 1
    if n - 1 > start:
        positions.append(order[start:])
    out = []
    for group in positions:
        g = np.sort(group)
        for a in range(1, g.size):
            hi = g[a]
            out.extend(hi * (hi - 1) // 2 + g[:a])
    return np.asarray(sorted(out), dtype=np.int64)


def pair_tube_variances(z, y, cfg: TubeConfig):
    """Tube variances for the candidate pairs, plus their condensed positions.

    Pairs with duplicate predictor rows get variance inf so they are never
    selected; their count is reported through the selection's n_skipped.
    """
    z = np.asarray(z, dtype=np.float64)
    n = z.shape[0]
    if cfg.subsample is not None and cfg.subsample < _kernels.pair_count(n):
        rng = np.random.Generator(np.random.PCG64(cfg.subsample_seed))
        positions = np.sort(
            rng.choice(_kernels.pair_count(n), size=cfg.subsample, replace=False)
        )
        rows_i, rows_j = _kernels.positions_to_pairs(positions)
    else:
        positions = None
        rows_i, rows_j = _kernels.pair_index_arrays(n)
    var, _ = _kernels.tube_variances(z, y, cfg.rho, rows_i, rows_j)
    dup = _duplicate_positions(z)
    if dup.size:
        if positions is None:
            var[dup] = np.inf
        else:
            var[np.isin(positions, dup)] = np.inf
    return var, positions


def select_pairs_gcr(z, y, cfg: TubeConfig) -> PairSelection:
    """Select pairs whose tube response variance is small.

    Thresholding mirrors the simple-contour rule: fixed-c keeps variances
    <= c, proportion mode keeps the lowest ceil(r * C(n,2)) variances with
    ties included. Degenerate pairs are skipped and counted.
    """
    z = np.asarray(z, dtype=np.float64)
    n = z.shape[0]
    var, positions = pair_tube_variances(z, y, cfg)
    n_skipped = int(np.sum(np.isinf(var)))
    if positions is None:
        return _selection_from_values(var, n, cfg.threshold, n_skipped=n_skipped)
    # subsampled candidate set: scatter back into a full condensed vector
    full = np.full(_kernels.pair_count(n), np.inf)
    full[positions] = var
    selection = _selection_from_values(full, n, cfg.threshold, n_skipped=n_skipped)
    return selection


def gcr_fit(d: Dataset, q: int, cfg: TubeConfig) -> SubspaceEstimate:
    """Estimate the central subspace by general contour regression.

    Predictors are whitened first; tubes, variances and difference vectors
    all live on that scale, so no further sandwiching is needed before the
    spectral step. The q smallest-eigenvalue eigenvectors are back-
    transformed by the inverse square-root covariance.
    """
    if not 1 <= q < d.p:
        raise ValueError(f"q must satisfy 1 <= q < p, got q={q}, p={d.p}")
    std = standardize(d)
    selection = select_pairs_gcr(std.z, d.response, cfg)
    f = h_matrix(std.z, selection)
    basis, values = _trailing_basis(f, q, std.inv_sqrt_cov)
    return SubspaceEstimate(basis=basis, eigenvalues=values, method="GCR")


def gcr_g_matrix(d: Dataset, cfg: TubeConfig) -> np.ndarray:
    """Eigenvalue-diagnostic matrix 2 I - conditional tube kernel.

    The pairwise kernel on the whitened scale is rescaled by the number of
    selected pairs so it estimates a conditional expectation; the eigenvalue
    separation then flags the structural dimension.
    """
    std = standardize(d)
    selection = select_pairs_gcr(std.z, d.response, cfg)
    f = h_matrix(std.z, selection)
    g = f / selection.fraction
    m = 2.0 * np.eye(d.p) - g
    return 0.5 * (m + m.T)


def tube_capture_probability(p: int, rho: float, samples: int, seed: int) -> float:
    """Monte-Carlo probability that a third standard-normal point lands in
    the rho-tube of the line through two others.

    Deterministic given the seed; useful for calibrating rho against the
    expected tube occupancy at a given dimension.
    """
    if samples < 10_000:
        raise ValueError("need at least 10^4 samples for a stable estimate")
    rng = np.random.Generator(np.random.PCG64(seed))
    rho2 = float(rho) * float(rho)
    hits = 0
    done = 0
    chunk = 100_000
    while done < samples:
        b = min(chunk, samples - done)
        x1 = rng.standard_normal((b, p))
        x2 = rng.standard_normal((b, p))
        x3 = rng.standard_normal((b, p))
        line = x2 - x1
        diff = x3 - x1
        nb2 = np.einsum("kp,kp->k", line, line)
        proj = np.einsum("kp,kp->k", diff, line)
        d2 = np.einsum("kp,kp->k", diff, diff) - proj * proj / nb2
        hits += int(np.count_nonzero(d2 <= rho2))
        done += b
    return hits / samples
