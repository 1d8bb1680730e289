"""Simple contour regression.

Pairs of observations with a small response increment define empirical
directions that align with the contours of the regression surface; the
central subspace is read off the trailing eigenvectors of their
second-moment matrix after whitening.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import EmptySelection, NonFiniteInput
from .linalg import Dataset, SubspaceEstimate, orthonormal_basis, standardize, sym_eigen


@dataclass(frozen=True)
class ThresholdSpec:
    """Pair-selection rule: a fixed cutoff or a proportion of all pairs."""

    mode: str  # "fixed_c" | "proportion"
    value: float

    def __post_init__(self):
        if self.mode == "fixed_c":
            if not self.value > 0:
                raise ValueError("fixed cutoff c must be positive")
        elif self.mode == "proportion":
            if not 0 < self.value <= 1:
                raise ValueError("proportion r must lie in (0, 1]")
        else:
            raise ValueError(f"unknown threshold mode {self.mode!r}")

    @classmethod
    def fixed_c(cls, c: float) -> "ThresholdSpec":
        return cls("fixed_c", float(c))

    @classmethod
    def proportion(cls, r: float) -> "ThresholdSpec":
        return cls("proportion", float(r))


@dataclass(frozen=True)
class PairSelection:
    """Pairs retained by a selection rule.

    ``pairs`` is an (m, 2) integer array of (i, j) with i > j, in row-major
    order over the full pair set. ``effective_c`` is the realized cutoff and
    ``fraction`` = m / C(n,2). ``n_skipped`` counts pairs dropped because
    their predictor rows coincide (tube selection only). The selection
    functions never return an empty selection, but the type admits one so
    downstream kernels can define the empty case.
    """

    pairs: np.ndarray
    effective_c: float
    fraction: float
    n_skipped: int = 0

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        if pairs.size and not np.all(pairs[:, 0] > pairs[:, 1]):
            raise ValueError("pairs must satisfy i > j")
        if not 0 <= self.fraction <= 1:
            raise ValueError("fraction must lie in [0, 1]")
        object.__setattr__(self, "pairs", pairs)

    @property
    def rows_i(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def rows_j(self) -> np.ndarray:
        return self.pairs[:, 1]

    @property
    def count(self) -> int:
        return self.pairs.shape[0]


def _selection_from_values(values: np.ndarray, n: int, spec: ThresholdSpec,
                           n_skipped: int = 0) -> PairSelection:
    """Threshold a condensed vector of pair statistics (inf = skipped pair)."""
    total = _kernels.pair_count(n)
    if spec.mode == "fixed_c":
        cutoff = spec.value
    else:
        finite = values[np.isfinite(values)]
        if finite.size == 0:
            raise EmptySelection("every pair was skipped as degenerate")
        k = min(math.ceil(spec.value * total), finite.size)
        cutoff = float(np.partition(finite, k - 1)[k - 1])
    positions = np.flatnonzero(values <= cutoff)
    if positions.size == 0:
        raise EmptySelection(
            f"no pair satisfies the criterion at cutoff {cutoff:g}"
        )
    ii, jj = _kernels.positions_to_pairs(positions)
    return PairSelection(
        pairs=np.column_stack([ii, jj]),
        effective_c=float(cutoff),
        fraction=positions.size / total,
        n_skipped=n_skipped,
    )


def select_pairs_scr(y, spec: ThresholdSpec) -> PairSelection:
    """Select pairs whose absolute response difference is small.

    Fixed-c mode keeps every pair with |y_i - y_j| <= c; proportion mode
    sets the cutoff at the ceil(r * C(n,2))-th smallest difference and keeps
    ties, so the realized fraction is at least r.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] < 2:
        raise ValueError("response must be a 1-D array with n >= 2")
    if not np.all(np.isfinite(y)):
        raise NonFiniteInput("response contains non-finite entries")
    return _selection_from_values(_kernels.condensed_abs_diffs(y), y.shape[0], spec)


def h_matrix(x, selection: PairSelection) -> np.ndarray:
    """Second-moment matrix of the selected empirical directions.

    Sum of (x_j - x_i)(x_j - x_i)^T over selected pairs divided by the full
    pair count C(n,2), not the selected count. Accumulation order is fixed
    (row-major over pairs) so results are bitwise reproducible.
    """
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    if selection.count == 0:
        return np.zeros((p, p))
    if selection.pairs.max() >= n or selection.pairs.min() < 0:
        raise IndexError("selection indices out of range")
    h = _kernels.h_accumulate(x, selection.rows_i, selection.rows_j)
    return h / _kernels.pair_count(n)


def _trailing_basis(kernel: np.ndarray, q: int, inv_sqrt_cov: np.ndarray):
    """Back-transformed span of the q smallest-eigenvalue eigenvectors."""
    eig = sym_eigen(kernel)
    p = kernel.shape[0]
    gamma = eig.vectors[:, np.arange(p - 1, p - q - 1, -1)]  # ascending eigenvalues
    return orthonormal_basis(inv_sqrt_cov @ gamma), eig.values


def scr_fit(d: Dataset, q: int, spec: ThresholdSpec) -> SubspaceEstimate:
    """Estimate the central subspace by simple contour regression.

    The pairwise kernel is accumulated on the original predictor scale,
    whitened on both sides, and the q eigenvectors with smallest eigenvalues
    are back-transformed by the inverse square-root covariance.
    """
    if not 1 <= q < d.p:
        raise ValueError(f"q must satisfy 1 <= q < p, got q={q}, p={d.p}")
    std = standardize(d)
    selection = select_pairs_scr(d.response, spec)
    h = h_matrix(d.predictors, selection)
    kernel = std.inv_sqrt_cov @ h @ std.inv_sqrt_cov
    basis, values = _trailing_basis(kernel, q, std.inv_sqrt_cov)
    return SubspaceEstimate(basis=basis, eigenvalues=values, method="SCR")


def scr_test_matrix(d: Dataset, spec: ThresholdSpec) -> np.ndarray:
    """Eigenvalue-diagnostic matrix 2 I - whitened conditional kernel.

    The pairwise kernel is rescaled by the selected fraction so it estimates
    a conditional expectation; contour directions then carry eigenvalues
    near zero while central-subspace directions stay positive, which is what
    makes the spectrum gap readable.
    """
    if d.p < 2:
        raise ValueError("need p >= 2: a single predictor leaves no contour space")
    std = standardize(d)
    selection = select_pairs_scr(d.response, spec)
    h = h_matrix(d.predictors, selection)
    k = h / selection.fraction
    m = 2.0 * np.eye(d.p) - std.inv_sqrt_cov @ k @ std.inv_sqrt_cov
    return 0.5 * (m + m.T)
