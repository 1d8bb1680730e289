"""Classical sufficient-dimension-reduction estimators used for comparison.

Standard formulations: OLS direction, sliced inverse regression, sliced
average variance estimation and (response-based) principal Hessian
directions. All operate on the whitened predictor scale and back-transform
by the inverse square-root covariance, like the contour methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooFewSlices
from .linalg import (
    Dataset,
    SubspaceEstimate,
    _fix_column_signs,
    orthonormal_basis,
    standardize,
    sym_eigen,
)


@dataclass(frozen=True)
class SliceSpec:
    """Response slicing for SIR/SAVE: equal-count slices only."""

    n_slices: int
    scheme: str = "equal_count"

    def __post_init__(self):
        if self.n_slices < 2:
            raise ValueError("need at least two slices")
        if self.scheme != "equal_count":
            raise ValueError(f"unknown slicing scheme {self.scheme!r}")


def slice_indices(y, n_slices: int) -> list[np.ndarray]:
    """Partition observation indices into response-ordered slices.

    Slice sizes differ by at most one; boundaries sit at response order
    statistics and ties are broken by stable sort order.
    """
    y = np.asarray(y, dtype=np.float64)
    if n_slices > y.shape[0]:
        raise TooFewSlices(
            f"cannot form {n_slices} slices from {y.shape[0]} observations"
        )
    order = np.argsort(y, kind="stable")
    return [group for group in np.array_split(order, n_slices)]


def ols_direction(d: Dataset) -> SubspaceEstimate:
    """Least-squares direction: cov^{-1} cov(X, Y), unit-normalized, q = 1."""
    std = standardize(d)
    yc = d.response - d.response.mean()
    m = std.z.T @ yc / d.n  # covariance of whitened predictors with Y
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        raise ValueError("response is uncorrelated with every predictor")
    basis = std.inv_sqrt_cov @ m
    basis = _fix_column_signs((basis / np.linalg.norm(basis)).reshape(-1, 1))
    values = np.zeros(d.p)
    values[0] = norm * norm  # spectrum of the rank-one kernel m m^T
    return SubspaceEstimate(basis=basis, eigenvalues=values, method="OLS")


def _leading_basis(kernel, q, inv_sqrt_cov, method):
    eig = sym_eigen(kernel)
    basis = orthonormal_basis(inv_sqrt_cov @ eig.vectors[:, :q])
    return SubspaceEstimate(basis=basis, eigenvalues=eig.values, method=method)


def sir_fit(d: Dataset, q: int, slices: SliceSpec) -> SubspaceEstimate:
    """Sliced inverse regression: top eigenvectors of the between-slice
    covariance of whitened slice means."""
    if q >= min(d.p, slices.n_slices):
        if q >= slices.n_slices:
            raise TooFewSlices(f"q={q} needs more than {slices.n_slices} slices")
        raise ValueError(f"q must be smaller than p={d.p}")
    std = standardize(d)
    kernel = np.zeros((d.p, d.p))
    for idx in slice_indices(d.response, slices.n_slices):
        m = std.z[idx].mean(axis=0)
        kernel += (idx.size / d.n) * np.outer(m, m)
    return _leading_basis(kernel, q, std.inv_sqrt_cov, "SIR")


def save_fit(d: Dataset, q: int, slices: SliceSpec) -> SubspaceEstimate:
    """Sliced average variance estimation: top eigenvectors of the slice
    average of (I - var(Z | slice))^2."""
    if q >= min(d.p, slices.n_slices):
        if q >= slices.n_slices:
            raise TooFewSlices(f"q={q} needs more than {slices.n_slices} slices")
        raise ValueError(f"q must be smaller than p={d.p}")
    std = standardize(d)
    eye = np.eye(d.p)
    kernel = np.zeros((d.p, d.p))
    for idx in slice_indices(d.response, slices.n_slices):
        zs = std.z[idx]
        centered = zs - zs.mean(axis=0)
        v = centered.T @ centered / idx.size
        diff = eye - v
        kernel += (idx.size / d.n) * (diff @ diff)
    return _leading_basis(kernel, q, std.inv_sqrt_cov, "SAVE")


def phd_fit(d: Dataset, q: int) -> SubspaceEstimate:
    """Response-based principal Hessian directions.

    Eigenvectors of the response-weighted second moment of whitened
    predictors, ranked by eigenvalue magnitude; the eigenvalues field
    carries the absolute spectrum, descending.
    """
    if not 1 <= q < d.p:
        raise ValueError(f"q must satisfy 1 <= q < p, got q={q}, p={d.p}")
    std = standardize(d)
    yc = d.response - d.response.mean()
    kernel = (std.z * yc[:, None]).T @ std.z / d.n
    eig = sym_eigen(kernel)
    order = np.argsort(-np.abs(eig.values), kind="stable")
    basis = orthonormal_basis(std.inv_sqrt_cov @ eig.vectors[:, order[:q]])
    return SubspaceEstimate(
        basis=basis,
        eigenvalues=np.abs(eig.values)[order],
        method="PHD",
    )
