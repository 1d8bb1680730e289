"""Dense symmetric linear algebra shared by all estimators.

Whitening, spectral decompositions, projections and subspace distances.
All functions are pure and operate on float64 numpy arrays; returned
containers are frozen dataclasses whose arrays must not be mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput, SingularCovariance

METHODS = ("SCR", "GCR", "OLS", "SIR", "SAVE", "PHD")

_SIGN_EPS = 1e-12


def _as_float_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class Dataset:
    """Raw regression data: an n x p predictor matrix and a length-n response."""

    predictors: np.ndarray
    response: np.ndarray

    def __post_init__(self):
        x = _as_float_matrix(self.predictors, "predictors")
        y = np.asarray(self.response, dtype=np.float64)
        if y.ndim != 1:
            raise ValueError("response must be a 1-D array")
        if not np.all(np.isfinite(y)):
            raise NonFiniteInput("response contains non-finite entries")
        if x.shape[0] != y.shape[0]:
            raise DimensionMismatch(
                f"{x.shape[0]} predictor rows but {y.shape[0]} responses"
            )
        if x.shape[0] < 2:
            raise ValueError("need at least two observations")
        if x.shape[1] < 1:
            raise ValueError("need at least one predictor column")
        object.__setattr__(self, "predictors", x)
        object.__setattr__(self, "response", y)

    @property
    def n(self) -> int:
        return self.predictors.shape[0]

    @property
    def p(self) -> int:
        return self.predictors.shape[1]


@dataclass(frozen=True)
class StandardizedData:
    """Whitened predictors with the moments used to produce them.

    ``z`` has zero column means and identity sample covariance (1/n divisor);
    ``inv_sqrt_cov`` is the symmetric inverse square root of ``cov``.
    """

    z: np.ndarray
    mean: np.ndarray
    cov: np.ndarray
    inv_sqrt_cov: np.ndarray


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition with eigenvalues sorted descending.

    Column i of ``vectors`` pairs with ``values[i]``; columns are orthonormal
    and sign-fixed so the first entry larger than 1e-12 in magnitude is
    positive.
    """

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class SubspaceEstimate:
    """An estimated central subspace.

    ``basis`` is p x q with orthonormal columns, ordered by ascending
    eigenvalue of the method's kernel matrix for the contour methods (so
    column 1 is the strongest direction) and by the method's native ranking
    for the baselines. ``eigenvalues`` carries the full kernel spectrum,
    descending.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        b = np.asarray(self.basis, dtype=np.float64)
        if b.ndim != 2 or not (1 <= b.shape[1] <= b.shape[0]):
            raise ValueError("basis must be p x q with 1 <= q <= p")
        gram = b.T @ b
        if not np.allclose(gram, np.eye(b.shape[1]), atol=1e-8):
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)
        object.__setattr__(
            self, "eigenvalues", np.asarray(self.eigenvalues, dtype=np.float64)
        )

    @property
    def p(self) -> int:
        return self.basis.shape[0]

    @property
    def q(self) -> int:
        return self.basis.shape[1]


def _fix_column_signs(v: np.ndarray) -> np.ndarray:
    """Flip column signs so the first entry with |entry| > 1e-12 is positive."""
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > _SIGN_EPS)
        if idx.size and col[idx[0]] < 0:
            v[:, k] = -col
    return v


def sym_eigen(m) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    The input is symmetrized as (M + M^T)/2 before factoring; asymmetry
    beyond 1e-9 (relative to scale) is rejected as a caller error.
    """
    m = _as_float_matrix(m, "matrix")
    if m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > 1e-9 * scale:
        raise ValueError("matrix is not symmetric within 1e-9")
    sym = 0.5 * (m + m.T)
    values, vectors = np.linalg.eigh(sym)
    order = np.argsort(values)[::-1]
    return EigenDecomposition(
        values=values[order], vectors=_fix_column_signs(vectors[:, order])
    )


def inv_sqrt(m, rel_tol: float = 1e-10) -> np.ndarray:
    """Symmetric inverse square root of a symmetric positive-definite matrix.

    Raises SingularCovariance when the smallest eigenvalue does not exceed
    ``rel_tol`` times the largest, which signals rank-deficient predictors.
    """
    eig = sym_eigen(m)
    largest = eig.values[0]
    smallest = eig.values[-1]
    if largest <= 0 or smallest <= rel_tol * largest:
        raise SingularCovariance(
            f"eigenvalue range [{smallest:.3e}, {largest:.3e}] is numerically singular"
        )
    r = (eig.vectors / np.sqrt(eig.values)) @ eig.vectors.T
    return 0.5 * (r + r.T)


def standardize(d: Dataset) -> StandardizedData:
    """Whiten a dataset: z_i = cov^{-1/2} (x_i - mean), with 1/n covariance."""
    x = d.predictors
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / d.n
    root = inv_sqrt(cov)
    return StandardizedData(z=centered @ root, mean=mean, cov=cov, inv_sqrt_cov=root)


def orthonormal_basis(b) -> np.ndarray:
    """Orthonormalize the columns of ``b`` via QR, preserving column order.

    Column signs follow the same convention as sym_eigen so output is
    reproducible.
    """
    b = _as_float_matrix(b, "basis")
    q, r = np.linalg.qr(b)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return _fix_column_signs(q * signs)


def projection_matrix(basis) -> np.ndarray:
    """Orthogonal projection onto the column space of ``basis``.

    Columns are re-orthonormalized first when they fail the 1e-8 check.
    """
    b = _as_float_matrix(basis, "basis")
    if not np.allclose(b.T @ b, np.eye(b.shape[1]), atol=1e-8):
        b = orthonormal_basis(b)
    p = b @ b.T
    return 0.5 * (p + p.T)


def _basis_of(s) -> np.ndarray:
    if isinstance(s, SubspaceEstimate):
        return s.basis
    return _as_float_matrix(s, "basis")


def subspace_distance(s1, s2, norm: str = "frobenius") -> float:
    """Distance between two subspaces as a norm of P1 - P2.

    ``norm`` is "spectral" (largest singular value, in [0, 1] for equal
    ranks) or "frobenius". Accepts SubspaceEstimate values or plain basis
    arrays; invariant under change of basis within each subspace.
    """
    b1 = _basis_of(s1)
    b2 = _basis_of(s2)
    if b1.shape[0] != b2.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {b1.shape[0]} vs {b2.shape[0]}"
        )
    diff = projection_matrix(b1) - projection_matrix(b2)
    kind = norm.lower()
    if kind == "spectral":
        return float(np.linalg.norm(diff, 2))
    if kind == "frobenius":
        return float(np.linalg.norm(diff, "fro"))
    raise ValueError(f"unknown norm {norm!r}; use 'spectral' or 'frobenius'")
