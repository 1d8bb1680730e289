"""Seeded data generators for the simulation designs, plus Monte-Carlo
oracles for the population pairwise-kernel quantities.

Reproducibility contract: generation is a pure function of (model spec,
seed) using the PCG64 generator, with the predictor stream and the noise
stream split from the master seed so that noise-level sweeps reuse the same
predictor draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConditioning
from .linalg import Dataset

MODEL_IDS = (
    "ex6_1",
    "ex6_2",
    "ex6_3",
    "ex6_4_cos_cube",
    "ex6_4_quad_p10",
    "ex6_5",
    "ex2_1",
    "ex2_2",
    "ex2_3",
)

# ambient dimension, structural dimension, indices of the true basis columns
_MODEL_SHAPE = {
    "ex6_1": (4, 2, (0, 1)),
    "ex6_2": (4, 2, (0, 1)),
    "ex6_3": (4, 1, (1,)),
    "ex6_4_cos_cube": (10, 2, (0, 1)),
    "ex6_4_quad_p10": (10, 2, (0, 1)),
    "ex6_5": (10, 1, (0,)),
    "ex2_1": (2, 1, (1,)),
    "ex2_2": (2, 1, (1,)),
    "ex2_3": (2, 1, (1,)),
}


@dataclass(frozen=True)
class ModelSpec:
    """One simulation design: model id, noise level (or offset a), size, seed.

    ``noise_seed`` overrides the derived noise stream; leave it None for the
    default split-from-master behaviour.
    """

    id: str
    sigma_or_a: float
    n: int
    seed: int
    noise_seed: int | None = None

    def __post_init__(self):
        key = self.id.lower()
        if key not in MODEL_IDS:
            raise ValueError(f"unknown model id {self.id!r}")
        object.__setattr__(self, "id", key)
        if key == "ex6_5":
            if self.sigma_or_a < 0:
                raise ValueError("offset a must be nonnegative")
        elif self.sigma_or_a < 0:
            raise ValueError("noise level sigma must be nonnegative")
        if self.n < 2:
            raise ValueError("need n >= 2")

    @property
    def p(self) -> int:
        return _MODEL_SHAPE[self.id][0]

    @property
    def q(self) -> int:
        return _MODEL_SHAPE[self.id][1]


@dataclass(frozen=True)
class LabeledDataset:
    """A generated dataset together with its true central subspace basis."""

    data: Dataset
    true_basis: np.ndarray
    q: int


def _streams(spec: ModelSpec):
    root = np.random.SeedSequence(spec.seed)
    x_seq, noise_seq = root.spawn(2)
    if spec.noise_seed is not None:
        noise_seq = np.random.SeedSequence(spec.noise_seed)
    return (
        np.random.Generator(np.random.PCG64(x_seq)),
        np.random.Generator(np.random.PCG64(noise_seq)),
    )


def _corner_removed_uniform(rng, n: int) -> np.ndarray:
    """Uniform draws on [0,1]^4 minus the corner where every coordinate
    is at most 0.7, by rejection (acceptance rate 1 - 0.7^4)."""
    rows = []
    have = 0
    while have < n:
        batch = rng.uniform(size=(2 * (n - have) + 8, 4))
        keep = batch[~np.all(batch <= 0.7, axis=1)]
        rows.append(keep)
        have += keep.shape[0]
    return np.concatenate(rows)[:n]


def generate(spec: ModelSpec) -> LabeledDataset:
    """Generate one labeled dataset; bitwise deterministic given the spec."""
    x_rng, noise_rng = _streams(spec)
    n, s = spec.n, spec.sigma_or_a
    model = spec.id

    if model == "ex2_3":
        y = noise_rng.integers(0, 2, size=n).astype(np.float64)
        x = x_rng.standard_normal((n, 2))
        x[:, 1] += 2.0 * y - 1.0  # class means (0, -1) and (0, 1)
    elif model == "ex6_3":
        x = _corner_removed_uniform(x_rng, n)
        eps = noise_rng.standard_normal(n)
        y = np.sin(np.pi * x[:, 1] + 1.0) ** 2 + s * eps
    elif model == "ex6_5":
        x = x_rng.standard_normal((n, 10))
        eps = noise_rng.standard_normal(n)
        y = 0.5 * (x[:, 0] - s) ** 2 * eps
    else:
        x = x_rng.standard_normal((n, spec.p))
        eps = noise_rng.standard_normal(n)
        if model == "ex6_1" or model == "ex6_4_quad_p10":
            y = x[:, 0] ** 2 + x[:, 1] + s * eps
        elif model == "ex6_2":
            y = x[:, 0] / (0.5 + (x[:, 1] + 1.5) ** 2) + (1.0 + x[:, 1]) ** 2 + s * eps
        elif model == "ex6_4_cos_cube":
            y = np.cos(1.5 * x[:, 0]) + 0.5 * x[:, 1] ** 3 + s * eps
        elif model == "ex2_1":
            y = x[:, 1] ** 2 + s * eps
        elif model == "ex2_2":
            y = (x[:, 1] - 1.0) ** 3 + s * eps
        else:  # pragma: no cover - ids are validated in ModelSpec
            raise AssertionError(model)

    p, q, cols = _MODEL_SHAPE[model]
    basis = np.zeros((p, q))
    for k, c in enumerate(cols):
        basis[c, k] = 1.0
    return LabeledDataset(data=Dataset(x, y), true_basis=basis, q=q)


def oracle_lambda(model: str, c: float, sigma: float, pairs: int, seed: int):
    """Monte-Carlo conditional second moments of pair differences.

    For the quadratic (ex2_1) or shifted-cubic (ex2_2) bivariate designs,
    estimates E[(X1' - X1)^2 | |Y' - Y| <= c] and the same for the second
    coordinate. The first coordinate is independent of the response, so its
    value tends to 2; the second is pulled below 2 by the conditioning.
    """
    model = model.lower()
    if model not in ("ex2_1", "ex2_2"):
        raise ValueError("oracle_lambda supports ex2_1 and ex2_2 only")
    if pairs < 100_000:
        raise ValueError("need at least 10^5 simulated pairs")
    rng = np.random.Generator(np.random.PCG64(seed))

    def draw(count):
        x1 = rng.standard_normal(count)
        x2 = rng.standard_normal(count)
        eps = rng.standard_normal(count)
        if model == "ex2_1":
            y = x2 ** 2 + sigma * eps
        else:
            y = (x2 - 1.0) ** 3 + sigma * eps
        return x1, x2, y

    a1, a2, ya = draw(pairs)
    b1, b2, yb = draw(pairs)
    mask = np.abs(yb - ya) <= c
    kept = int(mask.sum())
    if kept < 1000:
        raise DegenerateConditioning(
            f"only {kept} of {pairs} pairs satisfy |dY| <= {c:g}"
        )
    lam1 = float(np.mean((b1 - a1)[mask] ** 2))
    lam2 = float(np.mean((b2 - a2)[mask] ** 2))
    return lam1, lam2


def oracle_binary_k(c: float, pairs: int, seed: int, standardized: bool = True):
    """Monte-Carlo pairwise kernel for the binary-response design.

    The response is Bernoulli(1/2) and X | Y=y is normal with mean (0, 2y-1)
    and identity covariance, so var(X) = diag(1, 2). With ``standardized``
    the kernel is computed on the population-whitened scale, where the
    diagonal tends to (2, 1); on the raw scale both entries tend to 2.
    """
    if not 0 <= c <= 1:
        raise ValueError("c must lie in [0, 1] for a binary response")
    if pairs < 100_000:
        raise ValueError("need at least 10^5 simulated pairs")
    rng = np.random.Generator(np.random.PCG64(seed))
    y1 = rng.integers(0, 2, size=pairs).astype(np.float64)
    y2 = rng.integers(0, 2, size=pairs).astype(np.float64)
    x1 = rng.standard_normal((pairs, 2))
    x2 = rng.standard_normal((pairs, 2))
    x1[:, 1] += 2.0 * y1 - 1.0
    x2[:, 1] += 2.0 * y2 - 1.0
    mask = np.abs(y2 - y1) <= c
    kept = int(mask.sum())
    if kept < 1000:
        raise DegenerateConditioning(f"only {kept} of {pairs} pairs qualify")
    diff = (x2 - x1)[mask]
    if standardized:
        diff = diff / np.sqrt([1.0, 2.0])  # population var(X) is diag(1, 2)
    return diff.T @ diff / kept
