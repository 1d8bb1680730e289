"""Seeded comparison studies: run estimators over replicated draws of a
simulation design and aggregate subspace distances or eigenvalue spectra.

Replicates are pure functions of (config, grid index, replicate index,
master seed), so studies parallelize over a process pool without affecting
results; aggregation always happens in replicate order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .baselines import SliceSpec, ols_direction, phd_fit, save_fit, sir_fit
from .errors import SdrkitError
from .gcr import TubeConfig, gcr_fit, gcr_g_matrix
from .linalg import METHODS, subspace_distance, sym_eigen
from .scr import ThresholdSpec, scr_fit, scr_test_matrix
from .simgen import MODEL_IDS, ModelSpec, generate

# grid sizes below this use the small-study selection defaults
_SMALL_STUDY_N = 250


@dataclass(frozen=True)
class MethodConfig:
    """One estimator plus its tuning parameters (None = resolve defaults)."""

    name: str
    threshold: ThresholdSpec | None = None
    rho: float | None = None
    n_slices: int | None = None
    subsample: int | None = None

    def __post_init__(self):
        name = self.name.upper()
        if name not in METHODS:
            raise ValueError(f"unknown method {self.name!r}")
        object.__setattr__(self, "name", name)


@dataclass(frozen=True)
class StudyConfig:
    """Full description of a comparison study."""

    model: str
    n: int
    sigma_grid: tuple[float, ...]
    replicates: int
    methods: tuple[MethodConfig, ...]
    q: int
    norm: str = "frobenius"
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.model.lower() not in MODEL_IDS:
            raise ValueError(f"unknown model id {self.model!r}")
        object.__setattr__(self, "model", self.model.lower())
        object.__setattr__(self, "sigma_grid", tuple(float(s) for s in self.sigma_grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        if not self.methods:
            raise ValueError("need at least one method")
        if self.norm.lower() not in ("frobenius", "spectral"):
            raise ValueError(f"unknown norm {self.norm!r}")
        object.__setattr__(self, "norm", self.norm.lower())
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class StudyReport:
    """Aggregated study output; ``to_dict`` yields the JSON-schema form."""

    config: dict
    results: tuple[dict, ...]
    eigen: tuple[dict, ...] | None = None
    exclusions: tuple[dict, ...] = ()
    footnotes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "schema_version": 1,
            "config": self.config,
            "results": [dict(r) for r in self.results],
        }
        if self.eigen is not None:
            out["eigen"] = [dict(r) for r in self.eigen]
        out["exclusions"] = [dict(r) for r in self.exclusions]
        out["footnotes"] = list(self.footnotes)
        return out


def default_threshold(method: str, n: int, q: int) -> ThresholdSpec:
    """Selection proportions used by the simulation studies.

    Small studies tie the kept-pair budget to 6qn (SCR) or 2qn (GCR) pairs;
    large ones keep a flat 5% of all pairs.
    """
    total = _kernels.pair_count(n)
    if n < _SMALL_STUDY_N:
        scale = 6 if method == "SCR" else 2
        return ThresholdSpec.proportion(min(1.0, scale * q * n / total))
    return ThresholdSpec.proportion(0.05)


def resolve_methods(cfg: StudyConfig) -> tuple[MethodConfig, ...]:
    """Fill in per-method defaults that depend on the study size."""
    resolved = []
    for mc in cfg.methods:
        if mc.name in ("SCR", "GCR"):
            threshold = mc.threshold or default_threshold(mc.name, cfg.n, cfg.q)
            if mc.name == "GCR" and mc.rho is None:
                raise ValueError("GCR requires a tube radius (gcr_rho)")
            resolved.append(replace(mc, threshold=threshold))
        elif mc.name in ("SIR", "SAVE"):
            n_slices = mc.n_slices or (6 if cfg.n < _SMALL_STUDY_N else 10)
            resolved.append(replace(mc, n_slices=n_slices))
        else:
            resolved.append(mc)
    return tuple(resolved)


def replicate_seed(master_seed: int, rep: int) -> int:
    """Derived generator seed for one replicate; grid-independent so noise
    sweeps reuse the same predictor draws."""
    seq = np.random.SeedSequence([master_seed, rep])
    return int(seq.generate_state(1, np.uint64)[0])


def _fit_method(mc: MethodConfig, d, q: int):
    if mc.name == "SCR":
        return scr_fit(d, q, mc.threshold)
    if mc.name == "GCR":
        return gcr_fit(d, q, TubeConfig(mc.rho, mc.threshold, subsample=mc.subsample))
    if mc.name == "OLS":
        return ols_direction(d)
    if mc.name == "SIR":
        return sir_fit(d, q, SliceSpec(mc.n_slices))
    if mc.name == "SAVE":
        return save_fit(d, q, SliceSpec(mc.n_slices))
    if mc.name == "PHD":
        return phd_fit(d, q)
    raise AssertionError(mc.name)


def _distance_task(cfg: StudyConfig, methods, grid_index: int, rep: int) -> dict:
    sigma = cfg.sigma_grid[grid_index]
    spec = ModelSpec(cfg.model, sigma, cfg.n, replicate_seed(cfg.master_seed, rep))
    data = generate(spec)
    out = {}
    for mc in methods:
        try:
            est = _fit_method(mc, data.data, cfg.q)
            out[mc.name] = subspace_distance(est, data.true_basis, cfg.norm)
        except SdrkitError as err:
            out[mc.name] = f"{type(err).__name__}: {err}"
    return out


def _eigen_task(cfg: StudyConfig, methods, grid_index: int, rep: int) -> dict:
    sigma = cfg.sigma_grid[grid_index]
    spec = ModelSpec(cfg.model, sigma, cfg.n, replicate_seed(cfg.master_seed, rep))
    data = generate(spec)
    out = {}
    for mc in methods:
        try:
            if mc.name == "SCR":
                m = scr_test_matrix(data.data, mc.threshold)
            else:
                m = gcr_g_matrix(
                    data.data,
                    TubeConfig(mc.rho, mc.threshold, subsample=mc.subsample),
                )
            out[mc.name] = sym_eigen(m).values[::-1]  # ascending
        except SdrkitError as err:
            out[mc.name] = f"{type(err).__name__}: {err}"
    return out


def _config_dict(cfg: StudyConfig, methods) -> dict:
    """Resolved config embedded in reports. Excludes the worker count, which
    is an execution detail with no effect on the results."""
    entries = []
    for mc in methods:
        entry = {"method": mc.name}
        if mc.threshold is not None:
            entry["threshold_mode"] = mc.threshold.mode
            entry["threshold_value"] = mc.threshold.value
        if mc.rho is not None:
            entry["rho"] = mc.rho
        if mc.n_slices is not None:
            entry["n_slices"] = mc.n_slices
        if mc.subsample is not None:
            entry["subsample"] = mc.subsample
        entries.append(entry)
    return {
        "model": cfg.model,
        "n": cfg.n,
        "sigma_grid": list(cfg.sigma_grid),
        "replicates": cfg.replicates,
        "q": cfg.q,
        "norm": cfg.norm,
        "master_seed": cfg.master_seed,
        "methods": entries,
    }


def _run_tasks(cfg: StudyConfig, methods, task):
    """Execute one task per (grid, replicate) cell, sequentially or on a
    process pool; results come back keyed so aggregation order is fixed."""
    cells = [
        (gi, rep)
        for gi in range(len(cfg.sigma_grid))
        for rep in range(cfg.replicates)
    ]
    if cfg.workers == 1 or len(cells) == 1:
        return {cell: task(cfg, methods, *cell) for cell in cells}
    _kernels.warmup()  # compile before forking so children reuse the cache
    results = {}
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        chunk = max(1, len(cells) // (cfg.workers * 8))
        for cell, res in zip(
            cells,
            pool.map(
                _task_wrapper,
                [(task, cfg, methods, cell) for cell in cells],
                chunksize=chunk,
            ),
        ):
            results[cell] = res
    return results


def _task_wrapper(args):
    task, cfg, methods, cell = args
    return task(cfg, methods, *cell)


def _sd(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if values.size > 1 else 0.0


def run_study(cfg: StudyConfig) -> StudyReport:
    """Run a distance-comparison study.

    For every grid value and replicate, generates data, fits each method and
    measures the subspace distance to the true basis. Reported se is the
    standard deviation of the replicate distances. Estimator failures are
    excluded from the averages and counted, never silently dropped.
    """
    methods = resolve_methods(cfg)
    per_cell = _run_tasks(cfg, methods, _distance_task)
    results = []
    exclusions = []
    footnotes = []
    if cfg.replicates == 1:
        footnotes.append("single replicate: se_dist is reported as 0")
    for mc in methods:
        for gi, sigma in enumerate(cfg.sigma_grid):
            dists = []
            errors = {}
            for rep in range(cfg.replicates):
                value = per_cell[(gi, rep)][mc.name]
                if isinstance(value, str):
                    errors[value] = errors.get(value, 0) + 1
                else:
                    dists.append(value)
            arr = np.asarray(dists)
            results.append(
                {
                    "method": mc.name,
                    "grid_value": sigma,
                    "mean_dist": float(arr.mean()) if arr.size else float("nan"),
                    "se_dist": _sd(arr),
                    "n_ok": int(arr.size),
                    "n_failed": cfg.replicates - int(arr.size),
                }
            )
            for err, count in sorted(errors.items()):
                exclusions.append(
                    {
                        "method": mc.name,
                        "grid_value": sigma,
                        "error": err,
                        "count": count,
                    }
                )
    return StudyReport(
        config=_config_dict(cfg, methods),
        results=tuple(results),
        exclusions=tuple(exclusions),
        footnotes=tuple(footnotes),
    )


def run_eigen_study(cfg: StudyConfig) -> StudyReport:
    """Run an eigenvalue-separation study for the contour methods.

    Per replicate, the diagnostic matrix spectrum is recorded ascending;
    entries are averaged position-wise with their standard deviations.
    """
    for mc in cfg.methods:
        if mc.name not in ("SCR", "GCR"):
            raise ValueError("eigen studies support SCR and GCR only")
    methods = resolve_methods(cfg)
    per_cell = _run_tasks(cfg, methods, _eigen_task)
    eigen = []
    exclusions = []
    for mc in methods:
        for gi, sigma in enumerate(cfg.sigma_grid):
            spectra = []
            errors = {}
            for rep in range(cfg.replicates):
                value = per_cell[(gi, rep)][mc.name]
                if isinstance(value, str):
                    errors[value] = errors.get(value, 0) + 1
                else:
                    spectra.append(value)
            stack = np.asarray(spectra)
            n_ok = stack.shape[0] if stack.ndim == 2 else 0
            eigen.append(
                {
                    "method": mc.name,
                    "grid_value": sigma,
                    "eigenvalues": [float(v) for v in stack.mean(axis=0)]
                    if n_ok
                    else [],
                    "se": [_sd(stack[:, k]) for k in range(stack.shape[1])]
                    if n_ok
                    else [],
                    "n_ok": n_ok,
                    "n_failed": cfg.replicates - n_ok,
                }
            )
            for err, count in sorted(errors.items()):
                exclusions.append(
                    {
                        "method": mc.name,
                        "grid_value": sigma,
                        "error": err,
                        "count": count,
                    }
                )
    return StudyReport(
        config=_config_dict(cfg, methods),
        results=(),
        eigen=tuple(eigen),
        exclusions=tuple(exclusions),
    )
