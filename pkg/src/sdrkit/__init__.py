"""Sufficient dimension reduction toolkit.

Contour-regression estimators of the central subspace (SCR and GCR) next to
the classical OLS, SIR, SAVE and PHD baselines, Monte-Carlo population
oracles, and a seeded simulation harness with CSV ingestion.
"""

from ._kernels import using_numba
from .baselines import SliceSpec, ols_direction, phd_fit, save_fit, sir_fit
from .csvio import AnalysisReport, analyze_csv, analyze_dataset, read_csv_dataset
from .errors import (
    DegenerateConditioning,
    DegeneratePair,
    DimensionMismatch,
    EmptySelection,
    NonFiniteInput,
    NonNumericCell,
    ParseError,
    SdrkitError,
    SingularCovariance,
    TooFewSlices,
)
from .gcr import (
    TubeConfig,
    TubeStats,
    gcr_fit,
    gcr_g_matrix,
    point_line_distance,
    select_pairs_gcr,
    tube_capture_probability,
    tube_stats,
)
from .linalg import (
    Dataset,
    EigenDecomposition,
    StandardizedData,
    SubspaceEstimate,
    inv_sqrt,
    projection_matrix,
    standardize,
    subspace_distance,
    sym_eigen,
)
from .reports import emit_report
from .scr import (
    PairSelection,
    ThresholdSpec,
    h_matrix,
    scr_fit,
    scr_test_matrix,
    select_pairs_scr,
)
from .simgen import (
    LabeledDataset,
    ModelSpec,
    generate,
    oracle_binary_k,
    oracle_lambda,
)
from .study import (
    MethodConfig,
    StudyConfig,
    StudyReport,
    run_eigen_study,
    run_study,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Dataset",
    "DegenerateConditioning",
    "DegeneratePair",
    "DimensionMismatch",
    "EigenDecomposition",
    "EmptySelection",
    "LabeledDataset",
    "MethodConfig",
    "ModelSpec",
    "NonFiniteInput",
    "NonNumericCell",
    "PairSelection",
    "ParseError",
    "SdrkitError",
    "SingularCovariance",
    "SliceSpec",
    "StandardizedData",
    "StudyConfig",
    "StudyReport",
    "SubspaceEstimate",
    "ThresholdSpec",
    "TooFewSlices",
    "TubeConfig",
    "TubeStats",
    "analyze_csv",
    "analyze_dataset",
    "emit_report",
    "gcr_fit",
    "gcr_g_matrix",
    "generate",
    "h_matrix",
    "inv_sqrt",
    "ols_direction",
    "oracle_binary_k",
    "oracle_lambda",
    "phd_fit",
    "point_line_distance",
    "projection_matrix",
    "read_csv_dataset",
    "run_eigen_study",
    "run_study",
    "save_fit",
    "scr_fit",
    "scr_test_matrix",
    "select_pairs_gcr",
    "select_pairs_scr",
    "sir_fit",
    "standardize",
    "subspace_distance",
    "sym_eigen",
    "tube_capture_probability",
    "tube_stats",
    "using_numba",
]
