"""CSV ingestion and single-dataset analysis.

Input files are plain comma-separated text: first row is the header, every
other cell is a numeric literal with '.' as the decimal mark and no quoting.
Parse failures name the offending row and column.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import NonNumericCell, ParseError
from .linalg import Dataset, standardize
from .study import MethodConfig, _fit_method


@dataclass(frozen=True)
class AnalysisReport:
    """Result of fitting one estimator to an ingested dataset.

    ``basis`` rows are named by ``predictor_names``; ``scores`` holds the
    per-observation coordinates of the centered predictors in the estimated
    basis, suitable for external plotting against the response.
    """

    predictor_names: tuple[str, ...]
    response_name: str
    method: str
    q: int
    basis: np.ndarray
    eigenvalues: np.ndarray
    scores: np.ndarray
    response: np.ndarray

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "method": self.method,
            "q": self.q,
            "response": self.response_name,
            "predictors": list(self.predictor_names),
            "basis": {
                name: [float(v) for v in row]
                for name, row in zip(self.predictor_names, self.basis)
            },
            "eigenvalues": [float(v) for v in self.eigenvalues],
        }

    def scores_csv(self) -> str:
        header = ["obs_index"] + [f"dir{k + 1}" for k in range(self.q)] + ["response"]
        lines = [",".join(header)]
        for idx in range(self.scores.shape[0]):
            cells = [str(idx)]
            cells += [repr(float(v)) for v in self.scores[idx]]
            cells.append(repr(float(self.response[idx])))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def read_csv_dataset(path, response_column: str):
    """Parse a CSV file into (Dataset, predictor column names)."""
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    if not rows:
        raise ParseError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if response_column not in header:
        raise ParseError(
            f"{path}: response column {response_column!r} not found "
            f"(have: {', '.join(header)})"
        )
    width = len(header)
    data = np.empty((len(rows) - 1, width))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ParseError(f"{path}: row {r} has {len(row)} cells, expected {width}")
        for c, cell in enumerate(row):
            try:
                data[r - 2, c] = float(cell)
            except ValueError:
                raise NonNumericCell(
                    f"{path}: row {r}, column {header[c]!r}: "
                    f"cannot parse {cell.strip()!r} as a number"
                ) from None
    if data.shape[0] < 2:
        raise ParseError(f"{path}: need at least two data rows")
    y_col = header.index(response_column)
    predictors = np.delete(data, y_col, axis=1)
    names = tuple(h for k, h in enumerate(header) if k != y_col)
    return Dataset(predictors, data[:, y_col]), names


def analyze_dataset(d: Dataset, names, response_name: str,
                    method: MethodConfig, q: int) -> AnalysisReport:
    """Fit one estimator and package basis, spectrum and projection scores."""
    est = _fit_method(method, d, q)
    std = standardize(d)
    scores = (d.predictors - std.mean) @ est.basis
    return AnalysisReport(
        predictor_names=tuple(names),
        response_name=response_name,
        method=est.method,
        q=est.q,
        basis=est.basis,
        eigenvalues=est.eigenvalues,
        scores=scores,
        response=d.response,
    )


def analyze_csv(path, response_column: str, method: MethodConfig,
                q: int) -> AnalysisReport:
    """Ingest a CSV file and fit one estimator to it."""
    d, names = read_csv_dataset(path, response_column)
    return analyze_dataset(d, names, response_column, method, q)
