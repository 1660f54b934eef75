"""Deterministic baseline measures: RMSE, MAE, quantile loss, ACC, CPA."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import PairedSample
from .errors import (
    AllOutcomesEqualError,
    AlphaOutOfRangeError,
    DegenerateVarianceWarning,
    LengthMismatchError,
    VerificationError,
)

METRIC_COLUMNS = ("rmse", "mae", "ql", "pc", "acc", "cpa", "pcs")

_TOL = 1e-9


@dataclass(frozen=True)
class MetricTable:
    """One row of evaluation measures per model.

    ``values`` has shape (len(models), len(METRIC_COLUMNS)) with the column
    order rmse, mae, ql (at level ``alpha``), pc, acc, cpa, pcs.
    """

    models: tuple[str, ...]
    alpha: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        models = tuple(self.models)
        if values.shape != (len(models), len(METRIC_COLUMNS)):
            raise LengthMismatchError(
                f"values shape {values.shape} does not match "
                f"{len(models)} models x {len(METRIC_COLUMNS)} columns"
            )
        losses = values[:, :4]
        if np.any(losses < -_TOL):
            raise VerificationError("loss columns must be nonnegative")
        acc = values[:, 4]
        if np.any(np.abs(acc[np.isfinite(acc)]) > 1 + _TOL):
            raise VerificationError("acc must lie in [-1, 1]")
        for name, col in (("cpa", values[:, 5]), ("pcs", values[:, 6])):
            if np.any((col < -_TOL) | (col > 1 + _TOL)):
                raise VerificationError(f"{name} must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "models", models)
        object.__setattr__(self, "values", values)

    def get(self, model: str, column: str) -> float:
        return float(
            self.values[self.models.index(model), METRIC_COLUMNS.index(column)]
        )

    def column(self, column: str) -> np.ndarray:
        return self.values[:, METRIC_COLUMNS.index(column)].copy()

    def to_csv_text(self) -> str:
        lines = ["model," + ",".join(METRIC_COLUMNS)]
        for name, row in zip(self.models, self.values):
            lines.append(name + "," + ",".join(repr(float(v)) for v in row))
        return "\r\n".join(lines) + "\r\n"

    def to_text(self) -> str:
        """Aligned fixed-width rendering (ql column labeled with alpha)."""
        header = ["model"] + [
            f"ql_{self.alpha:g}" if c == "ql" else c for c in METRIC_COLUMNS
        ]
        rows = [
            [name] + [f"{v:.4f}" for v in row]
            for name, row in zip(self.models, self.values)
        ]
        widths = [
            max(len(header[j]), *(len(r[j]) for r in rows))
            for j in range(len(header))
        ]
        fmt = "  ".join(f"{{:>{w}}}" for w in widths)
        return "\n".join([fmt.format(*header)] + [fmt.format(*r) for r in rows])


def rmse(sample: PairedSample) -> float:
    """Root mean squared error of the model output."""
    d = sample.x - sample.y
    return float(np.sqrt(np.mean(d * d)))


def mae(sample: PairedSample) -> float:
    """Mean absolute error of the model output."""
    return float(np.mean(np.abs(sample.x - sample.y)))


def quantile_loss(sample: PairedSample, alpha: float) -> float:
    """Mean pinball loss rho_alpha(y - x) of the model output as an
    alpha-quantile forecast."""
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRangeError(f"alpha must be in (0, 1), got {alpha}")
    u = sample.y - sample.x
    return float(np.mean(u * (alpha - (u < 0))))


def acc(sample: PairedSample, climatology: float | None = None) -> float:
    """Anomaly correlation coefficient.

    Pearson correlation between forecast and outcome anomalies relative to
    ``climatology`` (default: the mean outcome of the evaluation set).
    Returns NaN with a warning when either anomaly series has zero
    variance.
    """
    clim = float(np.mean(sample.y)) if climatology is None else float(climatology)
    a = sample.x - clim
    b = sample.y - clim
    am = a - a.mean()
    bm = b - b.mean()
    denom = np.sqrt((am @ am) * (bm @ bm))
    if denom == 0.0:
        warnings.warn(
            "zero-variance anomalies: correlation undefined",
            DegenerateVarianceWarning,
            stacklevel=2,
        )
        return float("nan")
    r = float((am @ bm) / denom)
    return min(1.0, max(-1.0, r))


def _pair_count(counts: np.ndarray) -> int:
    """Number of unordered pairs drawn within the given tie groups."""
    return int(np.sum(counts * (counts - 1) // 2))


def cpa(sample: PairedSample) -> float:
    """Coefficient of predictive ability.

    Binarize the outcome at every threshold between consecutive distinct
    outcome values, compute the AUC of the model output (half credit for
    ties) for each binary problem, and average the AUCs weighted by the
    number of class-crossing pairs. Equivalently, this is pairwise
    concordance where each pair with y_i < y_j carries a weight equal to
    its outcome-rank gap (the number of thresholds it straddles):

        sum over y_i < y_j of gap * (1{x_i < x_j} + 0.5 * 1{x_i = x_j})
        -----------------------------------------------------------------
        sum over y_i < y_j of gap

    For a binary outcome there is a single threshold and the value reduces
    to AUC; for all-distinct data it is a linear function of Spearman rank
    correlation. O(n log n) via Fenwick trees over model-output ranks.
    """
    x, y = sample.x, sample.y
    y_vals, y_inv = np.unique(y, return_inverse=True)
    if len(y_vals) < 2:
        raise AllOutcomesEqualError(
            "every outcome is identical; concordance is undefined"
        )
    _, x_inv = np.unique(x, return_inverse=True)
    order = np.argsort(y_inv, kind="stable")
    num, den = _kernels._cpa_sums(
        x_inv[order].astype(np.int64), y_inv[order].astype(np.float64)
    )
    return num / den


def cpa_pairwise(sample: PairedSample) -> float:
    """Quadratic-time double loop over pairs; test oracle for cpa()."""
    x, y = sample.x, sample.y
    n = sample.n
    _, y_rank = np.unique(y, return_inverse=True)
    num = 0.0
    den = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if y[i] == y[j]:
                continue
            lo, hi = (i, j) if y[i] < y[j] else (j, i)
            gap = float(y_rank[hi] - y_rank[lo])
            den += gap
            if x[lo] < x[hi]:
                num += gap
            elif x[lo] == x[hi]:
                num += 0.5 * gap
    if den == 0.0:
        raise AllOutcomesEqualError(
            "every outcome is identical; concordance is undefined"
        )
    return num / den
