"""Isotonic distributional regression with a single real covariate.

Equal covariate values are pooled into groups; the fitted object holds one
discrete CDF per group, evaluated on the unique outcome values. Column k of
the CDF matrix is the antitonic weighted least-squares fit of the per-group
empirical frequencies of {y <= threshold_k}, with group sizes as weights,
which realizes the CRPS-optimal family of CDFs that is stochastically
nondecreasing in the covariate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import PairedSample, StepDistribution
from .errors import (
    LengthMismatchError,
    NonFiniteValueError,
    NotMonotoneCdfError,
    SampleMismatchError,
)
from .pav import pav_antitonic

_TOL = 1e-12


@dataclass(frozen=True)
class IdrFit:
    """Fitted model: one predictive CDF per distinct covariate value.

    cdf_matrix[j, k] is the CDF of group j (covariate value groups[j],
    multiplicity group_sizes[j]) at thresholds[k]. Rows are valid CDFs;
    columns are nonincreasing, so larger covariates get stochastically
    larger distributions.
    """

    groups: np.ndarray
    group_sizes: np.ndarray
    thresholds: np.ndarray
    cdf_matrix: np.ndarray

    def __post_init__(self):
        groups = np.asarray(self.groups, dtype=np.float64).reshape(-1)
        sizes = np.asarray(self.group_sizes, dtype=np.int64).reshape(-1)
        thresholds = np.asarray(self.thresholds, dtype=np.float64).reshape(-1)
        matrix = np.asarray(self.cdf_matrix, dtype=np.float64)
        g, m = len(groups), len(thresholds)
        if g < 1 or m < 1 or matrix.shape != (g, m):
            raise LengthMismatchError(
                f"cdf matrix shape {matrix.shape} does not match "
                f"{g} groups x {m} thresholds"
            )
        if len(sizes) != g:
            raise LengthMismatchError("one size per group required")
        if np.any(sizes < 1):
            raise LengthMismatchError("group sizes must be positive")
        if np.any(np.diff(groups) <= 0) or np.any(np.diff(thresholds) <= 0):
            raise NotMonotoneCdfError(
                "groups and thresholds must be strictly increasing"
            )
        if np.any(np.diff(matrix, axis=1) < -_TOL):
            raise NotMonotoneCdfError("each row must be a nondecreasing CDF")
        if np.any(np.abs(matrix[:, -1] - 1.0) > _TOL):
            raise NotMonotoneCdfError("each row must reach 1 at the top threshold")
        if np.any(np.diff(matrix, axis=0) > _TOL):
            raise NotMonotoneCdfError(
                "columns must be nonincreasing (stochastic order)"
            )
        for name, arr in (
            ("groups", groups),
            ("group_sizes", sizes),
            ("thresholds", thresholds),
            ("cdf_matrix", matrix),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return int(self.group_sizes.sum())


def _group_structure(sample: PairedSample):
    """Unique covariates/outcomes and the cumulative count matrix.

    Returns (groups, sizes, inv_x, thresholds, cum_counts) where
    cum_counts[j, k] counts outcomes of group j that are <= thresholds[k].
    """
    groups, inv_x, counts = np.unique(
        sample.x, return_inverse=True, return_counts=True
    )
    thresholds, inv_y = np.unique(sample.y, return_inverse=True)
    g, m = len(groups), len(thresholds)
    cnt = np.bincount(inv_x * m + inv_y, minlength=g * m).reshape(g, m)
    cum = np.cumsum(cnt, axis=1).astype(np.float64)
    return groups, counts, inv_x, thresholds, cum


def fit_idr(sample: PairedSample, method: str = "fast") -> IdrFit:
    """Fit the isotonic distributional regression of y on x.

    ``method="fast"`` runs the compiled per-threshold scan; "reference"
    applies the public antitonic PAV column by column. Both produce
    bit-identical matrices; the reference path exists as an independently
    expressed cross-check.

    The full g x m matrix is materialized, so this is intended for sample
    sizes up to a few thousand; pc() streams over thresholds instead and
    has no such limit.
    """
    groups, counts, _, thresholds, cum = _group_structure(sample)
    sizes = counts.astype(np.float64)
    if method == "fast":
        matrix = _kernels._fit_cdf_matrix(cum, sizes)
    elif method == "reference":
        g, m = cum.shape
        matrix = np.empty((g, m), dtype=np.float64)
        for k in range(m):
            matrix[:, k] = pav_antitonic(cum[:, k] / sizes, sizes).fitted
    else:
        raise ValueError(f"unknown method {method!r}")
    return IdrFit(groups, counts, thresholds, matrix)


def _row_to_step(thresholds: np.ndarray, row: np.ndarray) -> StepDistribution:
    """Turn one CDF row into a StepDistribution, dropping zero-mass points."""
    clean = np.maximum.accumulate(row)
    masses = np.diff(clean, prepend=0.0)
    keep = masses > 0
    if not np.any(keep):
        keep[-1] = True
    return StepDistribution(thresholds[keep], clean[keep])


def predict(fit: IdrFit, x0: float) -> StepDistribution:
    """Predictive CDF at covariate x0, lower-neighbor convention.

    Returns the CDF of the largest fitted group value <= x0; covariates
    below the smallest group clamp to the first group.
    """
    x0 = float(x0)
    if not np.isfinite(x0):
        raise NonFiniteValueError(f"covariate {x0} is not finite")
    j = int(np.searchsorted(fit.groups, x0, side="right")) - 1
    if j < 0:
        j = 0
    return _row_to_step(fit.thresholds, fit.cdf_matrix[j])


def _instance_rows(fit: IdrFit, sample: PairedSample) -> np.ndarray:
    """Group row index for each instance; exact covariate match required."""
    idx = np.searchsorted(fit.groups, sample.x)
    idx = np.clip(idx, 0, len(fit.groups) - 1)
    bad = np.flatnonzero(fit.groups[idx] != sample.x)
    if bad.size:
        i = int(bad[0])
        raise SampleMismatchError(
            f"x[{i}] = {sample.x[i]} has no exact group in the fit"
        )
    return idx


def in_sample_distributions(
    fit: IdrFit, sample: PairedSample
) -> list[StepDistribution]:
    """Per-instance predictive CDFs in original instance order."""
    idx = _instance_rows(fit, sample)
    return [_row_to_step(fit.thresholds, fit.cdf_matrix[j]) for j in idx]
