"""CRPS of step distributions, potential CRPS (PC), and the PC skill score.

The CRPS is computed three independent ways (piecewise closed form, the
energy/double-sum identity, and numeric quadrature in the tests); PC is the
mean in-sample CRPS of the isotonic distributional regression fit, streamed
threshold by threshold so no group x threshold matrix is ever built.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import PairedSample, StepDistribution
from .errors import (
    DegenerateClimatologyWarning,
    LengthMismatchError,
    NonFiniteValueError,
    VerificationError,
)
from .idr import _instance_rows, fit_idr

_TOL = 1e-12


@dataclass(frozen=True)
class PcSummary:
    """PC, its climatological reference PC0, and the skill score PCS.

    ``degenerate`` marks constant-outcome samples, where PC0 = 0 and PCS
    is set to 0 by convention.
    """

    pc: float
    pc0: float
    pcs: float
    n: int
    degenerate: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise LengthMismatchError("summary needs n >= 1")
        if self.pc < -_TOL or self.pc0 < -_TOL:
            raise VerificationError("pc and pc0 must be nonnegative")
        if self.pc > self.pc0 + _TOL:
            raise VerificationError(
                f"pc = {self.pc} exceeds its climatological bound {self.pc0}"
            )
        if self.pc0 > 0 and abs(self.pcs - (self.pc0 - self.pc) / self.pc0) > _TOL:
            raise VerificationError("pcs inconsistent with pc and pc0")
        if not -_TOL <= self.pcs <= 1.0 + _TOL:
            raise VerificationError(f"pcs = {self.pcs} outside [0, 1]")


def _step_grid(F: StepDistribution, y: float) -> tuple[np.ndarray, np.ndarray]:
    """Sorted breakpoints (jumps plus y) and the CDF value on each segment."""
    z = np.union1d(F.points, [y])
    idx = np.searchsorted(F.points, z, side="right") - 1
    Fz = np.where(idx >= 0, F.cdf[np.maximum(idx, 0)], 0.0)
    return z, Fz


def crps(F: StepDistribution, y: float) -> float:
    """Continuous ranked probability score, exact piecewise integral.

    Integrates (F(z) - 1{y <= z})^2 between consecutive breakpoints; the
    regions below min(points, y) and above max(points, y) contribute
    nothing because the integrand vanishes there.
    """
    y = float(y)
    if not np.isfinite(y):
        raise NonFiniteValueError(f"outcome {y} is not finite")
    z, Fz = _step_grid(F, y)
    ind = (z >= y).astype(np.float64)
    diff = Fz[:-1] - ind[:-1]
    return float(np.sum(np.diff(z) * diff * diff))


def crps_energy(F: StepDistribution, y: float) -> float:
    """CRPS via the energy identity E|Y - y| - (1/2) E|Y - Y'|.

    Both expectations are direct sums over the jump masses; quadratic in
    the number of jumps, kept as an independent route for cross-checking.
    """
    y = float(y)
    if not np.isfinite(y):
        raise NonFiniteValueError(f"outcome {y} is not finite")
    t = F.points
    p = F.masses()
    e_out = float(np.sum(p * np.abs(t - y)))
    e_self = float(p @ np.abs(t[:, None] - t[None, :]) @ p)
    return e_out - 0.5 * e_self


def tw_crps(F: StepDistribution, y: float, threshold: float) -> float:
    """Threshold-weighted CRPS: the same integrand restricted to z >= threshold."""
    y = float(y)
    threshold = float(threshold)
    if not np.isfinite(y):
        raise NonFiniteValueError(f"outcome {y} is not finite")
    if np.isnan(threshold):
        raise NonFiniteValueError("threshold must not be NaN")
    lo = min(float(F.points[0]), y)
    if threshold <= lo:
        return crps(F, y)
    z, Fz = _step_grid(F, y)
    pos = int(np.searchsorted(z, threshold))
    if pos == len(z) or (pos > 0 and z[pos] != threshold):
        z = np.insert(z, pos, threshold)
        Fz = np.insert(Fz, pos, Fz[pos - 1] if pos > 0 else 0.0)
    z, Fz = z[pos:], Fz[pos:]
    if len(z) < 2:
        return 0.0
    ind = (z >= y).astype(np.float64)
    diff = Fz[:-1] - ind[:-1]
    return float(np.sum(np.diff(z) * diff * diff))


def pc0(y) -> float:
    """PC of the unconditional climatology: half the Gini mean difference.

    Equals (1/(2 n^2)) sum_ij |y_i - y_j|, evaluated in O(n log n) through
    the order-statistic identity (1/n^2) sum_j (2j - n - 1) y_(j).
    """
    arr = np.asarray(y, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise LengthMismatchError("need at least one outcome")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError("outcomes must be finite")
    n = arr.size
    ranked = np.sort(arr)
    coef = 2.0 * np.arange(1, n + 1) - n - 1
    return float(coef @ ranked) / (n * n)


def pc0_pairwise(y) -> float:
    """Quadratic-time double loop for pc0; retained as a cross-check oracle."""
    arr = np.asarray(y, dtype=np.float64).reshape(-1)
    n = arr.size
    return float(np.abs(arr[:, None] - arr[None, :]).sum()) / (2 * n * n)


def pcs(pc_value: float, pc0_value: float) -> float:
    """Skill score (pc0 - pc)/pc0; 0 with a warning when pc0 = 0.

    The ratio is clamped to [0, 1]: pc <= pc0 holds in exact arithmetic,
    but the two values come from different summation routes and can cross
    by an ulp when the fit degenerates to climatology.
    """
    if pc_value < -_TOL or pc0_value < pc_value - _TOL:
        raise VerificationError(
            f"need 0 <= pc <= pc0, got pc = {pc_value}, pc0 = {pc0_value}"
        )
    if pc0_value == 0.0:
        warnings.warn(
            "all outcomes equal: climatological score is zero, skill set to 0",
            DegenerateClimatologyWarning,
            stacklevel=2,
        )
        return 0.0
    return min(1.0, max(0.0, (pc0_value - pc_value) / pc0_value))


def pc(sample: PairedSample) -> PcSummary:
    """Potential CRPS of the model output in ``sample``.

    Fits the isotonic distributional regression in-sample and returns the
    mean CRPS of the fitted CDFs together with the climatological reference
    and the skill score. The fit and the scoring are fused into one pass
    over thresholds with O(groups) working memory.
    """
    _, inv_x, counts = np.unique(sample.x, return_inverse=True, return_counts=True)
    thresholds, y_counts = np.unique(sample.y, return_counts=True)
    n = sample.n
    order = np.argsort(sample.y, kind="stable")
    group_by_y = inv_x[order].astype(np.int64)
    thr_ptr = np.zeros(len(thresholds) + 1, dtype=np.int64)
    np.cumsum(y_counts, out=thr_ptr[1:])
    total = _kernels._pc_total(
        thresholds, counts.astype(np.float64), group_by_y, thr_ptr
    )
    pc_value = total / n
    pc0_value = pc0(sample.y)
    if pc0_value == 0.0:
        return PcSummary(pc=pc_value, pc0=0.0, pcs=0.0, n=n, degenerate=True)
    return PcSummary(
        pc=pc_value,
        pc0=pc0_value,
        pcs=min(1.0, max(0.0, (pc0_value - pc_value) / pc0_value)),
        n=n,
        degenerate=False,
    )


def mean_crps(forecasts, y) -> float:
    """Arithmetic mean of crps(F_i, y_i) over aligned pairs."""
    outcomes = np.asarray(y, dtype=np.float64).reshape(-1)
    forecasts = list(forecasts)
    if len(forecasts) != len(outcomes):
        raise LengthMismatchError(
            f"{len(forecasts)} forecasts but {len(outcomes)} outcomes"
        )
    if not forecasts:
        raise LengthMismatchError("need at least one forecast")
    return float(np.mean([crps(F, yi) for F, yi in zip(forecasts, outcomes)]))


def in_sample_crps_series(sample: PairedSample) -> np.ndarray:
    """Per-instance CRPS of the in-sample IDR fit, in instance order.

    Vectorized over the full CDF matrix, so memory grows with
    groups x thresholds; intended for the series lengths used in
    per-gridpoint testing (hundreds to a few thousand instances).
    """
    fit = fit_idr(sample)
    idx = _instance_rows(fit, sample)
    z = fit.thresholds
    if len(z) == 1:
        return np.zeros(sample.n, dtype=np.float64)
    rows = fit.cdf_matrix[idx]
    ind = (z[None, :] >= sample.y[:, None]).astype(np.float64)
    diff = rows[:, :-1] - ind[:, :-1]
    return (diff * diff) @ np.diff(z)
