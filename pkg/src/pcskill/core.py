"""Core domain types: paired samples, step distributions, gridded fields, reports.

All types are immutable after construction (arrays are marked read-only), so
instances can be shared freely across worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import cosdg

from .errors import (
    CoordinateMismatchError,
    EmptyEnsembleError,
    LastNotOneError,
    LatitudeOutOfRangeError,
    LengthMismatchError,
    NonFiniteValueError,
    NotMonotoneCdfError,
    NotSortedError,
    VerificationError,
)

CDF_TOL = 1e-12


def cos_lat_weight(lat_deg) -> np.ndarray | float:
    """Area weight of a gridpoint at the given latitude: max(cos(lat), 0).

    Cosine is evaluated in degrees directly, so +/-90 map to exactly zero
    weight with no radian round-off.
    """
    return np.maximum(cosdg(lat_deg), 0.0)


def _as_readonly_f64(a, name: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


def _check_finite(arr: np.ndarray, name: str) -> None:
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise NonFiniteValueError(
            f"{name}[{i}] = {arr[i]} is not finite", index=i
        )


@dataclass(frozen=True)
class PairedSample:
    """Aligned forecast/outcome vectors for one model at one location and lead.

    ``x`` holds the deterministic model output (model units), ``y`` the
    verifying outcomes (outcome units). Order is preserved exactly as given.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _as_readonly_f64(self.x, "x")
        y = _as_readonly_f64(self.y, "y")
        if len(x) != len(y):
            raise LengthMismatchError(
                f"x has length {len(x)} but y has length {len(y)}"
            )
        if len(x) < 1:
            raise LengthMismatchError("a sample needs at least one pair")
        _check_finite(x, "x")
        _check_finite(y, "y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class StepDistribution:
    """Discrete predictive CDF: jump locations and cumulative probabilities.

    Right-continuous convention: the CDF equals ``cdf[k]`` on
    ``[points[k], points[k+1])`` and 0 below ``points[0]``. The final value
    must be 1 (within 1e-12).
    """

    points: np.ndarray
    cdf: np.ndarray

    def __post_init__(self):
        points = _as_readonly_f64(self.points, "points")
        cdf = _as_readonly_f64(self.cdf, "cdf")
        if len(points) != len(cdf):
            raise LengthMismatchError(
                f"{len(points)} points but {len(cdf)} cdf values"
            )
        if len(points) < 1:
            raise LengthMismatchError("a step distribution needs >= 1 point")
        _check_finite(points, "points")
        _check_finite(cdf, "cdf")
        if np.any(np.diff(points) <= 0):
            raise NotSortedError("jump points must be strictly increasing")
        if np.any(np.diff(cdf) < 0):
            raise NotMonotoneCdfError("cdf values must be nondecreasing")
        if cdf[0] <= 0:
            raise NotMonotoneCdfError("leading cdf value must be positive")
        if abs(cdf[-1] - 1.0) > CDF_TOL:
            raise LastNotOneError(f"final cdf value is {cdf[-1]}, expected 1")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "cdf", cdf)

    @property
    def m(self) -> int:
        return len(self.points)

    def masses(self) -> np.ndarray:
        """Jump masses, i.e. first differences of the CDF (first jump from 0)."""
        return np.diff(self.cdf, prepend=0.0)


@dataclass(frozen=True)
class GridField:
    """One variable on a regular time x lat x lon grid.

    ``times`` are integer epoch seconds; latitudes are degrees in [-90, 90]
    and longitudes degrees in [0, 360), both strictly monotone. Values are
    float64 with IEEE NaN as the missing-data sentinel (infinities are
    rejected).
    """

    times: np.ndarray
    lats: np.ndarray
    lons: np.ndarray
    values: np.ndarray
    variable: str = ""
    units: str = ""

    def __post_init__(self):
        times = np.array(self.times, dtype=np.int64, copy=True).reshape(-1)
        lats = _as_readonly_f64(self.lats, "lats")
        lons = _as_readonly_f64(self.lons, "lons")
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 3:
            raise LengthMismatchError(
                f"values must be 3-d (time, lat, lon), got shape {values.shape}"
            )
        if values.shape != (len(times), len(lats), len(lons)):
            raise LengthMismatchError(
                f"values shape {values.shape} does not match coordinates "
                f"({len(times)}, {len(lats)}, {len(lons)})"
            )
        _check_finite(lats, "lats")
        _check_finite(lons, "lons")
        d = np.diff(lats)
        if len(lats) > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise NotSortedError("lats must be strictly monotone")
        d = np.diff(lons)
        if len(lons) > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise NotSortedError("lons must be strictly monotone")
        if np.any(np.abs(lats) > 90):
            raise LatitudeOutOfRangeError("latitudes must lie in [-90, 90]")
        if np.any((lons < 0) | (lons >= 360)):
            raise VerificationError("longitudes must lie in [0, 360)")
        if np.any(np.isinf(values)):
            raise NonFiniteValueError(
                "grid values must be finite or NaN (no infinities)"
            )
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "lats", lats)
        object.__setattr__(self, "lons", lons)
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape

    def cell_series(self, i_lat: int, i_lon: int) -> np.ndarray:
        return self.values[:, i_lat, i_lon]


def check_same_coords(a: GridField, b: GridField) -> None:
    """Raise CoordinateMismatchError naming the first differing coordinate."""
    for name in ("times", "lats", "lons"):
        ca, cb = getattr(a, name), getattr(b, name)
        if len(ca) != len(cb):
            raise CoordinateMismatchError(
                f"{name} have different lengths ({len(ca)} vs {len(cb)})"
            )
        diff = np.flatnonzero(ca != cb)
        if diff.size:
            i = int(diff[0])
            raise CoordinateMismatchError(
                f"{name}[{i}] differs: {ca[i]} vs {cb[i]}"
            )


@dataclass(frozen=True)
class CellResult:
    """Per-gridpoint PC summary."""

    lat: float
    lon: float
    n_used: int
    pc: float
    pc0: float
    pcs: float


@dataclass(frozen=True)
class EvalReport:
    """Gridded evaluation: per-cell PC/PC0/PCS plus latitude-weighted aggregate.

    ``excluded`` lists (lat, lon) of cells dropped for insufficient data; the
    aggregate is over the remaining cells with cos(latitude) weights
    renormalized to sum 1.
    """

    cells: tuple[CellResult, ...]
    excluded: tuple[tuple[float, float], ...]
    aggregate_pc: float
    aggregate_pc0: float
    aggregate_pcs: float
    model: str = ""
    truth_id: str = ""
    lead_days: int | None = None

    def __post_init__(self):
        for c in self.cells:
            if c.pc0 > 0:
                expect = (c.pc0 - c.pc) / c.pc0
                if abs(c.pcs - expect) > CDF_TOL:
                    raise VerificationError(
                        f"inconsistent cell pcs at ({c.lat}, {c.lon}): "
                        f"{c.pcs} vs {expect}"
                    )

    def recompute_aggregate(self) -> tuple[float, float, float]:
        """Latitude-weighted aggregate (pc, pc0, pcs) rebuilt from the rows.

        The skill aggregate divides the weighted PC0/PC sums, not the
        per-cell skills.
        """
        return aggregate_cells(self.cells)


def aggregate_cells(cells) -> tuple[float, float, float]:
    """cos-latitude weighted (pc, pc0, pcs) over CellResult rows.

    Weights are renormalized over exactly the cells given, so excluded cells
    simply do not participate.
    """
    cells = tuple(cells)
    if not cells:
        return float("nan"), float("nan"), 0.0
    lats = np.array([c.lat for c in cells])
    w = cos_lat_weight(lats)
    w = w / w.sum()
    pc = float(w @ np.array([c.pc for c in cells]))
    pc0 = float(w @ np.array([c.pc0 for c in cells]))
    # clamp against ulp-level crossings when the aggregate fit is skillless
    pcs = min(1.0, max(0.0, (pc0 - pc) / pc0)) if pc0 > 0 else 0.0
    return pc, pc0, pcs


def make_sample(x, y) -> PairedSample:
    """Validate and pair forecast and outcome vectors, preserving order.

    Raises LengthMismatchError or NonFiniteValueError (with the offending
    index) on invalid input.
    """
    return PairedSample(x, y)


def make_step_distribution(points, cdf) -> StepDistribution:
    """Validate jump locations and cumulative probabilities into a CDF."""
    return StepDistribution(points, cdf)


def from_ensemble(members) -> StepDistribution:
    """Empirical distribution of ensemble members.

    Jump points are the sorted unique member values; the CDF holds cumulative
    relative frequencies, so duplicated members get proportionally larger
    jumps.
    """
    arr = np.asarray(members, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise EmptyEnsembleError("ensemble has no members")
    _check_finite(arr, "members")
    points, counts = np.unique(arr, return_counts=True)
    cdf = np.cumsum(counts) / arr.size
    return StepDistribution(points, cdf)
