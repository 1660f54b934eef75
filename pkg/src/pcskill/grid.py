"""Gridded evaluation: per-cell PC with cos-latitude weighted aggregation.

Each gridpoint is scored independently from its own (forecast, truth) time
series, so cells are natural work items for a thread pool. The report's cell
order is fixed by coordinates (latitude-major, then longitude), never by
completion order, and the aggregate is rebuilt from the ordered rows so a
parallel run is bit-identical to a serial one.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    CellResult,
    EvalReport,
    GridField,
    aggregate_cells,
    check_same_coords,
    cos_lat_weight,
    make_sample,
)
from .errors import CoordinateMismatchError, LatitudeOutOfRangeError
from .scoring import pc

MIN_PAIRS_PER_CELL = 2


def lat_weight(lat_degrees: float) -> float:
    """Area weight of a latitude ring: cos(latitude), clamped at 0.

    Raises LatitudeOutOfRangeError outside [-90, 90].
    """
    arr = np.asarray(lat_degrees, dtype=np.float64)
    if np.any(np.abs(arr) > 90) or np.any(~np.isfinite(arr)):
        raise LatitudeOutOfRangeError(
            f"latitude {lat_degrees} outside [-90, 90]"
        )
    w = cos_lat_weight(arr)
    return float(w) if np.isscalar(lat_degrees) or arr.ndim == 0 else w


def resolve_threads(threads: int | None) -> int:
    """Worker count: the given value, else $PC_THREADS, else all cores."""
    if threads is None:
        env = os.environ.get("PC_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _map_cells(fn, n_items: int, threads: int | None):
    """Apply fn to range(n_items), preserving index order of the results."""
    workers = min(resolve_threads(threads), max(n_items, 1))
    if workers == 1:
        return [fn(i) for i in range(n_items)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_items)))


def evaluate_grid(
    forecast: GridField,
    truth: GridField,
    threads: int | None = None,
) -> EvalReport:
    """Per-cell PC/PC0/PCS of a forecast field against a truth field.

    Within each cell, only time steps where both fields are finite are used;
    cells with fewer than 2 complete pairs are excluded from the aggregate
    (their cos-latitude weights are renormalized away) and listed in the
    report. The aggregate skill divides the weighted PC0/PC sums rather than
    averaging per-cell skills.
    """
    check_same_coords(forecast, truth)
    n_lat, n_lon = len(forecast.lats), len(forecast.lons)

    def score_cell(idx: int):
        i_lat, i_lon = divmod(idx, n_lon)
        lat = float(forecast.lats[i_lat])
        lon = float(forecast.lons[i_lon])
        x = forecast.cell_series(i_lat, i_lon)
        y = truth.cell_series(i_lat, i_lon)
        mask = np.isfinite(x) & np.isfinite(y)
        n_used = int(mask.sum())
        if n_used < MIN_PAIRS_PER_CELL:
            return lat, lon, None
        summary = pc(make_sample(x[mask], y[mask]))
        return lat, lon, CellResult(
            lat=lat,
            lon=lon,
            n_used=n_used,
            pc=summary.pc,
            pc0=summary.pc0,
            pcs=summary.pcs,
        )

    rows = _map_cells(score_cell, n_lat * n_lon, threads)
    cells = tuple(cell for _, _, cell in rows if cell is not None)
    excluded = tuple((lat, lon) for lat, lon, cell in rows if cell is None)
    agg_pc, agg_pc0, agg_pcs = aggregate_cells(cells)
    return EvalReport(
        cells=cells,
        excluded=excluded,
        aggregate_pc=agg_pc,
        aggregate_pc0=agg_pc0,
        aggregate_pcs=agg_pcs,
    )


@dataclass(frozen=True)
class SkillCell:
    """Per-gridpoint skill of a model's PC against a reference score."""

    lat: float
    lon: float
    skill: float
    degenerate: bool = False


def skill_vs_reference(
    report: EvalReport, reference: EvalReport
) -> tuple[SkillCell, ...]:
    """Per-cell skill 1 - pc/ref of a model report against a reference report.

    Cells must line up one-to-one by (lat, lon). Cells whose reference score
    is 0 get NaN skill and are flagged degenerate instead of dividing by zero.
    """
    if len(report.cells) != len(reference.cells):
        raise CoordinateMismatchError(
            f"reports have {len(report.cells)} vs {len(reference.cells)} cells"
        )
    out = []
    for c, r in zip(report.cells, reference.cells):
        if (c.lat, c.lon) != (r.lat, r.lon):
            raise CoordinateMismatchError(
                f"cell ({c.lat}, {c.lon}) vs ({r.lat}, {r.lon})"
            )
        if r.pc > 0:
            out.append(SkillCell(c.lat, c.lon, 1.0 - c.pc / r.pc))
        else:
            out.append(SkillCell(c.lat, c.lon, float("nan"), degenerate=True))
    return tuple(out)


__all__ = [
    "MIN_PAIRS_PER_CELL",
    "SkillCell",
    "evaluate_grid",
    "lat_weight",
    "resolve_threads",
    "skill_vs_reference",
    "cos_lat_weight",
]
