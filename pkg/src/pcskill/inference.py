"""Block permutation test for equal mean score between two competing models.

The score-difference series is cut into consecutive blocks of length
2 x lead_days (the last block may be shorter and is kept), each block gets an
independent random sign per permutation sample, and the statistic is the mean
of the signed series. The one-sided p-value ranks the actual statistic among
the permutation statistics with half weight for ties, so a fully tied null
yields p = 0.5 + 1/(2N) and swapping the models maps p to 1 - p + 1/N.

Per-cell randomness in gridded comparisons is derived from
numpy.random.SeedSequence([seed, cell_index]) so every cell owns an
independent stream regardless of scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import GridField, check_same_coords, make_sample
from .errors import EmptySeriesError, LengthMismatchError, VerificationError
from .grid import MIN_PAIRS_PER_CELL, resolve_threads
from .scoring import in_sample_crps_series

DEFAULT_PERMUTATIONS = 1000


@dataclass(frozen=True)
class PermutationResult:
    """One-sided block permutation test outcome.

    ``p_value`` is small when model A (the first series) scores better;
    ``actual_stat`` is the observed mean score difference a - b in outcome
    units; ``block_length`` is 2 x lead_days.
    """

    p_value: float
    actual_stat: float
    n_permutations: int
    block_length: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.p_value <= 1.0:
            raise VerificationError(
                f"p-value {self.p_value} outside (0, 1]"
            )
        if self.n_permutations < 1:
            raise VerificationError("need at least one permutation sample")
        if self.block_length < 1:
            raise VerificationError("block length must be positive")


def block_permutation_test(
    scores_a,
    scores_b,
    lead_days: int,
    n_permutations: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
) -> PermutationResult:
    """Test mean(scores_a) < mean(scores_b) against sign-flipped blocks.

    All permutation statistics and the actual statistic go through one matrix
    product, so ties are detected on bit-identical arithmetic. The rank rule
    R = #{stats < actual} + (#{stats == actual} + 1)/2 gives p = R/N capped
    at 1, hence p >= 1/(2N) without an explicit clip.
    """
    a = np.asarray(scores_a, dtype=np.float64).reshape(-1)
    b = np.asarray(scores_b, dtype=np.float64).reshape(-1)
    if len(a) != len(b):
        raise LengthMismatchError(
            f"score series lengths differ: {len(a)} vs {len(b)}"
        )
    n = len(a)
    if n == 0:
        raise EmptySeriesError("score series are empty")
    if lead_days < 1:
        raise VerificationError(f"lead_days must be >= 1, got {lead_days}")
    if n_permutations < 1:
        raise VerificationError(
            f"n_permutations must be >= 1, got {n_permutations}"
        )

    d = a - b
    block_length = 2 * lead_days
    starts = np.arange(0, n, block_length)
    block_sums = np.add.reduceat(d, starts)
    n_blocks = len(starts)

    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(n_permutations, n_blocks))
    signs = signs.astype(np.float64) * 2.0 - 1.0
    coeff = np.vstack([np.ones((1, n_blocks)), signs])
    allstats = (coeff @ block_sums) / n
    actual = allstats[0]
    stats = allstats[1:]

    rank = (
        np.count_nonzero(stats < actual)
        + 0.5 * np.count_nonzero(stats == actual)
        + 0.5
    )
    p = min(rank / n_permutations, 1.0)
    return PermutationResult(
        p_value=p,
        actual_stat=float(actual),
        n_permutations=n_permutations,
        block_length=block_length,
        seed=seed,
    )


def cell_seed(seed: int, cell_index: int) -> int:
    """Deterministic per-cell seed derived from (seed, cell index)."""
    ss = np.random.SeedSequence([seed, cell_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class PValueField:
    """Per-gridpoint one-sided p-values for model A against model B.

    NaN marks cells with fewer than 2 complete (a, b, truth) triples.
    """

    lats: np.ndarray
    lons: np.ndarray
    p: np.ndarray
    n_used: np.ndarray
    lead_days: int
    n_permutations: int
    seed: int

    def __post_init__(self):
        lats = np.asarray(self.lats, dtype=np.float64)
        lons = np.asarray(self.lons, dtype=np.float64)
        p = np.asarray(self.p, dtype=np.float64)
        n_used = np.asarray(self.n_used, dtype=np.int64)
        if p.shape != (len(lats), len(lons)) or n_used.shape != p.shape:
            raise LengthMismatchError(
                f"p-value grid shape {p.shape} does not match coordinates"
            )
        finite = p[np.isfinite(p)]
        if np.any((finite <= 0) | (finite > 1)):
            raise VerificationError("p-values must lie in (0, 1]")
        for arr in (lats, lons, p, n_used):
            arr.setflags(write=False)
        object.__setattr__(self, "lats", lats)
        object.__setattr__(self, "lons", lons)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n_used", n_used)


def gridpoint_p_values(
    model_a: GridField,
    model_b: GridField,
    truth: GridField,
    lead_days: int,
    n_permutations: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
    threads: int | None = None,
) -> PValueField:
    """Per-cell block permutation p-values comparing two forecast fields.

    Each cell fits both models' in-sample conditional CDFs against the truth
    series (complete triples only), scores them per time step, and tests the
    mean score difference. Small p favours model A at that cell.
    """
    check_same_coords(model_a, truth)
    check_same_coords(model_b, truth)
    n_lat, n_lon = len(truth.lats), len(truth.lons)
    p = np.full((n_lat, n_lon), np.nan)
    n_used = np.zeros((n_lat, n_lon), dtype=np.int64)

    def test_cell(idx: int) -> None:
        i_lat, i_lon = divmod(idx, n_lon)
        xa = model_a.cell_series(i_lat, i_lon)
        xb = model_b.cell_series(i_lat, i_lon)
        y = truth.cell_series(i_lat, i_lon)
        mask = np.isfinite(xa) & np.isfinite(xb) & np.isfinite(y)
        n_used[i_lat, i_lon] = int(mask.sum())
        if n_used[i_lat, i_lon] < MIN_PAIRS_PER_CELL:
            return
        scores_a = in_sample_crps_series(make_sample(xa[mask], y[mask]))
        scores_b = in_sample_crps_series(make_sample(xb[mask], y[mask]))
        result = block_permutation_test(
            scores_a,
            scores_b,
            lead_days,
            n_permutations=n_permutations,
            seed=cell_seed(seed, idx),
        )
        p[i_lat, i_lon] = result.p_value

    n_items = n_lat * n_lon
    workers = min(resolve_threads(threads), max(n_items, 1))
    if workers == 1:
        for i in range(n_items):
            test_cell(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(test_cell, range(n_items)))

    return PValueField(
        lats=truth.lats,
        lons=truth.lons,
        p=p,
        n_used=n_used,
        lead_days=lead_days,
        n_permutations=n_permutations,
        seed=seed,
    )


__all__ = [
    "DEFAULT_PERMUTATIONS",
    "PValueField",
    "PermutationResult",
    "block_permutation_test",
    "cell_seed",
    "gridpoint_p_values",
]
