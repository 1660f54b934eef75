"""Pool-adjacent-violators engines.

``pav_isotonic`` solves weighted least-squares regression under a
nondecreasing constraint with a stack-based linear scan; ``pav_antitonic``
is its mirror image, and ``pav_quantile`` swaps the pooling statistic for a
weighted left quantile to minimize pinball loss instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    LengthMismatchError,
    NonFiniteValueError,
    NonPositiveWeightError,
)


@dataclass(frozen=True)
class PavResult:
    """Monotone fit plus its level-set structure.

    ``blocks`` holds (start, stop, pooled value) triples with half-open
    index ranges that partition ``range(len(fitted))``; ``fitted`` is
    constant and equal to the pooled value on each block.
    """

    fitted: np.ndarray
    blocks: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        fitted = np.asarray(self.fitted, dtype=np.float64)
        fitted.setflags(write=False)
        object.__setattr__(self, "fitted", fitted)
        object.__setattr__(self, "blocks", tuple(self.blocks))
        pos = 0
        for start, stop, _ in self.blocks:
            if start != pos or stop <= start:
                raise LengthMismatchError("blocks must partition the index range")
            pos = stop
        if pos != len(fitted):
            raise LengthMismatchError("blocks must cover all fitted values")


def _check_inputs(values, weights) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if weights is None:
        w = np.ones_like(v)
    else:
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if len(v) != len(w):
        raise LengthMismatchError(
            f"{len(v)} values but {len(w)} weights"
        )
    if len(v) == 0:
        raise LengthMismatchError("need at least one value")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValueError("values must be finite")
    if not np.all(np.isfinite(w)):
        raise NonFiniteValueError("weights must be finite")
    if np.any(w <= 0):
        raise NonPositiveWeightError("weights must be strictly positive")
    return v, w


def _clamp_nondecreasing(fitted: np.ndarray) -> np.ndarray:
    """Forward-propagate maxima to scrub sub-1e-12 float violations.

    The stack scan already produces nondecreasing block means, so this is
    an identity in practice; it guards downstream CDF validation against
    any future arithmetic change.
    """
    return np.maximum.accumulate(fitted)


def pav_isotonic(values, weights=None) -> PavResult:
    """Weighted least-squares fit under a nondecreasing constraint.

    Adjacent blocks are pooled (pooled value = weighted mean) while an
    earlier block exceeds a later one; a single left-to-right scan with a
    block stack runs in O(n).
    """
    v, w = _check_inputs(values, weights)
    n = len(v)
    start = np.empty(n, dtype=np.int64)
    vsum = np.empty(n, dtype=np.float64)
    wsum = np.empty(n, dtype=np.float64)
    mean = np.empty(n, dtype=np.float64)
    top = 0
    for i in range(n):
        start[top] = i
        vsum[top] = v[i] * w[i]
        wsum[top] = w[i]
        mean[top] = v[i]
        top += 1
        while top >= 2 and mean[top - 2] > mean[top - 1]:
            vsum[top - 2] += vsum[top - 1]
            wsum[top - 2] += wsum[top - 1]
            mean[top - 2] = vsum[top - 2] / wsum[top - 2]
            top -= 1
    fitted = np.empty(n, dtype=np.float64)
    blocks = []
    for b in range(top):
        lo = int(start[b])
        hi = int(start[b + 1]) if b + 1 < top else n
        fitted[lo:hi] = mean[b]
        blocks.append((lo, hi, float(mean[b])))
    fitted = _clamp_nondecreasing(fitted)
    return PavResult(fitted, tuple(blocks))


def pav_antitonic(values, weights=None) -> PavResult:
    """Weighted least-squares fit under a nonincreasing constraint.

    Implemented by reversing the input, fitting isotonic, and reversing
    the output (block indices are mapped back to the original order).
    """
    v, w = _check_inputs(values, weights)
    n = len(v)
    rev = pav_isotonic(v[::-1], w[::-1])
    fitted = rev.fitted[::-1].copy()
    blocks = tuple(
        (n - stop, n - start, value) for start, stop, value in reversed(rev.blocks)
    )
    return PavResult(fitted, blocks)


def weighted_left_quantile(values, weights, alpha: float) -> float:
    """Smallest v with weighted CDF(v) >= alpha (lower-quantile convention)."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    order = np.argsort(v, kind="stable")
    cum = np.cumsum(w[order])
    target = alpha * cum[-1]
    idx = int(np.searchsorted(cum, target, side="left"))
    if idx == len(cum):
        idx -= 1
    return float(v[order[idx]])


def pav_quantile(values, weights=None, alpha: float = 0.5) -> PavResult:
    """Isotonic fit minimizing weighted mean pinball loss at level alpha.

    Same pooling scan as the least-squares variant, but a merged block's
    value is the weighted left alpha-quantile of its members. Quantile
    pooling is not a running-sum update, so the pooled value is recomputed
    from the block's slice on every merge.
    """
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRangeError(f"alpha must be in (0, 1), got {alpha}")
    v, w = _check_inputs(values, weights)
    n = len(v)
    start = np.empty(n, dtype=np.int64)
    value = np.empty(n, dtype=np.float64)
    top = 0
    for i in range(n):
        start[top] = i
        value[top] = v[i]
        top += 1
        while top >= 2 and value[top - 2] > value[top - 1]:
            lo = start[top - 2]
            value[top - 2] = weighted_left_quantile(v[lo : i + 1], w[lo : i + 1], alpha)
            top -= 1
    fitted = np.empty(n, dtype=np.float64)
    blocks = []
    for b in range(top):
        lo = int(start[b])
        hi = int(start[b + 1]) if b + 1 < top else n
        fitted[lo:hi] = value[b]
        blocks.append((lo, hi, float(value[b])))
    fitted = _clamp_nondecreasing(fitted)
    return PavResult(fitted, tuple(blocks))
