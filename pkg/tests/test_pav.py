"""Pool-adjacent-violators: worked cases, exact identities, brute-force oracles."""

from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcskill.errors import (
    AlphaOutOfRangeError,
    LengthMismatchError,
    NonFiniteValueError,
    NonPositiveWeightError,
)
from pcskill.pav import (
    PavResult,
    pav_antitonic,
    pav_isotonic,
    pav_quantile,
    weighted_left_quantile,
)


def minmax_fraction_oracle(values, weights):
    """Closed form of the weighted isotonic least-squares fit, in exact
    rational arithmetic.

    Evaluates both classical orientations — max over j <= i of the min over
    k >= i of the pooled mean of v[j..k], and min over k >= i of the max
    over j <= i — and checks they coincide before returning.
    """
    v = [Fraction(x) for x in values]
    w = [Fraction(x) for x in weights]
    n = len(v)

    def pooled(j, k):
        num = sum(v[t] * w[t] for t in range(j, k + 1))
        den = sum(w[t] for t in range(j, k + 1))
        return num / den

    out = []
    for i in range(n):
        maxmin = max(
            min(pooled(j, k) for k in range(i, n)) for j in range(i + 1)
        )
        minmax = min(
            max(pooled(j, k) for j in range(i + 1)) for k in range(i, n)
        )
        assert maxmin == minmax
        out.append(maxmin)
    return out


def pinball(u, alpha):
    return u * (alpha - (u < 0))


class TestWorkedCases:
    def test_already_isotonic_unchanged(self):
        r = pav_isotonic([1.0, 2.0, 3.0])
        assert r.fitted.tolist() == [1.0, 2.0, 3.0]

    def test_symmetric_pool(self):
        r = pav_isotonic([2.0, 1.0])
        assert r.fitted.tolist() == [1.5, 1.5]
        assert r.blocks == ((0, 2, 1.5),)

    def test_simple_violation(self):
        r = pav_isotonic([3.0, 1.0, 2.0])
        assert r.fitted.tolist() == [2.0, 2.0, 2.0]
        # the trailing 2.0 is no strict violation, so it stays its own block
        assert r.blocks == ((0, 2, 2.0), (2, 3, 2.0))

    def test_already_antitonic_unchanged(self):
        r = pav_antitonic([3.0, 2.0, 1.0])
        assert r.fitted.tolist() == [3.0, 2.0, 1.0]

    def test_antitonic_pair(self):
        r = pav_antitonic([1.0, 2.0])
        assert r.fitted.tolist() == [1.5, 1.5]

    def test_antitonic_weighted_pair(self):
        r = pav_antitonic([0.5, 1.0], weights=[2.0, 1.0])
        assert r.fitted.tolist() == [2.0 / 3.0, 2.0 / 3.0]

    def test_weighted_pool(self):
        r = pav_isotonic([0.5, 1.0, 0.9], weights=[1.0, 2.0, 1.0])
        # the last two pool to (2*1.0 + 1*0.9)/3
        expected = (2.0 * 1.0 + 0.9) / 3.0
        assert r.fitted[0] == 0.5
        assert r.fitted[1] == r.fitted[2] == pytest.approx(expected, abs=1e-15)

    def test_already_monotone_blocks(self):
        v = [1.0, 2.0, 2.0, 5.0]
        r = pav_isotonic(v)
        assert r.fitted.tolist() == v
        assert r.blocks == (
            (0, 1, 1.0),
            (1, 2, 2.0),
            (2, 3, 2.0),
            (3, 4, 5.0),
        )

    def test_antitonic_is_reversed_isotonic(self):
        v = [1.0, 3.0, 2.0, 0.0]
        w = [1.0, 2.0, 1.0, 3.0]
        a = pav_antitonic(v, w)
        b = pav_isotonic(v[::-1], w[::-1])
        assert np.array_equal(a.fitted, b.fitted[::-1])

    def test_quantile_already_isotonic(self):
        r = pav_quantile([1.0, 2.0, 3.0], alpha=0.5)
        assert r.fitted.tolist() == [1.0, 2.0, 3.0]

    def test_quantile_median_pair(self):
        r = pav_quantile([3.0, 1.0], alpha=0.5)
        assert r.fitted.tolist() == [1.0, 1.0]

    def test_quantile_high_level(self):
        # at alpha = 0.9 the pooled block keeps a high left quantile; an
        # optimal monotone fit always exists with entries drawn from the
        # data values, so exhaustive search over those candidates is exact
        data = [5.0, 1.0, 2.0, 4.0]
        r = pav_quantile(data, alpha=0.9)
        assert np.all(np.diff(r.fitted) >= 0)
        best = min(
            sum(pinball(v - c, 0.9) for v, c in zip(data, cand))
            for cand in combinations_with_replacement(sorted(data), len(data))
        )
        achieved = sum(pinball(v - c, 0.9) for v, c in zip(data, r.fitted))
        assert achieved == pytest.approx(best, abs=1e-12)


class TestValidation:
    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            pav_isotonic([1.0, 2.0], weights=[1.0])

    def test_empty(self):
        with pytest.raises(LengthMismatchError):
            pav_isotonic([])

    def test_nonfinite(self):
        with pytest.raises(NonFiniteValueError):
            pav_isotonic([1.0, np.nan])
        with pytest.raises(NonFiniteValueError):
            pav_isotonic([1.0, 2.0], weights=[1.0, np.inf])

    def test_nonpositive_weight(self):
        with pytest.raises(NonPositiveWeightError):
            pav_isotonic([1.0, 2.0], weights=[1.0, 0.0])

    def test_quantile_alpha_range(self):
        with pytest.raises(AlphaOutOfRangeError):
            pav_quantile([1.0], alpha=1.0)

    def test_blocks_partition_enforced(self):
        with pytest.raises(LengthMismatchError):
            PavResult(fitted=np.array([1.0, 2.0]), blocks=((0, 1, 1.0),))


class TestExactIdentities:
    def test_minmax_exact_on_integer_inputs(self):
        # integer values and weights make every partial sum exact in float64,
        # so the stack algorithm and the closed form agree bit for bit
        rng = np.random.default_rng(7)
        for _ in range(500):
            n = int(rng.integers(1, 9))
            v = rng.integers(-5, 6, size=n).astype(np.float64)
            w = rng.integers(1, 5, size=n).astype(np.float64)
            fitted = pav_isotonic(v, w).fitted
            oracle = minmax_fraction_oracle(v, w)
            assert all(
                fitted[i] == float(oracle[i]) for i in range(n)
            ), (v.tolist(), w.tolist())

    def test_minmax_close_on_float_inputs(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            v = rng.normal(size=n)
            w = rng.uniform(0.5, 3.0, size=n)
            fitted = pav_isotonic(v, w).fitted
            oracle = minmax_fraction_oracle(v, w)
            assert all(
                abs(fitted[i] - float(oracle[i])) < 1e-12 for i in range(n)
            )

    def test_weighted_mean_preserved(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(1, 40))
            v = rng.normal(size=n) * 10
            w = rng.uniform(0.1, 5.0, size=n)
            r = pav_isotonic(v, w)
            assert np.dot(w, r.fitted) == pytest.approx(
                np.dot(w, v), rel=1e-12, abs=1e-12
            )

    def test_idempotent(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            n = int(rng.integers(1, 30))
            v = rng.normal(size=n)
            w = rng.uniform(0.5, 2.0, size=n)
            once = pav_isotonic(v, w).fitted
            twice = pav_isotonic(once, w).fitted
            assert np.array_equal(once, twice)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=12)
)
def test_fitted_nondecreasing_and_blockwise_constant(vals):
    r = pav_isotonic(np.array(vals, dtype=np.float64))
    assert np.all(np.diff(r.fitted) >= 0)
    for start, stop, value in r.blocks:
        assert np.all(r.fitted[start:stop] == value)
    # block means are nondecreasing across blocks (equal-valued neighbors
    # stay separate: only strict violations are pooled)
    levels = [b[2] for b in r.blocks]
    assert all(a <= b for a, b in zip(levels, levels[1:]))


@settings(max_examples=200, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.floats(-50, 50, allow_nan=False),
            st.floats(0.1, 5, allow_nan=False),
        ),
        min_size=1,
        max_size=10,
    )
)
def test_isotonic_beats_random_monotone_challengers(pairs):
    v = np.array([p[0] for p in pairs])
    w = np.array([p[1] for p in pairs])
    r = pav_isotonic(v, w)
    loss = float(np.sum(w * (r.fitted - v) ** 2))
    rng = np.random.default_rng(123)
    for _ in range(20):
        cand = np.sort(rng.uniform(v.min() - 1, v.max() + 1, size=len(v)))
        cand_loss = float(np.sum(w * (cand - v) ** 2))
        assert loss <= cand_loss + 1e-9


class TestWeightedLeftQuantile:
    def test_matches_sorting_definition(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            n = int(rng.integers(1, 12))
            v = rng.integers(-4, 5, size=n).astype(np.float64)
            w = rng.integers(1, 4, size=n).astype(np.float64)
            alpha = float(rng.uniform(0.05, 0.95))
            got = weighted_left_quantile(v, w, alpha)
            order = np.argsort(v, kind="stable")
            cum = np.cumsum(w[order])
            target = alpha * cum[-1]
            expect = v[order][int(np.searchsorted(cum, target, side="left"))]
            assert got == expect

    def test_quantile_fit_monotone_and_blockwise_quantile(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            n = int(rng.integers(1, 12))
            v = rng.integers(-4, 5, size=n).astype(np.float64)
            alpha = float(rng.uniform(0.1, 0.9))
            r = pav_quantile(v, alpha=alpha)
            assert np.all(np.diff(r.fitted) >= 0)
            for start, stop, value in r.blocks:
                ones = np.ones(stop - start)
                assert value == weighted_left_quantile(
                    v[start:stop], ones, alpha
                )
