"""Permutation calibration and the fixed-threshold decision rule."""

import numpy as np
import pytest

from rkstest import (
    Label,
    PValueMode,
    SampleSet,
    derive_seed,
    energy_distance,
    fixed_threshold_test,
    permutation_test,
)


def _ss(rows, label=Label.X):
    return SampleSet(np.asarray(rows, dtype=float), label)


def _indicator(x, y):
    """1.0 exactly when the pseudo-x block is the original {10, 11}."""
    return 1.0 if sorted(x.data[:, 0].tolist()) == [10.0, 11.0] else 0.0


class TestPermutationTest:
    def test_constant_statistic_gives_p_one(self):
        x, y = _ss([[0.0], [1.0]]), _ss([[2.0], [3.0]], Label.Y)
        result = permutation_test(x, y, lambda a, b: 3.0, B=4, alpha=0.05, seed=1)
        assert result.p_value == 1.0
        assert not result.reject

    def test_no_permutation_reaches_the_observed_value(self):
        x, y = _ss([[10.0], [11.0]]), _ss([[20.0], [21.0]], Label.Y)
        plus = permutation_test(
            x, y, _indicator, B=4, alpha=0.05, seed=0, mode=PValueMode.PLUS_ONE
        )
        paper = permutation_test(
            x, y, _indicator, B=4, alpha=0.05, seed=0, mode=PValueMode.PAPER_EXACT
        )
        assert plus.observed == 1.0
        np.testing.assert_array_equal(plus.permuted, np.zeros(4))
        assert plus.p_value == 0.2  # (1 + 0) / (4 + 1)
        assert paper.p_value == 0.0

    def test_reject_is_the_comparison_of_p_with_alpha(self):
        x, y = _ss([[10.0], [11.0]]), _ss([[20.0], [21.0]], Label.Y)
        at = permutation_test(x, y, _indicator, B=4, alpha=0.2, seed=0)
        below = permutation_test(x, y, _indicator, B=4, alpha=0.19, seed=0)
        assert at.p_value == below.p_value == 0.2
        assert at.reject
        assert not below.reject

    def test_plus_one_p_value_is_bounded_away_from_zero(self):
        rng = np.random.default_rng(70)
        x = SampleSet(rng.normal(size=(6, 1)), Label.X)
        y = SampleSet(rng.normal(5.0, 1.0, size=(6, 1)), Label.Y)
        for B in (1, 4, 19, 99):
            result = permutation_test(x, y, energy_distance, B=B, alpha=0.05, seed=2)
            assert result.p_value >= 1.0 / (B + 1)

    def test_seeded_runs_are_bitwise_identical(self):
        rng = np.random.default_rng(71)
        x = SampleSet(rng.normal(size=(8, 2)), Label.X)
        y = SampleSet(rng.normal(0.5, 1.0, size=(8, 2)), Label.Y)
        a = permutation_test(x, y, energy_distance, B=25, alpha=0.05, seed=9)
        b = permutation_test(x, y, energy_distance, B=25, alpha=0.05, seed=9)
        assert a.p_value == b.p_value
        np.testing.assert_array_equal(a.permuted, b.permuted)

    def test_thread_count_does_not_change_the_result(self):
        x, y = _ss([[10.0], [11.0]]), _ss([[20.0], [21.0]], Label.Y)
        one = permutation_test(x, y, _indicator, B=16, alpha=0.05, seed=5, threads=1)
        two = permutation_test(x, y, _indicator, B=16, alpha=0.05, seed=5, threads=2)
        assert one.p_value == two.p_value
        np.testing.assert_array_equal(one.permuted, two.permuted)

    def test_rejects_nonpositive_permutation_count(self):
        x, y = _ss([[0.0]]), _ss([[1.0]], Label.Y)
        with pytest.raises(ValueError):
            permutation_test(x, y, energy_distance, B=0, alpha=0.05, seed=0)

    def test_holds_its_level_on_null_data(self):
        rejections = 0
        for r in range(400):
            rng = np.random.default_rng(derive_seed(3, "val", r))
            x = SampleSet(rng.normal(size=(20, 1)), Label.X)
            y = SampleSet(rng.normal(size=(20, 1)), Label.Y)
            result = permutation_test(
                x,
                y,
                energy_distance,
                B=99,
                alpha=0.05,
                seed=derive_seed(3, "val", r, "perm"),
            )
            rejections += result.reject
        assert 0.02 <= rejections / 400 <= 0.09


class TestFixedThreshold:
    def test_zero_statistic_never_rejects(self):
        for total in (2, 16, 1000):
            assert not fixed_threshold_test(0.0, total // 2, total - total // 2)

    def test_threshold_boundary_is_strict_at_sixteen_points(self):
        # 16 ** -0.25 is exactly 0.5, so the boundary is representable
        assert not fixed_threshold_test(0.5, 8, 8)
        assert fixed_threshold_test(np.nextafter(0.5, 1.0), 8, 8)

    def test_threshold_boundary_is_strict_at_256_points(self):
        assert not fixed_threshold_test(0.25, 128, 128)
        assert fixed_threshold_test(np.nextafter(0.25, 1.0), 128, 128)

    def test_constant_scales_the_threshold(self):
        assert fixed_threshold_test(0.6, 8, 8, c=1.0)
        assert not fixed_threshold_test(0.6, 8, 8, c=2.0)

    def test_threshold_shrinks_while_its_root_n_scaling_grows(self):
        totals = (16, 256, 4096)
        thresholds = [float(p) ** -0.25 for p in totals]
        assert thresholds == sorted(thresholds, reverse=True)
        scaled = [t * np.sqrt(p) for t, p in zip(thresholds, totals)]
        assert scaled == sorted(scaled)
