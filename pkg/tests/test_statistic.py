"""Statistic layer: exact oracles, surrogates, and the dispatch front end."""

import numpy as np
import pytest
from scipy.stats import ks_2samp

from rkstest import (
    DegenerateScale,
    DimensionMismatch,
    K0Surrogate,
    Label,
    OptConfig,
    RksConfig,
    Role,
    SampleSet,
    SettingName,
    SettingSpec,
    TooLarge,
    canonical_pair,
    compute_rks,
    derive_seed,
    discrepancy,
    k0_surrogate,
    path_seminorm,
    quasi_uniform_directions,
    rks_exact_1d,
    rks_exact_halfspace_2d,
    rks_grid_oracle,
    standardize,
)
from rkstest.gen import sample


def _ss(rows, label=Label.X):
    return SampleSet(np.asarray(rows, dtype=float), label)


def _swap_labels(x, y):
    return SampleSet(y.data, Label.X), SampleSet(x.data, Label.Y)


class TestQuasiUniformDirections:
    def test_one_dimension_is_both_signs(self):
        np.testing.assert_array_equal(
            quasi_uniform_directions(8, 1), np.array([[1.0], [-1.0]])
        )

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_unit_rows_of_requested_count(self, d):
        dirs = quasi_uniform_directions(48, d)
        assert dirs.shape == (48, d)
        np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-12)

    def test_deterministic(self):
        np.testing.assert_array_equal(
            quasi_uniform_directions(32, 5), quasi_uniform_directions(32, 5)
        )

    def test_directions_are_distinct(self):
        dirs = quasi_uniform_directions(64, 2)
        assert len({tuple(row) for row in dirs}) == 64


class TestExact1d:
    def test_pinned_interleaved_example(self):
        value = rks_exact_1d(_ss([[0.1], [0.9]]), _ss([[0.4], [0.6]], Label.Y))
        assert value == 0.5

    def test_identical_samples_score_zero(self):
        x = _ss([[0.3], [1.2], [-0.5]])
        assert rks_exact_1d(x, SampleSet(x.data, Label.Y)) == 0.0

    def test_separated_singletons_score_one(self):
        assert rks_exact_1d(_ss([[0.0]]), _ss([[1.0]], Label.Y)) == 1.0

    def test_matches_the_classical_two_sample_ks_statistic(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            x = rng.normal(size=(rng.integers(2, 40), 1))
            y = rng.normal(0.3, 1.4, size=(rng.integers(2, 40), 1))
            ours = rks_exact_1d(_ss(x), _ss(y, Label.Y))
            ref = ks_2samp(x.ravel(), y.ravel()).statistic
            assert abs(ours - ref) <= 1e-12

    def test_matches_ks_on_heavily_tied_data(self):
        rng = np.random.default_rng(8)
        x = rng.integers(0, 5, size=30).astype(float).reshape(-1, 1)
        y = rng.integers(1, 6, size=22).astype(float).reshape(-1, 1)
        ours = rks_exact_1d(_ss(x), _ss(y, Label.Y))
        assert abs(ours - ks_2samp(x.ravel(), y.ravel()).statistic) <= 1e-12

    def test_agrees_bitwise_with_the_degree_zero_grid_scan(self):
        rng = np.random.default_rng(3)
        x = _ss(rng.normal(size=(13, 1)))
        y = _ss(rng.normal(0.4, 1.3, size=(9, 1)), Label.Y)
        assert rks_exact_1d(x, y) == rks_grid_oracle(x, y, 0, 2, 0)

    def test_swap_symmetry_is_bitwise(self):
        rng = np.random.default_rng(5)
        x = _ss(rng.normal(size=(11, 1)))
        y = _ss(rng.normal(0.2, 2.0, size=(17, 1)), Label.Y)
        assert rks_exact_1d(x, y) == rks_exact_1d(*_swap_labels(x, y))

    def test_rejects_multivariate_input(self):
        with pytest.raises(DimensionMismatch):
            rks_exact_1d(_ss([[0.0, 1.0]]), _ss([[1.0, 0.0]], Label.Y))


class TestExactHalfspace2d:
    def test_identical_samples_score_zero(self):
        x = _ss([[0.0, 1.0], [2.0, -1.0]])
        assert rks_exact_halfspace_2d(x, SampleSet(x.data, Label.Y)) == 0.0

    def test_separated_clusters_score_one(self):
        x = _ss([[1.0, 0.0], [1.0, 1.0]])
        y = _ss([[-1.0, 0.0], [-1.0, 1.0]], Label.Y)
        assert rks_exact_halfspace_2d(x, y) == 1.0

    def test_matches_a_dense_direction_scan(self):
        rng = np.random.default_rng(15)
        x = _ss(rng.normal(size=(14, 2)))
        y = _ss(rng.normal(0.5, 1.0, size=(11, 2)), Label.Y)
        exact = rks_exact_halfspace_2d(x, y)
        assert abs(exact - rks_grid_oracle(x, y, 0, 3600, 0)) <= 1e-12

    def test_rotation_invariance(self):
        rng = np.random.default_rng(15)
        x = _ss(rng.normal(size=(14, 2)))
        y = _ss(rng.normal(0.5, 1.0, size=(11, 2)), Label.Y)
        base = rks_exact_halfspace_2d(x, y)
        theta = 0.7
        rot = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        rotated = rks_exact_halfspace_2d(
            SampleSet(x.data @ rot.T, Label.X), SampleSet(y.data @ rot.T, Label.Y)
        )
        assert abs(base - rotated) <= 1e-12

    def test_swap_symmetry_is_bitwise(self):
        rng = np.random.default_rng(16)
        x = _ss(rng.normal(size=(9, 2)))
        y = _ss(rng.normal(0.4, 1.2, size=(12, 2)), Label.Y)
        assert rks_exact_halfspace_2d(x, y) == rks_exact_halfspace_2d(
            *_swap_labels(x, y)
        )

    def test_rejects_oversized_instances(self):
        rng = np.random.default_rng(2)
        x = _ss(rng.normal(size=(201, 2)))
        y = _ss(rng.normal(size=(200, 2)), Label.Y)
        with pytest.raises(TooLarge):
            rks_exact_halfspace_2d(x, y)

    def test_rejects_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            rks_exact_halfspace_2d(_ss([[0.0]]), _ss([[1.0]], Label.Y))


class TestGridOracle:
    def test_pinned_degree_one_example(self):
        value = rks_grid_oracle(_ss([[1.0]]), _ss([[0.0]], Label.Y), 1, 2, 64)
        assert value == 1.0

    def test_identical_samples_score_zero(self):
        x = _ss([[0.5, -1.0], [2.0, 0.25]])
        y = SampleSet(x.data, Label.Y)
        assert rks_grid_oracle(x, y, 1, 60, 16) == 0.0

    def test_nonnegative_and_swap_symmetric(self):
        rng = np.random.default_rng(30)
        x = _ss(rng.normal(size=(10, 2)))
        y = _ss(rng.normal(0.6, 1.0, size=(13, 2)), Label.Y)
        for k in (0, 1, 2):
            v = rks_grid_oracle(x, y, k, 90, 16)
            assert v >= 0.0
            assert v == rks_grid_oracle(*_swap_labels(x, y), k, 90, 16)


class TestK0Surrogate:
    def test_separated_singletons(self):
        pair = standardize(_ss([[-1.0]]), _ss([[1.0]], Label.Y))
        w, b, value = k0_surrogate(pair)
        assert value == 1.0
        assert abs(abs(w[0]) - 1.0) <= 1e-12
        assert b >= 0.0

    def test_identical_samples_score_zero(self):
        rng = np.random.default_rng(4)
        data = rng.normal(size=(10, 2))
        pair = standardize(SampleSet(data, Label.X), SampleSet(data, Label.Y))
        _, b, value = k0_surrogate(pair)
        assert value == 0.0
        assert b == 0.0

    def test_recovers_the_separating_axis_of_a_thin_shift(self):
        hits = 0
        for i in range(50):
            x = sample(
                SettingSpec(SettingName.PANCAKE_SHIFT, 2, 3.0, Role.P),
                512,
                derive_seed(42, "pk", i, "x"),
            )
            y = sample(
                SettingSpec(SettingName.PANCAKE_SHIFT, 2, 3.0, Role.Q),
                512,
                derive_seed(42, "pk", i, "y"),
            )
            w, _, _ = k0_surrogate(standardize(x, y), seed=i)
            if abs(w[0]) > 0.9:
                hits += 1
        assert hits >= 45


class TestComputeRks:
    def test_config_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            RksConfig(k=-1)

    def test_rejects_mismatched_dimensions(self):
        with pytest.raises(DimensionMismatch):
            compute_rks(_ss([[0.0, 1.0]]), _ss([[1.0]], Label.Y), RksConfig(k=0))

    def test_degenerate_scale_returns_zero(self):
        x = _ss([[5.0, 5.0]])
        y = _ss([[5.0, 5.0]], Label.Y)
        result = compute_rks(x, y, RksConfig(k=1))
        assert result.value == 0.0
        assert result.trace == ()
        assert result.restarts_used == 0
        assert result.witness is not None

    def test_pinned_degree_zero_example(self):
        result = compute_rks(
            _ss([[0.1], [0.9]]), _ss([[0.4], [0.6]], Label.Y), RksConfig(k=0)
        )
        assert abs(result.value - 0.5) <= 1e-12

    def test_pinned_degree_one_example(self):
        result = compute_rks(
            _ss([[1.0, 0.0]]), _ss([[-1.0, 0.0]], Label.Y), RksConfig(k=1), seed=0
        )
        assert abs(result.value - 1.0) <= 0.02
        assert len(result.trace) == OptConfig().iterations + 1

    def test_grid_oracle_surrogate_matches_the_exact_univariate_statistic(self):
        rng = np.random.default_rng(44)
        cfg = RksConfig(k=0, surrogate_k0=K0Surrogate.GRID_ORACLE)
        for _ in range(10):
            x = _ss(rng.normal(size=(rng.integers(3, 30), 1)))
            y = _ss(rng.normal(0.5, 1.2, size=(rng.integers(3, 30), 1)), Label.Y)
            result = compute_rks(x, y, cfg)
            assert abs(result.value - rks_exact_1d(x, y)) <= 1e-12

    def test_logistic_surrogate_never_beats_the_exact_statistic(self):
        rng = np.random.default_rng(45)
        cfg = RksConfig(k=0)
        for _ in range(10):
            x = _ss(rng.normal(size=(rng.integers(3, 30), 1)))
            y = _ss(rng.normal(0.5, 1.2, size=(rng.integers(3, 30), 1)), Label.Y)
            result = compute_rks(x, y, cfg)
            assert result.value <= rks_exact_1d(x, y) + 1e-12

    def test_value_ties_out_with_trace_witness_and_scale(self):
        rng = np.random.default_rng(7)
        x = _ss(rng.normal(size=(20, 2)))
        y = _ss(rng.normal(0.7, 1.0, size=(25, 2)), Label.Y)
        result = compute_rks(x, y, RksConfig(k=1), seed=5)
        scale = result.standardization.scale
        best = max(v for _, v in result.trace)
        assert abs(result.value - best * scale) <= 1e-12
        assert abs(path_seminorm(result.witness) - 1.0) <= 1e-12
        pair = standardize(*canonical_pair(x, y))
        assert abs(result.value - abs(discrepancy(result.witness, pair)) * scale) <= 1e-12

    def test_identical_samples_score_numerically_zero(self):
        rng = np.random.default_rng(9)
        data = rng.normal(size=(12, 2))
        x, y = SampleSet(data, Label.X), SampleSet(data, Label.Y)
        assert compute_rks(x, y, RksConfig(k=0)).value <= 1e-12
        assert compute_rks(x, y, RksConfig(k=1), seed=1).value <= 1e-12

    @pytest.mark.parametrize(
        "cfg",
        [
            RksConfig(k=0),
            RksConfig(k=0, surrogate_k0=K0Surrogate.GRID_ORACLE),
            RksConfig(k=1),
            RksConfig(k=2),
        ],
    )
    def test_swap_symmetry_is_bitwise(self, cfg):
        rng = np.random.default_rng(50)
        x = _ss(rng.normal(size=(14, 2)))
        y = _ss(rng.normal(0.5, 1.1, size=(11, 2)), Label.Y)
        forward = compute_rks(x, y, cfg, seed=3)
        swapped = compute_rks(*_swap_labels(x, y), cfg, seed=3)
        assert forward.value == swapped.value

    def test_nonnegative(self):
        rng = np.random.default_rng(52)
        x = _ss(rng.normal(size=(8, 2)))
        y = _ss(rng.normal(size=(8, 2)), Label.Y)
        for cfg in (RksConfig(k=0), RksConfig(k=1)):
            assert compute_rks(x, y, cfg, seed=2).value >= 0.0
