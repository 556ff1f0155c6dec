import numpy as np
import pytest

from motionmatch.analysis import (
    capacity_report,
    entropy_profile,
    mean_entropy_vs_window,
    noise_entropy_sweep,
    pairwise_target_similarity,
    rotation_sensitivity,
)
from motionmatch.io_files import format_table_csv
from motionmatch.similarity import Measure, pearson_min_axis
from motionmatch.trajectory import gen_circle, gen_polygon, window_at

PEARSON = Measure("pearson_min_axis")
ROTATED = Measure("rotated_correlation")


class TestEntropyProfile:
    def test_entries_bounded(self, square120):
        prof = entropy_profile(square120, 15, PEARSON)
        assert len(prof.per_window_entropy) == 120
        assert np.all(prof.per_window_entropy >= 0)
        assert np.all(prof.per_window_entropy <= np.log2(120) + 1e-9)

    def test_full_perimeter_profile_constant(self, square120):
        prof = entropy_profile(square120, 120, PEARSON)
        spread = prof.per_window_entropy.max() - prof.per_window_entropy.min()
        assert spread < 1e-9

    def test_thresholded_mode_dips_at_corners(self, square120):
        prof = entropy_profile(square120, 15, PEARSON, lambda_free=False, lam=0.8).per_window_entropy
        corners = [0, 30, 60, 90]
        corner_vals = [prof[(c - 7) % 120] for c in corners]
        inside = [s for s in range(120) if (s % 30) != 0 and (s % 30) + 15 <= 30]
        assert np.mean(prof[inside]) - max(corner_vals) > 1.0

    def test_open_trajectory_rejected(self):
        from motionmatch.trajectory import Trajectory

        open_traj = Trajectory(np.random.default_rng(0).normal(size=(40, 2)), 30.0, closed=False)
        with pytest.raises(ValueError):
            entropy_profile(open_traj, 10, PEARSON)

    def test_rotation_equivariant_measure_flattens_circle_profile(self):
        circle = gen_circle(1.0, 120)
        std_pearson = entropy_profile(circle, 20, PEARSON).per_window_entropy.std()
        std_rotated = entropy_profile(circle, 20, ROTATED).per_window_entropy.std()
        assert std_rotated < std_pearson

    def test_matrix_agrees_with_scalar_measure(self, square120):
        # vectorised pairwise scores must match the per-pair implementation
        from motionmatch.analysis import _pairwise_matrix, _wrapped_windows

        wins = _wrapped_windows(square120, 10)
        sim = _pairwise_matrix(wins, PEARSON)
        rng = np.random.default_rng(0)
        for _ in range(20):
            i, j = rng.integers(0, 120, 2)
            direct = pearson_min_axis(
                window_at(square120, int(i), 10, wrap=True), window_at(square120, int(j), 10, wrap=True)
            ).value
            assert abs(sim[i, j] - direct) < 1e-12

    def test_rotated_matrix_orientation(self):
        # entry (i, j) must treat window j as the target that defines the
        # canonical frame; rotated correlation is asymmetric so a transposed
        # implementation would disagree with the scalar measure
        from motionmatch.analysis import _pairwise_matrix, _wrapped_windows
        from motionmatch.similarity import rotated_correlation

        circle = gen_circle(1.0, 40)
        noisy_pts = circle.samples + np.random.default_rng(3).normal(0, 0.15, (40, 2))
        from motionmatch.trajectory import Trajectory

        noisy = Trajectory(noisy_pts, 30.0, closed=True)
        wins = _wrapped_windows(noisy, 12)
        sim = _pairwise_matrix(wins, ROTATED)
        for i, j in [(0, 5), (5, 0), (17, 30), (30, 17)]:
            direct = rotated_correlation(
                window_at(noisy, i, 12, wrap=True), window_at(noisy, j, 12, wrap=True)
            ).value
            assert abs(sim[i, j] - direct) < 1e-12


class TestWindowSweep:
    def test_square_optimum_near_third_of_perimeter(self, square120):
        sweep = mean_entropy_vs_window(square120, PEARSON, 5, 120)
        assert len(sweep.window_sizes) == 116
        assert 35 <= sweep.best_window <= 45

    def test_right_endpoint_matches_full_profile(self, square120):
        sweep = mean_entropy_vs_window(square120, PEARSON, 115, 120)
        full = entropy_profile(square120, 120, PEARSON).per_window_entropy.mean()
        assert abs(sweep.mean_entropy[-1] - full) < 1e-12

    def test_bad_range(self, square120):
        with pytest.raises(ValueError):
            mean_entropy_vs_window(square120, PEARSON, 1, 120)


class TestPairwise:
    def test_reference_scores_one_exactly(self):
        circle = gen_circle(1.0, 160)
        scores = pairwise_target_similarity(circle, 10, 15, 15, PEARSON, reference=5)
        assert scores[5].value == 1.0

    def test_neighbour_confusion_bands(self):
        # reference window placed where the arc straddles a coordinate axis,
        # so neighbour correlations stay positive and decay with phase gap
        circle = gen_circle(1.0, 160, phase_deg=29.25)
        scores = pairwise_target_similarity(circle, 10, 15, 15, PEARSON, reference=5)
        assert 0.93 <= scores[4].value <= 0.99
        assert 0.80 <= scores[3].value <= 0.90

    def test_opposite_direction_twin_negative(self):
        ccw = gen_circle(1.0, 160, direction="ccw")
        cw = gen_circle(1.0, 160, direction="cw")
        u = window_at(ccw, 15, 15, wrap=True)
        t = window_at(cw, 15, 15, wrap=True)
        assert pearson_min_axis(u, t).value < 0

    def test_bad_reference(self):
        circle = gen_circle(1.0, 160)
        with pytest.raises(IndexError):
            pairwise_target_similarity(circle, 10, 15, 15, PEARSON, reference=10)


class TestRotationSensitivity:
    def test_noise_free_curve_is_flat_at_max(self):
        curve = rotation_sensitivity(PEARSON, noise_sd=0.0, seed=0)
        assert np.all(curve.scores == 1.0)
        assert curve.value_range == 0.0

    def test_min_axis_sensitive_rotated_robust(self):
        pm = rotation_sensitivity(PEARSON, 1.0, 60, 20, 0.1, seed=3)
        rc = rotation_sensitivity(ROTATED, 1.0, 60, 20, 0.1, seed=3)
        assert pm.value_range > 0.05
        assert rc.value_range < 0.05

    def test_window_too_long(self):
        with pytest.raises(ValueError):
            rotation_sensitivity(PEARSON, 1.0, 30, 31, 0.1, seed=0)


class TestCapacity:
    def test_standard_speed_row(self):
        row = capacity_report(240.0, 30.0, 0.8, 30)
        assert row.n_samples == 45
        assert row.count_above == 7
        assert abs(row.proportion - 7 / 45) < 1e-12
        assert abs(row.entropy_bits - np.log2(7)) < 1e-12
        assert row.max_targets_bidirectional == 14

    def test_entropy_consistent_with_count(self):
        for speed in (240.0, 180.0, 120.0):
            row = capacity_report(speed)
            assert abs(row.entropy_bits - np.log2(row.count_above)) < 0.005

    def test_fractional_revolution_rejected(self):
        with pytest.raises(ValueError):
            capacity_report(70.0, 30.0)

    def test_window_longer_than_revolution_rejected(self):
        with pytest.raises(ValueError):
            capacity_report(360.0, 30.0, 0.8, 31)


class TestNoiseSweep:
    def test_reproducible_byte_for_byte(self):
        kwargs = dict(noise_fractions=[0.1, 0.5], reps=5, base_seed=77)
        a = noise_entropy_sweep(**kwargs)
        b = noise_entropy_sweep(**kwargs)
        text_a = format_table_csv([p.__dict__ for p in a])
        text_b = format_table_csv([p.__dict__ for p in b])
        assert text_a.encode() == text_b.encode()

    def test_entropy_bounded_by_target_count(self):
        points = noise_entropy_sweep(n_targets=8, noise_fractions=[0.2, 0.6], reps=5, base_seed=1)
        for p in points:
            assert 0.0 <= p.mean_entropy_bits <= np.log2(8)

    def test_mean_entropy_non_decreasing_at_high_noise(self):
        fracs = [0.4, 0.5, 0.6, 0.7, 0.75]
        points = noise_entropy_sweep(16, 180.0, 30.0, 30, fracs, 30, base_seed=2024)
        means = [p.mean_entropy_bits for p in points]
        assert all(b >= a - 1e-12 for a, b in zip(means, means[1:]))

    def test_zero_noise_matches_deterministic_confusion(self):
        # with no noise every repetition sees the same thresholded counts
        points = noise_entropy_sweep(n_targets=16, noise_fractions=[0.0], reps=3, base_seed=5)
        n = 60
        targets = [gen_circle(1.0, n, phase_deg=360.0 * i / 16) for i in range(16)]
        ents = []
        for s in range(n):
            uw = window_at(targets[0], s, 30, wrap=True)
            vals = np.array(
                [pearson_min_axis(uw, window_at(t, s, 30, wrap=True)).value for t in targets]
            )
            count = int((vals > 0.8).sum())
            ents.append(np.log2(count) if count else np.log2(16))
        assert min(ents) - 1e-9 <= points[0].mean_entropy_bits <= max(ents) + 1e-9


def test_triangle_profile_has_three_dips():
    triangle = gen_polygon([(0, 0), (1, 0), (0.5, 0.9)], 90)
    prof = entropy_profile(triangle, 12, PEARSON, lambda_free=False).per_window_entropy
    corners = [0, 30, 60]
    corner_vals = [prof[(c - 6) % 90] for c in corners]
    inside = [s for s in range(90) if (s % 30) != 0 and (s % 30) + 12 <= 30]
    assert np.mean(prof[inside]) > max(corner_vals)
