import math

import pytest

from svgeom import (
    DomainError,
    MatchingProblem,
    McConfig,
    ResourceError,
    SpaceSpec,
    expected_minor_sum,
    matching_determinant,
    mc_expected_det,
    mc_minor_sum,
    mc_tube_volume,
    sphere_volume,
    tube_volume,
    variance_profile,
)


# ---------------------------------------------------------------------------
# determinism and error scaling
# ---------------------------------------------------------------------------

def test_seed_determinism_across_worker_counts():
    p = MatchingProblem((2, 2, 1, 1), (1, 1, 1, 1))
    a = mc_expected_det(p, McConfig(20_000, seed=3, workers=1))
    b = mc_expected_det(p, McConfig(20_000, seed=3, workers=8))
    assert a.mean == b.mean
    assert a.std_error == b.std_error


def test_different_seeds_differ():
    p = MatchingProblem((1, 1), (1, 1))
    a = mc_expected_det(p, McConfig(1_000, seed=1))
    b = mc_expected_det(p, McConfig(1_000, seed=2))
    assert a.mean != b.mean


def test_standard_error_scaling():
    p = MatchingProblem((2, 2, 1, 1), (1, 1, 1, 1))
    small = mc_expected_det(p, McConfig(1_000, seed=5))
    large = mc_expected_det(p, McConfig(100_000, seed=5))
    ratio = small.std_error / large.std_error
    assert 8.0 <= ratio <= 12.0


def test_config_validation():
    with pytest.raises(DomainError):
        McConfig(0)
    with pytest.raises(DomainError):
        McConfig(10, seed=-1)


# ---------------------------------------------------------------------------
# expected determinants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("sizes,degrees", [((2, 2, 1, 1), (1, 1, 1, 1)),
                                           ((1, 1), (1, 1)), ((2,), (3,))])
def test_det_mean_matches_matching_sum(sizes, degrees):
    for name in ("def-d", "weingarten", "corollary"):
        profile = variance_profile(name, degrees)
        p = MatchingProblem(sizes, degrees, profile)
        stats = mc_expected_det(p, McConfig(40_000, seed=11))
        assert abs(stats.mean - matching_determinant(p)) <= 3 * stats.std_error


def test_det_mean_odd_size_near_zero():
    p = MatchingProblem((2, 1), (1, 1))
    stats = mc_expected_det(p, McConfig(20_000, seed=12))
    assert abs(stats.mean) <= 3 * stats.std_error


def test_det_proof_variance_case():
    p = MatchingProblem((2,), (3,))  # within-group weight 6
    stats = mc_expected_det(p, McConfig(50_000, seed=13))
    assert abs(stats.mean + 6.0) <= 3 * stats.std_error


def test_histogram_csv_format(tmp_path):
    path = tmp_path / "hist.csv"
    p = MatchingProblem((1, 1), (1, 1))
    stats = mc_expected_det(p, McConfig(5_000, seed=14, output=path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "bin_left,bin_right,count"
    assert len(lines) == 101
    counts = [int(line.split(",")[2]) for line in lines[1:]]
    assert sum(counts) <= 5_000
    assert sum(counts) >= 4_900  # only the extreme tails are clipped
    assert stats.histogram is not None


# ---------------------------------------------------------------------------
# minor sums
# ---------------------------------------------------------------------------

def test_minor_sum_index_zero_is_exactly_one():
    stats = mc_minor_sum(SpaceSpec((2, 2), (1, 1)), 0, McConfig(1_000, seed=15))
    assert stats.mean == 1.0
    assert stats.std_error == 0.0


def test_minor_sum_matches_corrected_formula():
    space = SpaceSpec((2,), (2,))
    stats = mc_minor_sum(space, 1, McConfig(50_000, seed=16))
    profile = variance_profile("weingarten", space.degrees)
    expected = expected_minor_sum(space, 1, profile, "corrected")
    assert expected == pytest.approx(-0.5, abs=1e-14)
    assert abs(stats.mean - expected) <= 3 * stats.std_error


def test_minor_sum_segre_2_2():
    stats = mc_minor_sum(SpaceSpec((2, 2), (1, 1)), 1, McConfig(30_000, seed=17))
    assert abs(stats.mean + 4.0) <= 3 * stats.std_error
    assert abs(stats.mean + 1.0) > 10 * stats.std_error


def test_minor_sum_range_check():
    with pytest.raises(DomainError):
        mc_minor_sum(SpaceSpec((1,), (2,)), 1, McConfig(10, seed=0))


# ---------------------------------------------------------------------------
# tube volumes
# ---------------------------------------------------------------------------

def test_tube_volume_v12():
    space = SpaceSpec((1,), (2,))
    est = mc_tube_volume(space, 0.3, McConfig(200_000, seed=18))
    expected = 4 * math.sqrt(2) * math.pi * math.sin(0.3)
    assert abs(est.volume - expected) <= 3 * est.std_error


def test_tube_volume_cross_oracle_segre():
    space = SpaceSpec((1, 1), (1, 1))
    est = mc_tube_volume(space, 0.2, McConfig(200_000, seed=19))
    expected = tube_volume(space, 0.2).volume
    assert abs(est.volume - expected) <= 3 * est.std_error


def test_tube_at_right_angle_covers_sphere():
    # Every unit quadratic has best rank-one correlation >= 1/sqrt(2), so
    # the hit fraction saturates beyond the reach.
    space = SpaceSpec((1,), (2,))
    est = mc_tube_volume(space, math.pi / 2, McConfig(20_000, seed=20))
    assert est.fraction <= 1.0
    assert est.fraction == 1.0
    assert est.volume <= sphere_volume(2) + 1e-9


def test_tube_volume_guards():
    with pytest.raises(ResourceError):
        mc_tube_volume(SpaceSpec((3, 3), (2, 2)), 0.1, McConfig(10, seed=0))
    with pytest.raises(DomainError):
        mc_tube_volume(SpaceSpec((1,), (2,)), 0.0, McConfig(10, seed=0))


def test_tube_volume_generic_space_small_sample():
    # No vectorized path for this space; the generic optimizer handles it.
    space = SpaceSpec((1, 1), (2, 1))
    est = mc_tube_volume(space, 0.35, McConfig(600, seed=21))
    expected = tube_volume(space, 0.35,
                           profile=variance_profile("weingarten",
                                                    space.degrees)).volume
    assert abs(est.volume - expected) <= 4 * est.std_error
