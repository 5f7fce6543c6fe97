import json
import math

import numpy as np
import pytest

from svgeom import (
    DomainError,
    SpaceSpec,
    chi2_moment,
    manifold_volume,
    radial_integral,
    radial_integral_quadrature,
    reach,
    sphere_volume,
    tube_coefficient,
    tube_volume,
    variance_profile,
)


# ---------------------------------------------------------------------------
# sphere and manifold volumes
# ---------------------------------------------------------------------------

def test_sphere_volumes():
    assert sphere_volume(0) == pytest.approx(2.0, abs=1e-14)
    assert sphere_volume(1) == pytest.approx(2 * math.pi, abs=1e-13)
    assert sphere_volume(2) == pytest.approx(4 * math.pi, abs=1e-13)
    with pytest.raises(DomainError):
        sphere_volume(-1)


def test_sphere_volume_large_dimension_finite():
    # A direct gamma evaluation would overflow here; the log route survives.
    assert 0.0 < sphere_volume(400) < 1e-100


def test_manifold_volume_examples():
    assert manifold_volume(SpaceSpec((1,), (2,))) == pytest.approx(
        2 * math.sqrt(2) * math.pi, abs=1e-12)
    assert manifold_volume(SpaceSpec((1, 1), (1, 1))) == pytest.approx(
        2 * math.pi ** 2, abs=1e-12)


def test_manifold_volume_distinct_factor_dims():
    # Per-factor scaling: each factor contributes d^(n/2) separately.
    space = SpaceSpec((2, 1), (3, 2))
    expected = (3 ** 1.0 * sphere_volume(2)) * (2 ** 0.5 * sphere_volume(1)) / 2
    assert manifold_volume(space) == pytest.approx(expected, rel=1e-14)


# ---------------------------------------------------------------------------
# radial integrals
# ---------------------------------------------------------------------------

def test_radial_integral_corrected_unit_case():
    space = SpaceSpec((1,), (2,))  # c = 1, n = 1
    assert radial_integral(0, space, math.pi / 2, "corrected") == \
        pytest.approx(1.0, abs=1e-12)


def test_radial_integral_paper_case():
    space = SpaceSpec((1,), (2,))
    assert radial_integral(0, space, math.pi / 2, "paper") == \
        pytest.approx(0.5, abs=1e-12)


def test_radial_integral_dual_evaluation():
    rng = np.random.default_rng(41)
    spaces = [SpaceSpec((1,), (2,)), SpaceSpec((1, 1), (1, 1)),
              SpaceSpec((2,), (2,)), SpaceSpec((2, 1), (2, 3)),
              SpaceSpec((1, 1, 1), (1, 1, 1))]
    checked = 0
    while checked < 50:
        space = spaces[int(rng.integers(len(spaces)))]
        i = int(rng.integers(space.manifold_dim // 2 + 1))
        eps = float(rng.uniform(0.05, math.pi / 2))
        convention = "corrected" if rng.random() < 0.5 else "paper"
        closed = radial_integral(i, space, eps, convention)
        quad = radial_integral_quadrature(i, space, eps, convention)
        assert abs(closed - quad) <= 1e-10
        checked += 1


def test_radial_integral_domain_checks():
    space = SpaceSpec((1,), (2,))
    with pytest.raises(DomainError):
        radial_integral(1, space, 0.3)
    with pytest.raises(DomainError):
        radial_integral(0, space, 0.0)
    with pytest.raises(DomainError):
        radial_integral(0, space, 2.0)
    with pytest.raises(DomainError):
        radial_integral(0, space, 0.3, "bogus")


# ---------------------------------------------------------------------------
# moments and coefficients
# ---------------------------------------------------------------------------

def test_chi2_moments():
    assert chi2_moment(0, 7) == 1.0
    assert chi2_moment(1, 7) == 7.0
    assert chi2_moment(2, 7) == 7.0 * 9.0


def test_tube_coefficient_base():
    assert tube_coefficient(0, SpaceSpec((2, 1), (1, 3))) == 1.0


def test_tube_coefficient_segre_1_1():
    space = SpaceSpec((1, 1), (1, 1))
    assert space.normal_dim == 1
    assert tube_coefficient(1, space) == pytest.approx(-1.0, abs=1e-14)


def test_tube_coefficient_vanishes_beyond_range():
    space = SpaceSpec((1,), (3,))
    report = tube_volume(space, 0.3)
    assert [t.i for t in report.terms] == [0]


# ---------------------------------------------------------------------------
# assembled volumes
# ---------------------------------------------------------------------------

def test_tube_volume_v12_corrected():
    space = SpaceSpec((1,), (2,))
    for eps in (0.1, 0.3):
        report = tube_volume(space, eps)
        assert report.volume == pytest.approx(
            4 * math.sqrt(2) * math.pi * math.sin(eps), rel=1e-12)
        assert report.validity


def test_tube_volume_v12_paper_literal():
    space = SpaceSpec((1,), (2,))
    report = tube_volume(space, 0.3, exponent_convention="paper")
    assert report.volume == pytest.approx(
        2 * math.sqrt(2) * math.pi * math.sin(0.3) ** 2, rel=1e-12)


def test_tube_volume_segre_breakdown():
    space = SpaceSpec((1, 1), (1, 1))
    report = tube_volume(space, 0.2)
    assert [t.i for t in report.terms] == [0, 1]
    assert report.terms[0].a == 1.0
    assert report.terms[1].a == pytest.approx(-1.0, abs=1e-14)
    assert sum(t.contribution for t in report.terms) == pytest.approx(
        report.volume, rel=1e-14)
    assert report.volume == pytest.approx(
        2 * math.pi ** 2 * math.sin(0.4), rel=1e-12)


def test_tube_volume_covers_sphere_at_reach():
    # For this space the medial axis has measure zero, so the tube at the
    # reach radius fills the whole ambient sphere.
    space = SpaceSpec((1, 1), (1, 1))
    report = tube_volume(space, math.pi / 4)
    assert report.volume == pytest.approx(sphere_volume(3), rel=1e-12)


def test_tube_volume_monotone_and_bounded():
    for dims, degrees in [((1,), (2,)), ((1, 1), (1, 1)), ((2,), (2,))]:
        space = SpaceSpec(dims, degrees)
        top = reach(space).reach
        grid = np.linspace(top / 20, top * 0.999, 20)
        values = [tube_volume(space, float(e)).volume for e in grid]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert all(v <= sphere_volume(space.sphere_dim) + 1e-9 for v in values)


def test_tube_volume_leading_order():
    for dims, degrees in [((1,), (2,)), ((1, 1), (1, 1)), ((2, 1), (2, 3))]:
        space = SpaceSpec(dims, degrees)
        eps = 1e-2
        report = tube_volume(space, eps)
        c = space.normal_dim
        shell = sphere_volume(c - 1) * _sin_power_integral(c - 1, eps)
        ratio = report.volume / (shell * manifold_volume(space))
        assert abs(ratio - 1.0) <= 0.01


def _sin_power_integral(power, eps, steps=20001):
    grid = np.linspace(0.0, eps, steps)
    return float(np.trapezoid(np.sin(grid) ** power, grid))


def test_tube_volume_flags_invalid_radius():
    space = SpaceSpec((1,), (2,))
    report = tube_volume(space, 1.0)
    assert not report.validity


def test_tube_volume_profile_switch():
    space = SpaceSpec((2,), (2,))
    default = tube_volume(space, 0.3)
    shaped = tube_volume(space, 0.3,
                         profile=variance_profile("weingarten", space.degrees))
    assert default.volume != shaped.volume


def test_tube_report_json_and_csv(tmp_path):
    space = SpaceSpec((1, 1), (1, 1))
    report = tube_volume(space, 0.2)
    doc = json.loads(report.to_json())
    assert doc["conventions"] == {"exponent": "corrected",
                                  "minor_mode": "corrected",
                                  "profile": "def-d"}
    path = tmp_path / "terms.csv"
    report.terms_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "i,a_i,J_i,contribution"
    assert len(lines) == 3
