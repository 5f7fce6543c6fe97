import itertools
import json
import math

import numpy as np
import pytest

from svgeom import (
    DomainError,
    GeodesicSpec,
    SpaceSpec,
    bottleneck_check,
    bw_inner,
    curvature_closed_form,
    embed,
    extremal_curvature,
    geodesic_eval,
    normal_curvature_numeric,
    reach,
    rho1,
    rho2,
    rho2_and_bottleneck_check,
    veronese_embed,
)
from svgeom.geodesics_reach import curve_component_norms, optimize_curvature
from svgeom.manifold import base_point


# ---------------------------------------------------------------------------
# geodesic evaluation
# ---------------------------------------------------------------------------

def test_geodesic_starts_at_base_point():
    space = SpaceSpec((1, 1), (2, 3))
    g = GeodesicSpec(space, (0.6, 0.8))
    assert np.allclose(geodesic_eval(g, 0.0).coeffs,
                       embed(base_point(space)).coeffs, atol=1e-15)


def test_geodesic_reaches_rotated_power():
    space = SpaceSpec((1,), (2,))
    g = GeodesicSpec(space, (1.0,))
    got = geodesic_eval(g, math.pi * math.sqrt(2) / 2)
    assert np.allclose(got.coeffs, [0.0, 0.0, 1.0], atol=1e-12)


def test_geodesic_unit_speed():
    space = SpaceSpec((1, 1), (2, 3))
    g = GeodesicSpec(space, (0.6, 0.8))
    h = 1e-5
    vel = (geodesic_eval(g, h).coeffs - geodesic_eval(g, -h).coeffs) / (2 * h)
    assert abs(np.linalg.norm(vel) - 1.0) <= 1e-8


def test_geodesic_requires_unit_speed_vector():
    with pytest.raises(DomainError):
        GeodesicSpec(SpaceSpec((1,), (2,)), (0.5,))


def test_constant_speed_curves_have_no_tangential_acceleration():
    rng = np.random.default_rng(31)
    space = SpaceSpec((1, 1, 1), (2, 1, 3))
    for _ in range(10):
        theta = rng.standard_normal(space.r)
        theta /= np.linalg.norm(theta)
        g = GeodesicSpec(space, tuple(theta))
        tangential, _ = curve_component_norms(g, h=1e-4)
        assert tangential <= 1e-6


def test_nonzero_acceleration_shows_in_tangential_part():
    # Second-order arc length alone does not make the curve a geodesic:
    # the tangential acceleration equals the norm of the accelerations.
    space = SpaceSpec((1, 1), (1, 1))
    theta = (1 / math.sqrt(2), 1 / math.sqrt(2))
    acc = (1 / math.sqrt(2), -1 / math.sqrt(2))
    assert abs(sum(t * a for t, a in zip(theta, acc))) < 1e-15
    g = GeodesicSpec(space, theta, accelerations=acc)
    tangential, _ = curve_component_norms(g, h=1e-4)
    assert tangential == pytest.approx(1.0, abs=1e-5)


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def test_numeric_curvature_examples():
    assert normal_curvature_numeric(
        GeodesicSpec(SpaceSpec((1,), (2,)), (1.0,))) == pytest.approx(1.0, abs=1e-6)
    assert normal_curvature_numeric(
        GeodesicSpec(SpaceSpec((1, 1), (1, 1)), (1.0, 0.0))) == pytest.approx(
            0.0, abs=1e-6)


def test_numeric_matches_closed_form():
    rng = np.random.default_rng(32)
    for _ in range(100):
        r = int(rng.integers(1, 4))
        degrees = tuple(int(rng.integers(1, 5)) for _ in range(r))
        dims = tuple(int(rng.integers(1, 3)) for _ in range(r))
        space = SpaceSpec(dims, degrees)
        theta = rng.standard_normal(r)
        theta /= np.linalg.norm(theta)
        g = GeodesicSpec(space, tuple(theta))
        assert normal_curvature_numeric(g) == pytest.approx(
            curvature_closed_form(theta, degrees), abs=1e-6)


def test_closed_form_examples():
    degrees = (2, 3)
    d = sum(degrees)
    theta = tuple(math.sqrt(k / d) for k in degrees)
    assert curvature_closed_form(theta, degrees) == pytest.approx(
        math.sqrt(2 * (d - 1) / d), abs=1e-14)
    assert curvature_closed_form((1.0,), (4,)) == pytest.approx(
        math.sqrt(2 * 3 / 4), abs=1e-14)
    assert curvature_closed_form((0.0, 1.0), degrees) == pytest.approx(
        math.sqrt(2 * 2 / 3), abs=1e-14)


def test_closed_form_rejects_bad_speeds():
    with pytest.raises(DomainError):
        curvature_closed_form((1.0, 1.0), (2, 3))


def test_extremal_curvature_examples():
    ext = extremal_curvature(SpaceSpec((1, 1), (2, 3)))
    assert ext.max_value == pytest.approx(math.sqrt(1.6), abs=1e-15)
    assert ext.min_value == pytest.approx(1.0, abs=1e-15)
    ext = extremal_curvature(SpaceSpec((1, 1, 1), (1, 1, 1)))
    assert ext.max_value == pytest.approx(math.sqrt(4 / 3), abs=1e-15)
    assert ext.min_value == 0.0


def test_extremal_curvature_numeric_agreement():
    rng = np.random.default_rng(33)
    for _ in range(20):
        r = int(rng.integers(1, 5))
        degrees = tuple(int(rng.integers(1, 7)) for _ in range(r))
        if sum(degrees) < 2:
            degrees = (2,) + degrees[1:]
        ext = extremal_curvature(SpaceSpec((1,) * r, degrees))
        assert abs(ext.numeric_max - ext.max_value) <= 1e-9
        assert abs(ext.numeric_min - ext.min_value) <= 1e-9


def test_extremal_curvature_requires_degree_two():
    with pytest.raises(DomainError):
        extremal_curvature(SpaceSpec((2,), (1,)))


def test_subset_support_critical_values():
    # Restricted to a support set, the interior critical point is the
    # maximum on that subsphere, with value determined by the subset degree;
    # the restricted minimum comes from the smallest degree in the subset.
    degrees = (1, 2, 3, 1)
    for size in range(1, 5):
        for support in itertools.combinations(range(4), size):
            d_subset = sum(degrees[i] for i in support)
            vmax, _ = optimize_curvature(degrees, minimize=False,
                                         support=support)
            assert vmax == pytest.approx(
                math.sqrt(2 * (d_subset - 1) / d_subset), abs=1e-9)
            d_low = min(degrees[i] for i in support)
            vmin, _ = optimize_curvature(degrees, minimize=True,
                                         support=support)
            assert vmin == pytest.approx(
                math.sqrt(2 * (d_low - 1) / d_low), abs=1e-9)


def test_subset_maxima_monotone_in_subset_degree():
    values = [math.sqrt(2 * (d - 1) / d) for d in range(1, 20)]
    assert values == sorted(values)


# ---------------------------------------------------------------------------
# the two radii and the reach
# ---------------------------------------------------------------------------

def test_rho1_values():
    assert rho1(SpaceSpec((1,), (2,))) == pytest.approx(1.0, abs=1e-15)
    assert rho1(SpaceSpec((1,), (6,))) == pytest.approx(
        math.sqrt(0.6), abs=1e-15)


def test_rho1_is_reciprocal_max_curvature():
    for dims, degrees in [((1,), (2,)), ((1, 1), (2, 3)), ((2, 1), (1, 4))]:
        space = SpaceSpec(dims, degrees)
        assert rho1(space) * extremal_curvature(space).max_value == \
            pytest.approx(1.0, abs=1e-14)


def test_rho1_requires_degree_two():
    with pytest.raises(DomainError):
        rho1(SpaceSpec((3,), (1,)))


def test_rho2_constant():
    assert rho2(SpaceSpec((1,), (2,))) == math.pi / 4
    assert rho2_and_bottleneck_check(SpaceSpec((1,), (2,)), samples=50) == \
        math.pi / 4


def test_bottleneck_example_v12():
    e = embed(base_point(SpaceSpec((1,), (2,))))
    f = veronese_embed((0.0, 1.0), 2)
    assert bw_inner(e, f) == 0.0


def test_bottleneck_verification_suite():
    for dims, degrees in [((1,), (2,)), ((2,), (3,)), ((1, 1), (1, 1)),
                          ((1, 1), (2, 1)), ((2, 2, 1, 1), (1, 1, 1, 1))]:
        report = bottleneck_check(SpaceSpec(dims, degrees), samples=100)
        assert report["passed"], report


def test_bottleneck_rejects_degenerate_space():
    with pytest.raises(DomainError):
        bottleneck_check(SpaceSpec((2,), (1,)), samples=1)


def test_reach_cases():
    report = reach(SpaceSpec((1,), (2,)))
    assert report.reach == pytest.approx(math.pi / 4, abs=1e-15)
    assert report.regime == "bottleneck-limited"
    report = reach(SpaceSpec((1, 1), (2, 3)))  # total degree 5
    assert report.reach == math.pi / 4
    assert report.rho1 == pytest.approx(math.sqrt(5 / 8), abs=1e-15)
    report = reach(SpaceSpec((1,), (6,)))
    assert report.reach == pytest.approx(math.sqrt(0.6), abs=1e-15)
    assert report.regime == "curvature-limited"


def test_reach_is_min_of_radii():
    for dims, degrees in [((1,), (2,)), ((1,), (9,)), ((1, 1), (3, 3))]:
        space = SpaceSpec(dims, degrees)
        report = reach(space)
        assert report.reach == min(report.rho1, report.rho2)


def test_reach_report_json():
    doc = json.loads(reach(SpaceSpec((1,), (2,))).to_json())
    assert set(doc) == {"rho1", "rho2", "reach", "regime"}


def test_geodesic_custom_targets():
    space = SpaceSpec((2,), (2,))
    target = np.array([0.0, 0.6, 0.8])
    g = GeodesicSpec(space, (1.0,), targets=(target,))
    point = geodesic_eval(g, 0.3)
    assert abs(point.norm - 1.0) <= 1e-12
    with pytest.raises(DomainError):
        GeodesicSpec(space, (1.0,), targets=(np.array([1.0, 0.0, 0.0]),))
