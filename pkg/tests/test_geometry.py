import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faberzol.errors import BoundaryPointError, InvalidRegionError
from faberzol.geometry import (
    boundary_distance,
    boundary_samples,
    contains,
    contains_many,
    curve,
    disk,
    interior_anchor,
    is_convex,
    polygon,
    random_points,
    rectangle,
    rotation,
)

L_VERTS = [0.0, 2.0, 2.0 + 1.0j, 1.0 + 1.0j, 1.0 + 2.0j, 2.0j]


def test_disk_boundary_is_a_circle():
    d = disk(1.0 + 2.0j, 0.5)
    t = np.linspace(0.0, 1.0, 64, endpoint=False)
    z = d.boundary_point(t)
    assert np.abs(np.abs(z - (1.0 + 2.0j)) - 0.5).max() < 1e-14
    assert d.true_center == 1.0 + 2.0j
    assert d.true_radius == 0.5


def test_rectangle_boundary_stays_on_the_box():
    r = rectangle((0.3, 1.3), (-0.5, 0.5))
    t = np.linspace(0.0, 1.0, 4096, endpoint=False)
    z = r.boundary_point(t)
    assert z.real.min() >= 0.3 - 1e-12 and z.real.max() <= 1.3 + 1e-12
    assert z.imag.min() >= -0.5 - 1e-12 and z.imag.max() <= 0.5 + 1e-12
    for corner in (0.3 - 0.5j, 1.3 - 0.5j, 1.3 + 0.5j, 0.3 + 0.5j):
        assert np.abs(z - corner).min() < 2e-3


def test_negated_region_mirrors_the_boundary():
    e = rectangle((0.3, 1.3), (-1.3, 1.3))
    f = e.negated()
    t = np.linspace(0.0, 1.0, 200, endpoint=False)
    assert np.allclose(f.boundary_point(t), -e.boundary_point(t))


def test_affine_transform_composes():
    d = disk(1.0, 0.5).transformed(scale=2.0j, shift=1.0)
    assert d.true_center == pytest.approx(1.0 + 2.0j)
    assert d.true_radius == pytest.approx(1.0)
    assert d.diameter() == pytest.approx(2.0)


def test_contains_distinguishes_the_three_cases():
    d = disk(0.0, 1.0)
    assert contains(d, 0.2 + 0.3j)
    assert not contains(d, 1.5)
    with pytest.raises(BoundaryPointError):
        contains(d, 1.0)


def test_contains_many_returns_inside_and_on_masks():
    r = rectangle((0.0, 1.0), (0.0, 1.0))
    z = np.array([0.5 + 0.5j, 2.0, 0.5, 1.0 + 0.5j])
    inside, on = contains_many(r, z)
    assert inside.tolist() == [True, False, False, False]
    assert on.tolist() == [False, False, True, True]


def test_polygon_orientation_is_normalized():
    # clockwise input gets reversed, so the winding stays +1
    p_ccw = polygon([0.0, 1.0, 1.0 + 1.0j])
    p_cw = polygon([0.0, 1.0 + 1.0j, 1.0])
    assert p_ccw.vertices == tuple(reversed(p_cw.vertices)) or contains(
        p_cw, 0.6 + 0.3j
    )


def test_rotation_is_one_for_convex_shapes():
    assert rotation(disk(2.0, 0.3)) == 1.0
    assert rotation(rectangle((0.0, 2.0), (0.0, 1.0))) == 1.0
    assert rotation(polygon([0.0, 1.0, 0.5 + 1.0j])) == 1.0


def test_rotation_counts_the_reentrant_corner():
    l_shape = polygon(L_VERTS)
    assert not is_convex(l_shape)
    assert rotation(l_shape) == pytest.approx(1.5, abs=1e-12)


def test_convexity_predicates():
    assert is_convex(disk())
    assert is_convex(rectangle((0.0, 1.0), (0.0, 1.0)))
    assert not is_convex(polygon(L_VERTS))


def test_smooth_curve_region():
    # unit circle with a mild third harmonic, still convex-ish and Jordan
    c = curve({1: 1.0, 3: 0.05})
    t = np.linspace(0.0, 1.0, 256, endpoint=False)
    z = c.boundary_point(t)
    assert np.all(np.isfinite(z))
    assert contains(c, 0.0)
    assert not contains(c, 3.0)
    assert rotation(c) >= 1.0


def test_boundary_distance_matches_the_disk_formula():
    d = disk(1.0j, 2.0)
    assert boundary_distance(d, 1.0j) == pytest.approx(2.0)
    assert boundary_distance(d, 1.0j + 5.0) == pytest.approx(3.0)


def test_boundary_samples_integrate_cauchy_kernels():
    # sum(w) ~ contour integral of dz = 0; sum(w/(z-a)) ~ 2*pi*i inside
    for region in (disk(0.3, 1.1), rectangle((-1.0, 1.0), (-0.5, 0.5)),
                   curve({1: 1.0, -2: 0.1})):
        q = boundary_samples(region, 256)
        assert abs(q.weights.sum()) < 1e-10
        a = interior_anchor(region)
        integral = (q.weights / (q.nodes - a)).sum() / (2j * np.pi)
        assert abs(integral - 1.0) < 1e-8


def test_polygon_quadrature_is_graded_into_corners():
    q = boundary_samples(rectangle((0.0, 1.0), (0.0, 1.0)), 512)
    gap_to_corner = np.abs(q.nodes).min()
    assert gap_to_corner < 1e-4  # geometric panels pile up near the vertex
    assert gap_to_corner > 0.0
    # uniform spacing would leave the nearest node ~ perimeter / n away
    assert gap_to_corner < 0.1 * (4.0 / 512.0)


def test_random_points_fall_inside():
    rng = np.random.default_rng(3)
    for region in (disk(1.0, 0.7), polygon(L_VERTS)):
        pts = random_points(region, 200, rng)
        inside, on = contains_many(region, pts)
        assert inside.all() and not on.any()


def test_random_points_are_reproducible():
    region = rectangle((0.0, 1.0), (0.0, 2.0))
    a = random_points(region, 50, np.random.default_rng(11))
    b = random_points(region, 50, np.random.default_rng(11))
    assert np.array_equal(a, b)


def test_invalid_regions_are_rejected():
    with pytest.raises(InvalidRegionError):
        disk(0.0, -1.0)
    with pytest.raises(InvalidRegionError):
        polygon([0.0, 1.0])
    with pytest.raises(InvalidRegionError):
        rectangle((1.0, 0.0), (0.0, 1.0))
    with pytest.raises(InvalidRegionError):
        curve({0: 1.0})
    with pytest.raises(InvalidRegionError):
        boundary_samples(disk(), 8)


@given(
    cx=st.floats(-3.0, 3.0),
    cy=st.floats(-3.0, 3.0),
    r=st.floats(0.1, 2.0),
)
@settings(max_examples=40, deadline=None)
def test_disk_invariants(cx, cy, r):
    d = disk(complex(cx, cy), r)
    assert rotation(d) == 1.0
    assert contains(d, complex(cx, cy))
    assert boundary_distance(d, complex(cx, cy)) == pytest.approx(r)
    assert interior_anchor(d) == complex(cx, cy)
