"""Contour transforms against closed-form Cauchy integrals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faberzol.errors import EvaluationDomainError
from faberzol.geometry import boundary_samples, curve, disk, rectangle
from faberzol.quadrature import (
    cauchy_boundary,
    cauchy_minus,
    cauchy_plus,
    cauchy_stabilized,
    winding_number,
)


@pytest.fixture(scope="module")
def circle():
    return boundary_samples(disk(0.0, 1.0), 256)


def test_winding_number_inside_and_outside(circle):
    for z in (0.0, 0.5j, -0.3):
        assert winding_number(circle, z) == 1
    for z in (3.0, -2.0 + 2.0j):
        assert winding_number(circle, z) == 0


def test_interior_transform_reproduces_analytic_values(circle):
    z = np.array([0.2 + 0.1j, -0.4j, 0.6])
    vals = cauchy_plus(np.exp(circle.nodes), circle, z)
    assert np.abs(vals - np.exp(z)).max() < 1e-13


def test_interior_transform_of_an_exterior_pole(circle):
    # f analytic inside, so the transform is exact there too
    a = 2.0 + 1.0j
    z = np.array([0.3, -0.2 + 0.4j])
    vals = cauchy_plus(1.0 / (circle.nodes - a), circle, z)
    assert np.abs(vals - 1.0 / (z - a)).max() < 1e-13


def test_exterior_transform_kills_the_analytic_part(circle):
    z = np.array([2.0 + 1.0j, -3.0])
    assert np.abs(cauchy_minus(np.exp(circle.nodes), circle, z)).max() < 1e-13


def test_exterior_transform_keeps_the_residue(circle):
    b = 0.3j
    z = np.array([2.0 + 1.0j, -3.0])
    vals = cauchy_minus(1.0 / (circle.nodes - b), circle, z)
    assert np.abs(vals + 1.0 / (z - b)).max() < 1e-13


def test_side_checks_reject_the_wrong_half(circle):
    with pytest.raises(EvaluationDomainError):
        cauchy_plus(np.exp(circle.nodes), circle, np.array([2.0]))
    with pytest.raises(EvaluationDomainError):
        cauchy_minus(np.exp(circle.nodes), circle, np.array([0.2]))


def test_jump_identity_across_the_contour():
    # plus and minus limits differ by the density as the offset shrinks
    z0 = np.exp(1j * np.array([0.3, 2.0, 4.5]))
    errs = []
    for eps, n in [(1e-2, 2048), (1e-3, 16384), (1e-4, 131072)]:
        q = boundary_samples(disk(0.0, 1.0), n)
        f = np.exp(q.nodes)
        jump = (cauchy_plus(f, q, z0 * (1 - eps))
                - cauchy_minus(f, q, z0 * (1 + eps)))
        errs.append(np.abs(jump - np.exp(z0)).max())
    assert errs[0] < 0.1 and errs[1] < 1e-2 and errs[2] < 1e-3
    assert errs[2] < errs[1] < errs[0]


def test_boundary_transform_at_the_nodes(circle):
    vals = np.exp(circle.nodes)
    out = cauchy_boundary(vals, circle, circle.nodes, vals)
    assert np.abs(out - vals).max() < 1e-12


def test_boundary_transform_between_nodes(circle):
    t = np.array([0.1234, 0.5001, 0.777])
    z = disk(0.0, 1.0).boundary_point(t)
    out = cauchy_boundary(np.exp(circle.nodes), circle, z, np.exp(z))
    assert np.abs(out - np.exp(z)).max() < 1e-12


def test_boundary_transform_on_panel_rules():
    # Gauss-Legendre panels: quadrature weights differ from barycentric
    # ones, so node collisions exercise the derivative correction
    box = rectangle((-1.0, 1.0), (-0.5, 0.5))
    q = boundary_samples(box, 512)
    vals = np.exp(q.nodes)
    at_nodes = cauchy_boundary(vals, q, q.nodes[::7], vals[::7])
    assert np.abs(at_nodes - vals[::7]).max() < 1e-10


def test_stabilized_transform_near_the_boundary(circle):
    z = 0.999999 * np.exp(1j * np.array([0.7, 3.1]))
    vals = cauchy_stabilized(np.exp(circle.nodes), circle, z, side="interior")
    assert np.abs(vals - np.exp(z)).max() < 1e-9


def test_stabilized_transform_matches_plain_far_away(circle):
    z = np.array([0.1 + 0.2j, -0.3j])
    a = cauchy_stabilized(np.exp(circle.nodes), circle, z, side="interior")
    b = cauchy_plus(np.exp(circle.nodes), circle, z)
    assert np.abs(a - b).max() < 1e-13


def test_transforms_on_a_smooth_curve_boundary():
    region = curve({1: 1.0, 2: 0.15, -1: 0.1})
    q = boundary_samples(region, 512)
    f = 1.0 / (q.nodes - 4.0)
    z = np.array([0.05 + 0.1j])
    assert np.abs(cauchy_plus(f, q, z) - 1.0 / (z - 4.0)).max() < 1e-12


@given(
    coeffs=st.lists(
        st.complex_numbers(max_magnitude=2.0, allow_nan=False,
                           allow_infinity=False),
        min_size=1, max_size=5,
    ),
    t=st.floats(0.0, 1.0, exclude_max=True),
)
@settings(max_examples=30, deadline=None)
def test_interior_transform_is_exact_on_polynomials(coeffs, t):
    q = boundary_samples(disk(0.0, 1.2), 128)
    z0 = 0.6 * disk(0.0, 1.0).boundary_point(np.array([t]))
    vals = np.polyval(coeffs, q.nodes)
    expect = np.polyval(coeffs, z0)
    scale = max(1.0, np.abs(vals).max())
    assert np.abs(cauchy_plus(vals, q, z0) - expect).max() < 1e-11 * scale
