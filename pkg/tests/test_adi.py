import numpy as np
import pytest

from faberzol.adi import (
    ShiftSet,
    adi_iterate,
    error_certificate,
    faber_shifts,
    fejer_shifts,
    leja_shifts,
    spectral_norm,
    sylvester_problem,
)
from faberzol.conformal import ExteriorOf, solve_annulus_map
from faberzol.errors import InvalidRegionError
from faberzol.faber import build_context
from faberzol.geometry import boundary_samples, contains_many, disk


@pytest.fixture(scope="module")
def disk_problem(disk_pair):
    return sylvester_problem(*disk_pair, 40, seed=1)


@pytest.fixture(scope="module")
def disk_quads(disk_pair):
    e, f = disk_pair
    return boundary_samples(e, 600), boundary_samples(f, 600)


def test_problem_spectra_live_in_their_regions(disk_pair, disk_problem):
    e, f = disk_pair
    for mat, region in ((disk_problem.a, e), (disk_problem.b, f)):
        inside, on = contains_many(region, np.diag(mat))
        assert (inside | on).all()
    res = (disk_problem.a @ disk_problem.solution
           - disk_problem.solution @ disk_problem.b - disk_problem.rhs)
    assert spectral_norm(res) < 1e-10 * spectral_norm(disk_problem.rhs)


def test_spectral_norm_matches_lapack():
    rng = np.random.default_rng(9)
    mat = rng.standard_normal((30, 20)) + 1j * rng.standard_normal((30, 20))
    assert spectral_norm(mat) == pytest.approx(
        np.linalg.norm(mat, 2), rel=1e-6
    )
    assert spectral_norm(np.zeros((3, 3))) == 0.0


def test_one_by_one_problem_is_solved_in_one_step():
    e, f = disk(1.0, 0.1), disk(-1.0, 0.1)
    problem = sylvester_problem(e, f, 1, seed=0)
    a, b = problem.a[0, 0], problem.b[0, 0]
    shifts = ShiftSet("faber", (a,), (b,), 1)
    err = adi_iterate(problem, shifts, return_errors=True)
    assert err[-1] < 1e-12


def test_zero_steps_return_the_initial_error(disk_problem):
    shifts = ShiftSet("fejer", (0.9,), (-0.9,), 1)
    errs = adi_iterate(disk_problem, shifts, k=0, return_errors=True)
    assert list(errs) == [1.0]
    assert adi_iterate(disk_problem, shifts, k=0) == []


def test_spectrum_shifts_solve_exactly(disk_pair):
    # with kappa = eig(A) and tau = eig(B) the error rational vanishes
    problem = sylvester_problem(*disk_pair, 6, seed=3)
    shifts = ShiftSet("leja", tuple(np.diag(problem.a)),
                      tuple(np.diag(problem.b)), 6)
    err = adi_iterate(problem, shifts, return_errors=True)
    assert err[-1] < 1e-10


def test_shift_order_does_not_change_the_result(disk_pair, disk_problem):
    amap = solve_annulus_map(*disk_pair, tol=1e-10)
    shifts = fejer_shifts(amap, 4)
    shuffled = ShiftSet("fejer", shifts.kappa[::-1], shifts.tau[::-1], 4)
    a = adi_iterate(disk_problem, shifts, return_errors=True)[-1]
    b = adi_iterate(disk_problem, shuffled, return_errors=True)[-1]
    assert a == pytest.approx(b, rel=1e-8)


def test_faber_shift_certificate_attains_the_annulus_decay(
        disk_map, disk_quads):
    # for a disk pair the degree-k rational is optimal, so the
    # certificate matches the lower bound h^(-k)
    ctx = build_context(disk_map, 5, n_quad=256)
    shifts = faber_shifts(ctx, 5)
    cert = error_certificate(shifts, *disk_quads)
    assert cert == pytest.approx(disk_map.h ** -5, rel=1e-6)


def test_fejer_shift_certificate_on_a_concentric_annulus():
    # zeros at the k-th roots of unity, poles at their h-dilates, so the
    # shift product is (z^k - c)/(z^k - h^k c) and the extremal ratio is
    # exactly 4 h^k / (h^k + 1)^2
    e = disk(0.0, 1.0)
    f = ExteriorOf(disk(0.0, 2.0))
    amap = solve_annulus_map(e, f, tol=1e-8)
    shifts = fejer_shifts(amap, 6)
    cert = error_certificate(shifts, boundary_samples(e, 600),
                             boundary_samples(disk(0.0, 2.0), 600))
    hk = 2.0 ** 6
    assert cert == pytest.approx(4.0 * hk / (hk + 1.0) ** 2, rel=1e-6)


@pytest.mark.parametrize("kind", ["faber", "fejer", "leja"])
def test_certificates_are_sound(kind, disk_pair, disk_map, disk_problem,
                                disk_quads):
    if kind == "faber":
        shifts = faber_shifts(build_context(disk_map, 5, n_quad=256), 5)
    elif kind == "fejer":
        shifts = fejer_shifts(solve_annulus_map(*disk_pair, tol=1e-10), 5)
    else:
        shifts = leja_shifts(*disk_quads, 5)
    cert = error_certificate(shifts, *disk_quads)
    err = adi_iterate(disk_problem, shifts, return_errors=True)[-1]
    assert err <= cert + 1e-10


def test_shift_set_validation():
    with pytest.raises(ValueError):
        ShiftSet("newton", (1.0,), (2.0,), 1)
    with pytest.raises(ValueError):
        ShiftSet("faber", (1.0,), (2.0, 3.0), 2)
    with pytest.raises(ValueError):
        ShiftSet("faber", (1.0,), (1.0,), 1)  # zero meets pole


def test_certificate_requires_shifts(disk_quads):
    with pytest.raises(ValueError):
        error_certificate(ShiftSet("leja", (), (), 0), *disk_quads)


def test_leja_needs_dense_boundaries(disk_pair):
    e, f = disk_pair
    with pytest.raises(ValueError):
        leja_shifts(boundary_samples(e, 100), boundary_samples(f, 100), 3)


def test_unbounded_spectra_are_rejected():
    with pytest.raises(InvalidRegionError):
        sylvester_problem(disk(0.0, 1.0), ExteriorOf(disk(0.0, 2.0)), 5)
