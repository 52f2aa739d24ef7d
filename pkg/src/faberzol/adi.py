"""ADI iteration for AX - XB = M and the three shift families.

Shift quality is judged by the certificate
    max_{z in dE} |s_k(z)| / min_{z in dF} |s_k(z)|,
with s_k(z) = prod_j (z - kappa_j)/(z - tau_j), which bounds the relative
2-norm error of k ADI steps when A and B are normal with spectra in E, F.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .conformal import MobiusMap, psi_boundary, _is_exterior
from .errors import (
    FaberzolError,
    InvalidRegionError,
    QuadratureError,
    UncertifiedError,
)
from .faber import FaberContext, rn_on_e_boundary, rn_on_f_boundary
from .geometry import Region, contains_many, random_points
from .quadrature import BoundaryQuadrature
from .rational import aaa_fit, poles_zeros

_SHIFT_KINDS = ("faber", "fejer", "leja")


@dataclass(frozen=True)
class ShiftSet:
    """k shift pairs: kappa near E (zeros side), tau near F (poles side)."""

    kind: str
    kappa: tuple
    tau: tuple
    k: int

    def __post_init__(self):
        if self.kind not in _SHIFT_KINDS:
            raise ValueError(f"unknown shift kind {self.kind!r}")
        kappa = tuple(complex(z) for z in self.kappa)
        tau = tuple(complex(z) for z in self.tau)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "tau", tau)
        if len(kappa) != self.k or len(tau) != self.k:
            raise ValueError("shift lists must both have length k")
        if set(kappa) & set(tau):
            raise ValueError("kappa and tau shifts must be distinct")


@dataclass(frozen=True, eq=False)
class SylvesterProblem:
    """AX - XB = M with normal (here diagonal) A, B and a reference X."""

    region_e: Region
    region_f: Region
    a: np.ndarray
    b: np.ndarray
    rhs: np.ndarray
    solution: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        m, p = a.shape[0], b.shape[0]
        if a.shape != (m, m) or b.shape != (p, p):
            raise ValueError("A and B must be square")
        rhs = np.asarray(self.rhs, dtype=complex)
        sol = np.asarray(self.solution, dtype=complex)
        if rhs.shape != (m, p) or sol.shape != (m, p):
            raise ValueError("right-hand side and solution must be m x p")
        for mat, region, name in ((a, self.region_e, "A"),
                                  (b, self.region_f, "B")):
            lam = np.linalg.eigvals(mat)
            inside, on = contains_many(region, lam)
            if not np.all(inside | on):
                raise InvalidRegionError(
                    f"spectrum of {name} is not contained in its region"
                )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "solution", sol)

    @property
    def shape(self):
        return self.rhs.shape


def sylvester_problem(region_e, region_f, m: int, p=None, seed=0):
    """Random diagonal test problem with spectra inside E and F.

    The reference solution is computed once by a dense direct solve.
    """
    if _is_exterior(region_e) or _is_exterior(region_f):
        raise InvalidRegionError("spectra must lie in bounded regions")
    p = m if p is None else p
    if m < 1 or p < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = np.random.default_rng(seed)
    a = np.diag(random_points(region_e, m, rng))
    b = np.diag(random_points(region_f, p, rng))
    rhs = rng.standard_normal((m, p)) + 1j * rng.standard_normal((m, p))
    sol = scipy.linalg.solve_sylvester(a, -b, rhs)
    return SylvesterProblem(region_e, region_f, a, b, rhs, sol)


def spectral_norm(mat, max_iter: int = 200, rtol: float = 1e-8) -> float:
    """Largest singular value by power iteration on mat^H mat."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(mat.shape[1]) + 1j * rng.standard_normal(mat.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = mat @ v
        estimate = np.linalg.norm(w)
        if estimate == 0.0:
            return 0.0
        v = mat.conj().T @ w
        v /= np.linalg.norm(v)
        if abs(estimate - sigma) <= rtol * estimate:
            return float(estimate)
        sigma = estimate
    return float(sigma)


def adi_iterate(problem: SylvesterProblem, shifts: ShiftSet, k=None,
                return_errors: bool = False):
    """Run k ADI steps from X^(0) = 0.

    Each step solves the two half-step systems
        (A - tau_j I) X^(j-1/2) = X^(j-1) (B - tau_j I) + M,
        X^(j) (B - kappa_j I) = (A - kappa_j I) X^(j-1/2) - M.
    Returns the list [X^(1), ..., X^(k)], or, with return_errors, the
    relative 2-norm errors of [X^(0), ..., X^(k)] against the reference.
    """
    k = shifts.k if k is None else int(k)
    if k < 0 or k > shifts.k:
        raise ValueError(f"need 0 <= k <= {shifts.k}, got {k}")
    a, b, rhs = problem.a, problem.b, problem.rhs
    m, p = problem.shape
    eye_m = np.eye(m)
    eye_p = np.eye(p)
    x = np.zeros((m, p), dtype=complex)
    history = []
    for j in range(k):
        tau = shifts.tau[j]
        kappa = shifts.kappa[j]
        try:
            half = np.linalg.solve(a - tau * eye_m, x @ (b - tau * eye_p) + rhs)
            x = np.linalg.solve((b - kappa * eye_p).T,
                                ((a - kappa * eye_m) @ half - rhs).T).T
        except np.linalg.LinAlgError as exc:
            raise FaberzolError("shift collides with spectrum") from exc
        if not np.all(np.isfinite(x)):
            raise FaberzolError("shift collides with spectrum")
        history.append(x.copy())
    if not return_errors:
        return history
    ref_norm = spectral_norm(problem.solution)
    errors = [1.0]
    errors.extend(
        spectral_norm(it - problem.solution) / ref_norm for it in history
    )
    return np.asarray(errors)


def _log_shift_product(z, kappa, tau):
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.sum(np.log(np.abs(z[:, None] - kappa[None, :])), axis=1)
        den = np.sum(np.log(np.abs(z[:, None] - tau[None, :])), axis=1)
        return num - den


def error_certificate(shifts: ShiftSet,
                      quad_e: BoundaryQuadrature,
                      quad_f: BoundaryQuadrature) -> float:
    """max_{dE} |s_k| / min_{dF} |s_k|, computed in log magnitude.

    Bounds the relative 2-norm ADI error after k steps for normal
    coefficients with spectra in E and F.
    """
    if shifts.k == 0:
        raise ValueError("shift set is empty")
    kappa = np.asarray(shifts.kappa)
    tau = np.asarray(shifts.tau)
    log_e = _log_shift_product(quad_e.nodes, kappa, tau)
    log_f = _log_shift_product(quad_f.nodes, kappa, tau)
    # a kappa zero on dE (or tau pole on dF) only pushes that sample away
    # from the extremum; the opposite collision poisons it
    max_e = float(np.max(log_e))
    min_f = float(np.min(log_f))
    if not (math.isfinite(max_e) and math.isfinite(min_f)):
        raise QuadratureError(
            "shift coincides with a boundary sample; refine the sampling"
        )
    try:
        return math.exp(max_e - min_f)
    except OverflowError:
        return math.inf


def _drop_doublets(poles, zeros, tol: float):
    """Remove near-cancelling zero/pole pairs from a rational fit.

    Fits of noisy boundary data absorb the data error into spurious pairs
    whose zero and pole nearly coincide; a genuine zero and pole of r_k
    sit in E and F respectively and can never be within tol of each other.
    Pairs are matched greedily, closest first.
    """
    poles = np.asarray(poles, dtype=complex)
    zeros = np.asarray(zeros, dtype=complex)
    while poles.size and zeros.size:
        dist = np.abs(zeros[:, None] - poles[None, :])
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        if dist[i, j] > tol:
            break
        zeros = np.delete(zeros, i)
        poles = np.delete(poles, j)
    return poles, zeros


def _pick_near(candidates, region, samples, k, label):
    """Keep the k candidates nearest the region, padding if under-resolved."""
    if candidates.size == 0:
        raise UncertifiedError(f"shifts uncertified: no {label} resolved")
    dist = np.abs(candidates[:, None] - samples[None, :]).min(axis=1)
    inside, on = contains_many(region, candidates)
    dist[inside | on] = 0.0
    order = np.argsort(dist, kind="stable")
    if candidates.size > k:
        warnings.warn(
            f"{candidates.size} {label} resolved; keeping the {k} nearest",
            stacklevel=3,
        )
    keep = candidates[np.sort(order[:k])]
    if keep.size < k:
        warnings.warn(
            f"only {keep.size} {label} resolved; padding to {k}",
            stacklevel=3,
        )
        pad = np.full(k - keep.size, candidates[order[0]])
        keep = np.concatenate([keep, pad])
    return keep


def faber_shifts(ctx: FaberContext, k: int) -> ShiftSet:
    """Zeros and poles of r_k, recovered from boundary fits.

    r_k is sampled on each boundary and fit by AAA; kappa are the zeros of
    the E-side fit, tau the poles of the F-side fit.
    """
    if ctx.n != k:
        raise ValueError(f"context was built at degree {ctx.n}, need {k}")
    if k < 1:
        raise ValueError("need at least one shift")
    t = (np.arange(2000) + 0.5) / 2000.0
    z_e = ctx.map.region_e.boundary_point(t)
    z_f = ctx.map.region_f.boundary_point(t)
    f_e = rn_on_e_boundary(ctx, t)
    f_f = rn_on_f_boundary(ctx, t)
    shift_sets = []
    for z, f, region, want in ((z_e, f_e, ctx.map.region_e, "zeros"),
                               (z_f, f_f, ctx.map.region_f, "poles")):
        fit = aaa_fit(z, f, tol=1e-12, max_degree=k + 12)
        scale = float(np.max(np.abs(f)))
        if fit.residual > 1e-6 * scale:
            raise UncertifiedError(
                "shifts uncertified: boundary fit residual "
                f"{fit.residual / scale:.2e} exceeds 1e-06"
            )
        poles, zeros = poles_zeros(fit)
        span = float(np.abs(z - z.mean()).max())
        poles, zeros = _drop_doublets(poles, zeros, 1e-5 * span)
        cand = zeros if want == "zeros" else poles
        shift_sets.append(_pick_near(cand, region, z, k, want))
    return ShiftSet("faber", tuple(shift_sets[0]), tuple(shift_sets[1]), k)


def fejer_shifts(amap, k: int) -> ShiftSet:
    """Images of equispaced annulus boundary points under the inverse map."""
    if k < 1:
        raise ValueError("need at least one shift")
    roots = np.exp(2j * np.pi * np.arange(k) / k)
    kappa = np.array([psi_boundary(amap, w) for w in roots])
    tau = np.array([psi_boundary(amap, amap.h * w) for w in roots])
    if not _is_exterior(amap.region_f):
        # mirror-symmetric pair F = -E: pair each tau with -conj(kappa)
        mirrored = -np.conj(kappa)
        t = np.arange(4096) / 4096.0
        bnd = amap.region_f.boundary_point(t)
        gap = np.abs(mirrored[:, None] - bnd[None, :]).min(axis=1).max()
        diam = max(amap.region_e.diameter(), amap.region_f.diameter())
        if gap <= 1e-6 * diam:
            tau = mirrored
    return ShiftSet("fejer", tuple(kappa), tuple(tau), k)


def leja_shifts(quad_e: BoundaryQuadrature,
                quad_f: BoundaryQuadrature, k: int) -> ShiftSet:
    """Greedy shifts: grow s_j one zero/pole pair at a time.

    kappa_{j+1} maximizes |s_j| over the E samples, then tau_{j+1}
    minimizes |s_j (z - kappa_{j+1})| over the F samples.  Products are
    tracked in log magnitude; ties break to the lowest sample index, so
    with s_0 = 1 the first zero is the first E sample.
    """
    if k < 1:
        raise ValueError("need at least one shift")
    z_e, z_f = quad_e.nodes, quad_f.nodes
    if z_e.size < 500 or z_f.size < 500:
        raise ValueError("need at least 500 boundary samples per side")
    log_e = np.zeros(z_e.size)
    log_f = np.zeros(z_f.size)
    kappa, tau = [], []
    with np.errstate(divide="ignore"):
        for _ in range(k):
            kap = z_e[int(np.argmax(log_e))]
            log_e += np.log(np.abs(z_e - kap))
            log_f += np.log(np.abs(z_f - kap))
            ta = z_f[int(np.argmin(log_f))]
            log_e -= np.log(np.abs(z_e - ta))
            log_f -= np.log(np.abs(z_f - ta))
            kappa.append(kap)
            tau.append(ta)
    return ShiftSet("leja", tuple(kappa), tuple(tau), k)
