"""Faber rationals built by Cauchy-filtering powers of the annulus map.

R_n is the filtered version of Phi^n across the E boundary; filtering
1/R_n across the F boundary yields 1/r_n, where r_n is a type (n, n)
rational whose sup/inf ratio witnesses the Zolotarev number upper bound.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import geometry
from .conformal import MobiusMap, phi
from .errors import EvaluationDomainError, InvalidRegionError, UncertifiedError
from .quadrature import (
    BoundaryQuadrature,
    cauchy_boundary,
    cauchy_stabilized,
    winding_of_polyline,
)

_POLE_EPS = 1e-14  # |R_n| below this marks a pole of 1/r_n (a zero of r_n)


@dataclass(frozen=True)
class FaberContext:
    """Quadrature-backed evaluator state for one map and one degree n.

    phi_n_on_e holds Phi^n at the E-boundary nodes (the density whose
    interior transform is R_n); rn_on_f holds R_n at the F-boundary nodes
    (the density whose transforms give 1/r_n).
    """

    map: object  # MobiusMap or AnnulusMap
    n: int
    quad_e: BoundaryQuadrature
    quad_f: BoundaryQuadrature
    phi_n_on_e: np.ndarray
    rn_on_f: np.ndarray
    rn_at_infinity: complex
    rn_e_boundary: np.ndarray      # R_n boundary values at the E nodes
    inv_rn_f_boundary: np.ndarray  # 1/r_n boundary values at the F nodes

    @property
    def inv_rn_on_f(self):
        return 1.0 / self.rn_on_f

    def diameter(self) -> float:
        return max(self.quad_e.diameter, self.quad_f.diameter)


def _phi_pow(amap, z, n: int):
    return phi(amap, z) ** n


def _far_point(amap) -> complex:
    quad_scale = max(amap.region_e.diameter(), amap.region_f.diameter())
    return 1e6 * quad_scale + 0.0j


def build_context(amap, n: int, n_quad: int = 512) -> FaberContext:
    """Cache the boundary data needed to evaluate R_n and r_n.

    n_quad nodes per boundary (>= 64).  If the map residual cannot certify
    |Phi^n| <= 1 on the E boundary, a warning reports the measured excess
    and the construction proceeds with it.
    """
    if n < 0 or n != int(n):
        raise ValueError("degree n must be a non-negative integer")
    if n_quad < 64:
        raise ValueError("need at least 64 quadrature nodes per boundary")
    from .conformal import ExteriorOf  # local import to avoid cycle at init

    if isinstance(amap.region_f, ExteriorOf):
        raise InvalidRegionError(
            "Faber construction implemented for bounded E and F only"
        )
    n = int(n)
    quad_e = geometry.boundary_samples(amap.region_e, n_quad)
    quad_f = geometry.boundary_samples(amap.region_f, n_quad)

    phi_n_on_e = _phi_pow(amap, quad_e.nodes, n)
    residual = getattr(amap, "residual", 0.0)
    excess = float(np.abs(phi_n_on_e).max()) - 1.0
    if excess > 4.0 * n * residual + 1e-10:
        warnings.warn(
            "map residual does not certify |Phi^n| <= 1 on the E boundary "
            f"(measured max 1 + {excess:.3e}); proceeding with measured values",
            stacklevel=2,
        )

    phi_n_on_f = _phi_pow(amap, quad_f.nodes, n)
    rn_on_f = phi_n_on_f + cauchy_stabilized(
        phi_n_on_e, quad_e, quad_f.nodes, side="exterior", at_z=phi_n_on_f
    )

    z_far = _far_point(amap)
    phi_far = _phi_pow(amap, z_far, n)
    rn_inf = phi_far + cauchy_stabilized(
        phi_n_on_e, quad_e, z_far, side="exterior", at_z=phi_far
    )
    rn_e_boundary = cauchy_boundary(phi_n_on_e, quad_e, quad_e.nodes, phi_n_on_e)
    inv_rn_on_f = 1.0 / rn_on_f
    inv_rn_f_boundary = cauchy_boundary(
        inv_rn_on_f, quad_f, quad_f.nodes, inv_rn_on_f
    )
    return FaberContext(
        map=amap,
        n=n,
        quad_e=quad_e,
        quad_f=quad_f,
        phi_n_on_e=phi_n_on_e,
        rn_on_f=rn_on_f,
        rn_at_infinity=complex(rn_inf),
        rn_e_boundary=rn_e_boundary,
        inv_rn_f_boundary=inv_rn_f_boundary,
    )


def _classify(ctx, z):
    """Membership masks of the targets against E and F."""
    zf = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    in_e, on_e = geometry.contains_many(ctx.map.region_e, zf)
    in_f, on_f = geometry.contains_many(ctx.map.region_f, zf)
    return zf, in_e, on_e, in_f, on_f


def eval_Rn(ctx: FaberContext, z):
    """R_n(z) on E and on the doubly connected exterior domain.

    Inside E: stabilized interior transform of the cached R_n boundary
    values.  On the E boundary: the boundary-limit transform of Phi^n.
    Elsewhere: Phi^n(z) plus the exterior transform, with Phi^n(z) itself
    as the continuation value so accuracy holds up to the boundary.
    Points in F are outside the domain of R_n.
    """
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    zf, in_e, on_e, in_f, on_f = _classify(ctx, z_arr)
    if np.any(in_f & ~on_f):
        raise EvaluationDomainError("R_n undefined in F")
    out = np.empty(zf.shape, dtype=complex)
    inside = in_e & ~on_e
    if np.any(inside):
        out[inside] = cauchy_stabilized(
            ctx.rn_e_boundary, ctx.quad_e, zf[inside], side="interior"
        )
    if np.any(on_e):
        out[on_e] = cauchy_boundary(
            ctx.phi_n_on_e, ctx.quad_e, zf[on_e],
            _phi_pow(ctx.map, zf[on_e], ctx.n),
        )
    rest = ~(in_e | on_e)
    if np.any(rest):
        phi_n = _phi_pow(ctx.map, zf[rest], ctx.n)
        out[rest] = phi_n + cauchy_stabilized(
            ctx.phi_n_on_e, ctx.quad_e, zf[rest], side="exterior", at_z=phi_n
        )
    if scalar:
        return complex(out[0])
    return out.reshape(z_arr.shape)


def eval_inv_rn(ctx: FaberContext, z):
    """1/r_n(z) everywhere; r_n itself is the reciprocal.

    Inside the F boundary this is the stabilized interior transform of
    the cached 1/r_n boundary values; on the boundary itself the
    boundary-limit transform of 1/R_n is used; outside it is 1/R_n(z)
    plus the exterior transform.  Near a zero of R_n (|R_n| < 1e-14) the
    result is the pole marker inf+0j; callers evaluating r_n treat it as
    a zero of r_n.
    """
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    zf, _, _, in_f, on_f = _classify(ctx, z_arr)
    out = np.empty(zf.shape, dtype=complex)
    inside = in_f & ~on_f
    if np.any(inside):
        out[inside] = cauchy_stabilized(
            ctx.inv_rn_f_boundary, ctx.quad_f, zf[inside], side="interior"
        )
    if np.any(on_f):
        rn_b = np.atleast_1d(eval_Rn(ctx, zf[on_f]))
        with np.errstate(divide="ignore", invalid="ignore"):
            out[on_f] = cauchy_boundary(
                ctx.inv_rn_on_f, ctx.quad_f, zf[on_f], 1.0 / rn_b
            )
    rest = ~(in_f | on_f)
    if np.any(rest):
        rn = np.atleast_1d(eval_Rn(ctx, zf[rest]))
        small = np.abs(rn) < _POLE_EPS
        with np.errstate(divide="ignore", invalid="ignore"):
            inv_rn = np.where(small, np.inf + 0.0j, 1.0 / rn)
        vals = inv_rn + cauchy_stabilized(
            ctx.inv_rn_on_f, ctx.quad_f, zf[rest], side="exterior",
            at_z=np.where(small, 0.0, inv_rn),
        )
        vals[small] = np.inf + 0.0j
        out[rest] = vals
    if scalar:
        return complex(out[0])
    return out.reshape(z_arr.shape)


def eval_rn(ctx: FaberContext, z):
    """r_n(z) as the reciprocal of eval_inv_rn; pole markers become zeros."""
    inv = eval_inv_rn(ctx, z)
    arr = np.atleast_1d(np.asarray(inv, dtype=complex))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 1.0 / arr
    out[~np.isfinite(arr)] = 0.0
    if np.asarray(inv).ndim == 0:
        return complex(out[0])
    return out.reshape(np.asarray(inv).shape)


def rn_on_e_boundary(ctx: FaberContext, t):
    """r_n at E-boundary params t, via the boundary-limit transforms."""
    z = ctx.map.region_e.boundary_point(t)
    rn = np.atleast_1d(
        cauchy_boundary(
            ctx.phi_n_on_e, ctx.quad_e, z, _phi_pow(ctx.map, z, ctx.n)
        )
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_rn = 1.0 / rn
    inv = inv_rn + cauchy_stabilized(
        ctx.inv_rn_on_f, ctx.quad_f, z, side="exterior", at_z=inv_rn
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 1.0 / inv
    out[~np.isfinite(out)] = 0.0
    return out


def _inv_rn_on_f_boundary(ctx, t):
    z = ctx.map.region_f.boundary_point(t)
    phi_n = _phi_pow(ctx.map, z, ctx.n)
    rn_z = phi_n + cauchy_stabilized(
        ctx.phi_n_on_e, ctx.quad_e, z, side="exterior", at_z=phi_n
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.atleast_1d(
            cauchy_boundary(ctx.inv_rn_on_f, ctx.quad_f, z, 1.0 / rn_z)
        )


def rn_on_f_boundary(ctx: FaberContext, t):
    """r_n at F-boundary params t (boundary limits of 1/r_n, inverted)."""
    inv = _inv_rn_on_f_boundary(ctx, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 / inv


def _abs_rn_on_e(ctx, t):
    return np.abs(rn_on_e_boundary(ctx, t))


def _abs_inv_rn_on_f(ctx, t):
    return np.abs(_inv_rn_on_f_boundary(ctx, t))


def _refine_max(fun, t0: float, half_width: float) -> float:
    res = minimize_scalar(
        lambda t: -float(fun(np.array([t]))[0]),
        bounds=(t0 - half_width, t0 + half_width),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return -float(res.fun)


def empirical_ratio(ctx: FaberContext, n_dense: int | None = None) -> float:
    """max over the E boundary of |r_n| over min over the F boundary.

    Extrema on the boundaries bound the extrema over the sets by the
    maximum principle, so the value upper-bounds the Zolotarev number up
    to sampling error.  Dense sampling (default 4x the node count) is
    followed by a bounded 1-D refinement around the best parameter.
    """
    if n_dense is None:
        n_dense = 4 * len(ctx.quad_e)
    te = np.arange(n_dense) / n_dense
    vals_e = _abs_rn_on_e(ctx, te)
    i = int(np.argmax(vals_e))
    max_e = max(
        float(vals_e[i]),
        _refine_max(lambda t: _abs_rn_on_e(ctx, t), float(te[i]), 1.0 / n_dense),
    )

    tf = np.arange(n_dense) / n_dense
    vals_f = _abs_inv_rn_on_f(ctx, tf)
    j = int(np.argmax(vals_f))
    max_inv_f = max(
        float(vals_f[j]),
        _refine_max(lambda t: _abs_inv_rn_on_f(ctx, t), float(tf[j]), 1.0 / n_dense),
    )
    return max_e * max_inv_f


def _phi_derivative(amap, z, step: float):
    return (phi(amap, z + step) - phi(amap, z - step)) / (2.0 * step)


def _segment_level_start(ctx, rho: float) -> complex:
    """A point with |Phi| = rho on the straight run between the two sets."""
    a = geometry.interior_anchor(ctx.map.region_e)
    b = geometry.interior_anchor(ctx.map.region_f)
    s = np.linspace(0.0, 1.0, 257)
    pts = a + s * (b - a)
    in_e, on_e = geometry.contains_many(ctx.map.region_e, pts)
    in_f, on_f = geometry.contains_many(ctx.map.region_f, pts)
    free = ~(in_e | on_e | in_f | on_f)
    if not np.any(free):
        raise UncertifiedError("no gap found between E and F on the center line")
    idx = np.nonzero(free)[0]
    vals = np.abs(phi(ctx.map, pts[idx]))
    below = idx[vals < rho]
    above = idx[vals > rho]
    if len(below) == 0 or len(above) == 0:
        raise UncertifiedError("level curve not bracketed between E and F")
    lo = float(s[below[-1]])
    hi = float(s[above[0]])
    if lo > hi:
        lo, hi = hi, lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(phi(ctx.map, a + mid * (b - a))) < rho:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return complex(a + 0.5 * (lo + hi) * (b - a))


def _trace_level_curve(ctx, rho: float, n_points: int):
    """Discretize {|Phi| = rho} by Newton continuation in arg Phi."""
    amap = ctx.map
    step = 1e-7 * ctx.diameter()
    z0 = _segment_level_start(ctx, rho)
    theta0 = float(np.angle(phi(amap, z0)))

    def newton(z, w, iters=12):
        for _ in range(iters):
            f = phi(amap, z) - w
            if abs(f) <= 1e-12 * rho:
                break
            z = z - f / _phi_derivative(amap, z, step)
        return z

    n_coarse = 128
    coarse = np.empty(n_coarse + 1, dtype=complex)
    coarse[0] = z0
    for k in range(1, n_coarse + 1):
        w = rho * np.exp(1j * (theta0 + 2.0 * math.pi * k / n_coarse))
        coarse[k] = newton(coarse[k - 1], w)
    if abs(coarse[-1] - z0) > 1e-6 * ctx.diameter():
        raise UncertifiedError("level curve tracing failed to close")

    # refine all points in parallel from interpolated starts
    frac = np.arange(n_points) / n_points
    pos = frac * n_coarse
    base = np.minimum(pos.astype(int), n_coarse - 1)
    lam = pos - base
    z = coarse[base] * (1.0 - lam) + coarse[base + 1] * lam
    w = rho * np.exp(1j * (theta0 + 2.0 * math.pi * frac))
    for _ in range(12):
        f = phi(amap, z) - w
        if np.abs(f).max() <= 1e-12 * rho:
            break
        z = z - f / _phi_derivative(amap, z, step)
    if np.abs(phi(amap, z) - w).max() > 1e-9 * rho:
        raise UncertifiedError("level curve refinement did not converge")
    return z


def count_zeros(ctx: FaberContext, n_points: int | None = None) -> int:
    """Zero count of R_n inside a level curve |Phi| = rho.

    rho is chosen with rho^n > 1 + max |R_n on E| so that, on the curve,
    |R_n - Phi^n| <= 1 + sup_E |R_n| < |Phi^n| and the winding of R_n
    equals that of Phi^n (argument principle).  rho must also stay below
    |Phi(infinity)|: at that value the level set passes through infinity
    and beyond it the curve surrounds F, not E.  Returns the winding
    number, which must equal n.
    """
    if ctx.n == 0:
        raise UncertifiedError("zero count not certified at this n")
    h = ctx.map.h
    t_dense = np.arange(4 * len(ctx.quad_e)) / (4 * len(ctx.quad_e))
    z_dense = ctx.map.region_e.boundary_point(t_dense)
    sup_rn = float(
        np.abs(
            cauchy_boundary(
                ctx.phi_n_on_e, ctx.quad_e, z_dense,
                _phi_pow(ctx.map, z_dense, ctx.n),
            )
        ).max()
    )
    zc = ctx.quad_e.nodes.mean()
    far = zc + 1e7 * ctx.diameter() * np.exp(0.5j * math.pi * np.arange(4))
    phi_inf = float(np.abs(phi(ctx.map, far)).min())
    rho_min = (1.02 * (1.0 + sup_rn)) ** (1.0 / ctx.n)
    rho_cap = 0.98 * min(h, phi_inf)
    if rho_min >= rho_cap:
        raise UncertifiedError("zero count not certified at this n")
    rho = math.sqrt(rho_min * rho_cap)

    if n_points is None:
        n_points = max(512, 32 * ctx.n)
    for _ in range(3):
        curve = _trace_level_curve(ctx, rho, n_points)
        values = np.atleast_1d(eval_Rn(ctx, curve))
        closed = np.concatenate([values, values[:1]])
        steps = np.angle(closed[1:] / closed[:-1])
        if np.abs(steps).max() < 0.5 * math.pi:
            break
        n_points *= 2
    winding = winding_of_polyline(values, about=0.0)
    if winding != ctx.n:
        raise UncertifiedError(
            f"winding of R_n on the level curve is {winding}, expected {ctx.n}"
        )
    return winding
