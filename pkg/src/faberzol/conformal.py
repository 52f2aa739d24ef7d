"""Conformal maps from the complement of a pair of disjoint sets onto an
annulus A = {1 < |w| < h}.

Two representations are provided:

* MobiusMap: exact closed form when both sets are disks.
* AnnulusMap: a numerical map for general pairs, written as

      Phi(z) = (z - z_E)/(z - z_F) * exp(g(z))        (case A1)
      Phi(z) = (z - z_E) * exp(g(z))                  (case A2)

  with g analytic on the domain.  g is expanded in Laurent-type series
  anchored inside each set plus poles clustered exponentially toward the
  corners (lightning-style), and the real-linear conditions log|Phi| = 0
  on the E boundary and log|Phi| = L on the F boundary are solved by
  weighted least squares with the level L = log h as an extra unknown.
  Exponentiating the log ansatz removes every branch-cut issue.

Case A1 has two compact sets; case A2 has E inside the bounded
complement of an unbounded F (ExteriorOf a compact region).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import geometry
from .errors import (
    EvaluationDomainError,
    InvalidRegionError,
    MapNotResolvedError,
    NotDisjointError,
)
from .geometry import Disk, Polygon, Region

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExteriorOf:
    """The closed unbounded complement of the interior of ``inner``."""

    inner: Region

    def diameter(self) -> float:
        return self.inner.diameter()


def _is_exterior(region) -> bool:
    return isinstance(region, ExteriorOf)


@dataclass(frozen=True)
class MobiusMap:
    """Phi(z) = (a z + b)/(c z + d) mapping the two-disk complement onto
    1 < |w| < h, with |Phi| = 1 on the E circle and h on the F circle."""

    a: complex
    b: complex
    c: complex
    d: complex
    h: float
    region_e: Region
    region_f: Region

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c) == 0.0:
            raise InvalidRegionError("degenerate Mobius map (ad - bc = 0)")

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        return (self.d * w - self.b) / (-self.c * w + self.a)


def mobius_two_disks(region_e: Region, region_f: Region) -> MobiusMap:
    """Exact annulus map for two disjoint closed disks.

    The limit points p (inside E) and q (inside F) of the coaxial circle
    pencil are the common inverse points of the two circles; the map
    (z - p)/(z - q), normalized to 1 at the far endpoint of E on the
    center line, sends the circles to concentric circles about 0.
    """
    if not (isinstance(region_e, Disk) and isinstance(region_f, Disk)):
        raise InvalidRegionError("mobius_two_disks needs two disk regions")
    c1, r1 = region_e.true_center, region_e.true_radius
    c2, r2 = region_f.true_center, region_f.true_radius
    d = abs(c2 - c1)
    if d <= r1 + r2 + 1e-15 * (r1 + r2):
        raise NotDisjointError("disks overlap or touch")
    direction = (c2 - c1) / d
    big_b = d * d + r1 * r1 - r2 * r2
    disc = math.sqrt(big_b * big_b - 4.0 * d * d * r1 * r1)
    p = (big_b - disc) / (2.0 * d)
    q = (big_b + disc) / (2.0 * d)
    pp = c1 + p * direction
    qq = c1 + q * direction
    z_far_e = c1 - r1 * direction
    t_star = (z_far_e - pp) / (z_far_e - qq)
    # Phi(z) = (z - pp) / (t_star * (z - qq))
    a, b = 1.0 + 0.0j, -pp
    c, dd = t_star, -t_star * qq
    z_far_f = c2 + r2 * direction
    h = abs((z_far_f - pp) / (t_star * (z_far_f - qq)))
    return MobiusMap(a=a, b=b, c=c, d=dd, h=float(h),
                     region_e=region_e, region_f=region_f)


# -- numerical annulus map -------------------------------------------------

@dataclass(frozen=True)
class _LogBasis:
    """Columns of the analytic part g(z); shared by solver and evaluator."""

    variant: str
    anchor_e: complex
    anchor_f: complex  # unused in A2
    scale_e: float
    scale_f: float     # outer polynomial scale in A2
    degree_e: int
    degree_f: int
    poles: np.ndarray        # clustered pole locations (possibly empty)
    pole_scales: np.ndarray  # one positive scale per pole

    @property
    def n_columns(self) -> int:
        return 1 + self.degree_e + self.degree_f + len(self.poles)

    def columns(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        cols = np.empty((z.size, self.n_columns), dtype=complex)
        cols[:, 0] = 1.0
        j = 1
        base = self.scale_e / (z - self.anchor_e)
        term = np.ones_like(z)
        for _ in range(self.degree_e):
            term = term * base
            cols[:, j] = term
            j += 1
        if self.variant == "A1":
            base = self.scale_f / (z - self.anchor_f)
        else:
            base = (z - self.anchor_e) / self.scale_f
        term = np.ones_like(z)
        for _ in range(self.degree_f):
            term = term * base
            cols[:, j] = term
            j += 1
        for p, s in zip(self.poles, self.pole_scales):
            cols[:, j] = s / (z - p)
            j += 1
        return cols


@dataclass(frozen=True)
class AnnulusMap:
    """Numerically solved annulus map; evaluate through phi()."""

    region_e: Region
    region_f: object  # Region or ExteriorOf
    variant: str
    anchor_e: complex
    anchor_f: complex
    h: float
    residual: float
    basis: _LogBasis
    coef: np.ndarray  # complex coefficients aligned with basis columns


def _log_abs_base(variant, anchor_e, anchor_f, z):
    z = np.asarray(z, dtype=complex)
    out = np.log(np.abs(z - anchor_e))
    if variant == "A1":
        out = out - np.log(np.abs(z - anchor_f))
    return out


def _eval_g(basis: _LogBasis, coef, z):
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    step = max(1, (1 << 21) // max(1, basis.n_columns))
    for lo in range(0, flat.size, step):
        hi = min(flat.size, lo + step)
        out[lo:hi] = basis.columns(flat[lo:hi]) @ coef
    return out.reshape(z.shape)


def phi(annulus_map, z, validate: bool = False):
    """Evaluate the annulus map at points of the closed domain."""
    if validate:
        _check_domain(annulus_map, z)
    if isinstance(annulus_map, MobiusMap):
        m = annulus_map
        z = np.asarray(z, dtype=complex)
        return (m.a * z + m.b) / (m.c * z + m.d)
    m = annulus_map
    g = _eval_g(m.basis, m.coef, z)
    z = np.asarray(z, dtype=complex)
    if m.variant == "A1":
        return (z - m.anchor_e) / (z - m.anchor_f) * np.exp(g)
    return (z - m.anchor_e) * np.exp(g)


def _check_domain(annulus_map, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    region_e = annulus_map.region_e
    region_f = annulus_map.region_f
    in_e, _ = geometry.contains_many(region_e, z)
    if np.any(in_e):
        raise EvaluationDomainError("target(s) inside E: outside domain of phi")
    if _is_exterior(region_f):
        inside_inner, on = geometry.contains_many(region_f.inner, z)
        if np.any(~inside_inner & ~on):
            raise EvaluationDomainError("target(s) inside F: outside domain of phi")
    else:
        in_f, _ = geometry.contains_many(region_f, z)
        if np.any(in_f):
            raise EvaluationDomainError("target(s) inside F: outside domain of phi")


# -- sampling for the least-squares solve ----------------------------------

def _corner_clustered_params(region: Polygon, per_side: int, uniform: int):
    """Boundary params clustered geometrically toward each polygon corner."""
    cum = region._cumulative()
    params = []
    n_edges = len(cum) - 1
    offsets = np.array([1.0, 0.78, 0.55])
    for k in range(n_edges):
        lo, hi = cum[k], cum[k + 1]
        width = hi - lo
        # uniform interior coverage
        params.append(lo + width * (np.arange(1, uniform + 1) / (uniform + 1)))
        # dyadic clusters toward both corners
        depth = np.concatenate(
            [0.5 * (0.5**j) * offsets for j in range(per_side)]
        )
        depth = depth[depth > 1e-13]
        params.append(lo + width * depth)
        params.append(hi - width * depth)
    return np.unique(np.concatenate(params))


def _solver_params(region, degree: int, per_side: int):
    if isinstance(region, Polygon):
        # 3x oversampling per edge: at 1.5x the ill-conditioned directions
        # of the fit are unconstrained between samples and blow up there
        uniform = max(24, int(math.ceil(3.0 * degree)))
        return _corner_clustered_params(region, per_side, uniform)
    n = max(256, 6 * degree)
    return np.arange(n) / n


def _validation_params(params: np.ndarray):
    p = np.sort(params)
    mids = (p + np.roll(p, -1)) / 2.0
    mids[-1] = (p[-1] + 1.0 + p[0]) / 2.0 % 1.0
    return np.unique(np.concatenate([p, mids]))


def _corner_poles(region: Polygon, per_corner: int, sigma: float = 4.0):
    """Lightning poles: clustered at each corner along the bisector pointing
    into the region, scaled to half the shorter adjacent edge.

    Tapered spacing d_j = exp(-sigma (sqrt(N) - sqrt(j))) rather than a fixed
    geometric ratio: the fixed ratio stalls near 1e-4 on rectangle pairs while
    the taper converges like exp(-c sqrt(N)) down to 1e-9 and below.
    """
    v = np.asarray(region.vertices, dtype=complex) * region.scale + region.shift
    n = len(v)
    poles, scales = [], []
    j = np.arange(1, per_corner + 1)
    profile = np.exp(-sigma * (np.sqrt(per_corner) - np.sqrt(j)))
    for k in range(n):
        u, w = v[k - 1], v[(k + 1) % n]
        e_in = v[k] - u
        e_out = w - v[k]
        len_min = min(abs(e_in), abs(e_out))
        bis = (u - v[k]) / abs(u - v[k]) + (w - v[k]) / abs(w - v[k])
        if abs(bis) < 1e-12:
            bis = 1j * e_out / abs(e_out)
        bis = bis / abs(bis)
        probe = v[k] + 1e-6 * len_min * bis
        try:
            inside = geometry.contains(region, probe)
        except Exception:
            inside = False
        if not inside:
            bis = -bis
        dist = 0.5 * len_min * profile
        # drop levels too deep for boundary sampling to see between nodes
        dist = dist[dist > 1e-12 * len_min]
        poles.extend(v[k] + bis * dist)
        scales.extend(dist)
    return np.asarray(poles, dtype=complex), np.asarray(scales, dtype=float)


def _region_scale(region, anchor) -> float:
    # In-radius about the anchor: keeps |scale/(z - anchor)|^k <= 1 on the
    # boundary, so high Laurent degrees stay well behaved in the fit.
    t = np.linspace(0.0, 1.0, 1024, endpoint=False)
    return 0.95 * float(np.abs(region.boundary_point(t) - anchor).min())


def _spine_poles(region, count: int):
    """Simple poles along the principal axis of an elongated region.

    A Laurent family about one anchor diverges on boundary arcs closer to
    the anchor than the region's own singularity spread, which stalls the
    fit near 1e-6 on tall boxes; point charges along the spine restore it.
    Near-circular regions (extent ratio below 2) return no poles.
    """
    t = np.arange(1024) / 1024.0
    pts = region.boundary_point(t)
    c = pts.mean()
    xy = np.column_stack([(pts - c).real, (pts - c).imag])
    val, vec = np.linalg.eigh(xy.T @ xy)
    if val[1] <= 4.0 * val[0] or count < 1:
        return np.empty(0, complex), np.empty(0)
    u = complex(vec[0, 1], vec[1, 1])
    s = ((pts - c) * np.conj(u)).real
    lo, hi = s.min(), s.max()
    cand = c + u * np.linspace(lo, hi, count + 2)[1:-1]
    clear = np.abs(cand[:, None] - pts[None, :]).min(axis=1)
    keep = clear >= 0.05 * (hi - lo)
    return cand[keep], clear[keep]


def solve_annulus_map(
    region_e,
    region_f,
    tol: float = 1e-8,
    max_degree: int = 128,
    poles_per_corner: int = 64,
    nq_check: int = 512,
) -> AnnulusMap:
    """Solve for the annulus map of a disjoint pair (case A1 or A2).

    Laurent degrees climb 8, 16, ... up to max_degree until the boundary
    residual max(| |Phi|-1 | on dE, | |Phi|/h - 1 | on dF) meets tol;
    otherwise MapNotResolvedError carries the best residual reached.
    """
    variant = "A2" if _is_exterior(region_f) else "A1"
    f_inner = region_f.inner if variant == "A2" else region_f
    _check_pair(region_e, region_f, variant)

    anchor_e = geometry.interior_anchor(region_e)
    anchor_f = geometry.interior_anchor(f_inner) if variant == "A1" else 0.0 + 0.0j
    scale_e = _region_scale(region_e, anchor_e)
    scale_f = _region_scale(f_inner, anchor_f)
    if variant == "A2":
        # outer polynomial scale: radius of the outer boundary about anchor_e
        t = np.linspace(0.0, 1.0, 256, endpoint=False)
        scale_f = float(np.abs(f_inner.boundary_point(t) - anchor_e).max())

    poles_e, pscale_e = (
        _corner_poles(region_e, poles_per_corner)
        if isinstance(region_e, Polygon)
        else (np.empty(0, complex), np.empty(0))
    )
    poles_f, pscale_f = (
        _corner_poles(f_inner, poles_per_corner)
        if isinstance(f_inner, Polygon)
        else (np.empty(0, complex), np.empty(0))
    )
    if variant == "A2" and len(poles_f):
        # poles for the outer boundary must sit beyond it, inside F
        pass  # _corner_poles already points them out of the bounded side

    # boundary sampling must resolve the deepest pole cluster level
    depth = 4.0 * (math.sqrt(poles_per_corner) - 1.0) / math.log(2.0)
    per_side = max(30, int(math.ceil(depth)) + 3)

    best = None
    degree = 8
    while degree <= max_degree:
        spines, spine_scales = [], []
        for reg in ([region_e, f_inner] if variant == "A1" else [region_e]):
            sp, sc = _spine_poles(reg, degree)
            spines.append(sp)
            spine_scales.append(sc)
        basis = _LogBasis(
            variant=variant,
            anchor_e=anchor_e,
            anchor_f=anchor_f,
            scale_e=scale_e,
            scale_f=scale_f,
            degree_e=degree,
            degree_f=degree,
            poles=np.concatenate([poles_e, poles_f, *spines]),
            pole_scales=np.concatenate([pscale_e, pscale_f, *spine_scales]),
        )
        coef, level = _solve_level(region_e, f_inner, variant, basis,
                                   anchor_e, anchor_f, degree, per_side)
        residual = _map_residual(region_e, f_inner, variant, basis, coef,
                                 anchor_e, anchor_f, level, degree, per_side)
        if best is None or residual < best[0]:
            best = (residual, basis, coef, level)
        if residual <= tol:
            break
        degree *= 2
    residual, basis, coef, level = best
    h = math.exp(level)
    amap = AnnulusMap(
        region_e=region_e,
        region_f=region_f,
        variant=variant,
        anchor_e=anchor_e,
        anchor_f=anchor_f,
        h=float(h),
        residual=float(residual),
        basis=basis,
        coef=coef,
    )
    if residual > tol:
        raise MapNotResolvedError(
            f"map not resolved: residual {residual:.3e} > tol {tol:.1e}",
            residual=residual,
        )
    if h <= 1.0:
        raise MapNotResolvedError(f"map not resolved: h = {h} <= 1", residual=residual)
    return amap


def _check_pair(region_e, region_f, variant):
    f_inner = region_f.inner if variant == "A2" else region_f
    te = np.linspace(0.0, 1.0, 512, endpoint=False)
    be = region_e.boundary_point(te)
    bf = f_inner.boundary_point(te)
    if variant == "A1":
        in_f, on_f = geometry.contains_many(region_f, be)
        in_e, on_e = geometry.contains_many(region_e, bf)
        if np.any(in_f | on_f) or np.any(in_e | on_e):
            raise NotDisjointError("E and F boundaries intersect or overlap")
    else:
        inside, on = geometry.contains_many(f_inner, be)
        if not np.all(inside & ~on):
            raise NotDisjointError("case A2 requires E inside the bounded "
                                   "complement of F")


def _solve_level(region_e, f_inner, variant, basis, anchor_e, anchor_f,
                 degree, per_side=30):
    rows_a, rhs_a, wts = [], [], []
    is_f_side = []
    for region, f_side in ((region_e, False), (f_inner, True)):
        params = _solver_params(region, degree, per_side)
        pts = region.boundary_point(params)
        spacing = _param_spacing(params)
        w = np.sqrt(spacing)
        cols = basis.columns(pts)
        rows_a.append(cols)
        rhs_a.append(-_log_abs_base(variant, anchor_e, anchor_f, pts))
        wts.append(w)
        is_f_side.append(np.full(pts.size, f_side))
    cols = np.vstack(rows_a)
    rhs = np.concatenate(rhs_a)
    w = np.concatenate(wts)
    f_side = np.concatenate(is_f_side)

    # Real-linear system: unknowns [Re a0, (Re, Im) per remaining column, L].
    n_cols = basis.n_columns
    a_real = np.empty((cols.shape[0], 1 + 2 * (n_cols - 1) + 1))
    a_real[:, 0] = cols[:, 0].real
    a_real[:, 1 : 2 * n_cols - 1 : 2] = cols[:, 1:].real
    a_real[:, 2 : 2 * n_cols - 1 : 2] = -cols[:, 1:].imag
    a_real[:, -1] = np.where(f_side, -1.0, 0.0)
    a_real *= w[:, None]
    b = rhs * w

    scale = np.linalg.norm(a_real, axis=0)
    scale[scale == 0.0] = 1.0
    x, *_ = np.linalg.lstsq(a_real / scale, b, rcond=None)
    x = x / scale
    coef = np.empty(n_cols, dtype=complex)
    coef[0] = x[0]
    coef[1:] = x[1 : 2 * n_cols - 1 : 2] + 1j * x[2 : 2 * n_cols - 1 : 2]
    level = float(x[-1])
    return coef, level


def _param_spacing(params):
    p = np.sort(params)
    gaps = np.diff(np.concatenate([p, [p[0] + 1.0]]))
    spacing = (gaps + np.roll(gaps, 1)) / 2.0
    return spacing


def _map_residual(region_e, f_inner, variant, basis, coef,
                  anchor_e, anchor_f, level, degree, per_side=30):
    worst = 0.0
    for region, target in ((region_e, 0.0), (f_inner, level)):
        params = _validation_params(_solver_params(region, degree, per_side))
        pts = region.boundary_point(params)
        log_mod = _log_abs_base(variant, anchor_e, anchor_f, pts) + np.real(
            _eval_g(basis, coef, pts)
        )
        with np.errstate(over="ignore"):
            # | |Phi| - target_modulus | / target_modulus = |exp(err) - 1|
            err = np.abs(np.expm1(log_mod - target))
        worst = max(worst, float(err.max()))
    return worst


# -- boundary correspondence -----------------------------------------------

def psi_boundary(annulus_map, w) -> complex:
    """Point z on the E (|w| = 1) or F (|w| = h) boundary with phi(z) = w.

    Uses the monotone boundary correspondence of the argument plus 1-D
    root refinement; for a MobiusMap the closed-form inverse is used.
    """
    w = complex(w)
    h = annulus_map.h
    if abs(abs(w) - 1.0) <= 1e-6:
        on_e = True
    elif abs(abs(w) - h) <= 1e-6 * max(1.0, h):
        on_e = False
    else:
        raise EvaluationDomainError(
            f"|w| = {abs(w):g} is on neither annulus boundary (1 or {h:g})"
        )
    if isinstance(annulus_map, MobiusMap):
        z = complex(annulus_map.inverse(w))
        return z
    region = annulus_map.region_e if on_e else (
        annulus_map.region_f.inner
        if _is_exterior(annulus_map.region_f)
        else annulus_map.region_f
    )
    n = 4096
    t = np.arange(n + 1) / n
    vals = phi(annulus_map, region.boundary_point(t % 1.0))
    ang = np.unwrap(np.angle(vals))
    total = ang[-1] - ang[0]
    if abs(abs(total) - _TWO_PI) > 1e-3:
        raise EvaluationDomainError(
            "boundary correspondence not resolved; increase samples"
        )
    target = math.atan2(w.imag, w.real)
    # shift target into the covered angle range
    k_lo = math.ceil((min(ang[0], ang[-1]) - target) / _TWO_PI)
    theta = target + _TWO_PI * k_lo
    sign = 1.0 if total > 0 else -1.0
    a_mon = ang * sign
    theta_m = theta * sign
    if theta_m < a_mon.min() or theta_m > a_mon.max():
        theta_m = theta_m + _TWO_PI
        if theta_m > a_mon.max():
            theta_m = theta_m - 2 * _TWO_PI
    idx = int(np.searchsorted(a_mon, theta_m))
    idx = min(max(idx, 1), n)
    t_lo, t_hi = t[idx - 1], t[idx]

    def angle_gap(tau):
        val = phi(annulus_map, region.boundary_point(np.array([tau % 1.0])))[0]
        return float(np.angle(val * np.conj(w)))

    g_lo, g_hi = angle_gap(t_lo), angle_gap(t_hi)
    if g_lo == 0.0:
        t_star = t_lo
    elif g_hi == 0.0:
        t_star = t_hi
    elif g_lo * g_hi < 0 and abs(g_lo) < math.pi / 2 and abs(g_hi) < math.pi / 2:
        t_star = brentq(angle_gap, t_lo, t_hi, xtol=1e-15)
    else:
        # fall back to a fine local scan plus golden refinement
        ts = np.linspace(t_lo, t_hi, 64)
        gaps = [abs(angle_gap(x)) for x in ts]
        t_star = float(ts[int(np.argmin(gaps))])
    z = complex(region.boundary_point(np.array([t_star % 1.0]))[0])
    err = abs(complex(phi(annulus_map, np.array([z]))[0]) - w)
    if err > 1e-8 * max(1.0, abs(w)) + 10.0 * getattr(annulus_map, "residual", 0.0) * max(1.0, abs(w)):
        raise EvaluationDomainError(
            f"psi_boundary did not converge: |phi(z) - w| = {err:g}"
        )
    return z
