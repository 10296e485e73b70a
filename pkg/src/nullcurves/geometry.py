"""Algebra of the null quadrics and the transfers between models.

Covers the membership tests for the conical quadric {z1^2+z2^2+z3^2 = 0},
the spinor parametrization pi(u, v) = (u^2-v^2, i(u^2+v^2), 2uv) with its
two-sheeted lift, the rational map into SL2(C) carrying null curves to
null curves there, the hermitian projection onto hyperbolic 3-space, and
the extraction of conformal minimal immersions from real parts.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DomainError,
    NonHolomorphicDataError,
    NotInH3Error,
    NotInNullConeError,
    NotInSL2Error,
    PoleError,
    UnsupportedZeroConfigurationError,
)
from .series import BoundarySamples, SeriesMap, fit_from_boundary

NULL_TOL = 1e-10
POLE_TOL = 1e-10
DET_TOL = 1e-9


def null_residual(v) -> float:
    """|v1^2 + v2^2 + v3^2|, unnormalized; callers divide by |v|^2."""
    v = np.asarray(v, dtype=np.complex128)
    return float(abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))


@dataclass(frozen=True)
class NullVector:
    """A point of the punctured null quadric, validated on construction."""

    v: np.ndarray
    null_tol: float = NULL_TOL

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.complex128).reshape(3).copy()
        n2 = float((np.abs(v) ** 2).sum())
        if n2 == 0.0:
            raise NotInNullConeError("zero vector is excluded from the punctured cone")
        if null_residual(v) > self.null_tol * n2:
            raise NotInNullConeError(
                "sum of squares %.3g exceeds tolerance" % null_residual(v)
            )
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    @property
    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.v) ** 2).sum()))


@dataclass(frozen=True)
class SpinorPair:
    """Scalar series (u, v) on a shared domain, mapping into C^2 minus 0."""

    u: SeriesMap
    v: SeriesMap

    def __post_init__(self):
        if self.u.ncomp != 1 or self.v.ncomp != 1:
            raise ValueError("spinor components must be scalar series")
        self.u._same_domain(self.v)

    def min_boundary_norm(self, n: int = 4096) -> float:
        """min over boundary samples of |(u, v)|; must stay positive."""
        uu = self.u.circle_values(1.0, n)
        vv = self.v.circle_values(1.0, n)
        m = float(np.sqrt(np.abs(uu) ** 2 + np.abs(vv) ** 2).min())
        if self.u.domain == "annulus":
            ui = self.u.circle_values(self.u.r0, n)
            vi = self.v.circle_values(self.u.r0, n)
            m = min(m, float(np.sqrt(np.abs(ui) ** 2 + np.abs(vi) ** 2).min()))
        return m


@dataclass(frozen=True)
class SL2Point:
    m: np.ndarray  # (2, 2) complex

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.complex128).reshape(2, 2).copy()
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @property
    def det(self) -> complex:
        return complex(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])


@dataclass(frozen=True)
class H3Point:
    h: np.ndarray  # (2, 2) complex hermitian, det 1, positive definite

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.complex128).reshape(2, 2).copy()
        h.flags.writeable = False
        object.__setattr__(self, "h", h)


# -- spinor parametrization --------------------------------------------------


def spinor_project(s: SpinorPair) -> SeriesMap:
    """pi(u, v) = (u^2 - v^2, i(u^2 + v^2), 2uv) by exact convolution."""
    u2 = s.u * s.u
    v2 = s.v * s.v
    uv = s.u * s.v
    return SeriesMap.stack([u2 - v2, (u2 + v2) * 1j, uv * 2.0])


def spinor_bilinear(s: SpinorPair, a: complex, b: complex) -> SeriesMap:
    """Symmetric companion B((u,v),(a,b)) = (ua - vb, i(ua + vb), ub + va).

    Polarization of pi: pi(u + t*a, v + t*b) = pi(u,v) + 2t*B + t^2*pi(a,b).
    """
    ua = s.u * complex(a)
    vb = s.v * complex(b)
    ub = s.u * complex(b)
    va = s.v * complex(a)
    return SeriesMap.stack([ua - vb, (ua + vb) * 1j, ub + va])


def _fit_scalar(outer, inner, domain, r0, lo, hi, fit_tol=1e-7):
    samples = BoundarySamples(outer.shape[0], outer, inner, domain, r0)
    return fit_from_boundary(samples, lo, hi, fit_tol=fit_tol)


def _winding(values) -> Tuple[int, float]:
    """Winding number of a nonvanishing circular sample loop, with slack."""
    closed = np.concatenate([values, values[:1]])
    ang = np.unwrap(np.angle(closed))
    w = (ang[-1] - ang[0]) / (2 * np.pi)
    return int(np.round(w)), float(abs(w - np.round(w)))


def _sqrt_on_disc(g: SeriesMap, width: int) -> SeriesMap:
    """Square root of a zero-free disc series via exp(half series-log).

    The series-log is the antiderivative of g'/g with base value log g(0);
    the exponential is evaluated on the boundary circle and refit, which is
    exact whenever the root is polynomial.
    """
    inv = _taylor_reciprocal(g.coeffs[0], width)
    gp = g.derivative()
    n = _fit_samples(width)
    logd = np.convolve(gp.coeffs[0], inv)[:width]
    log_series = SeriesMap(logd[None, :], 0, "disc").antiderivative(
        0.0, [np.log(g.coeffs[0, 0])]
    )
    vals = np.exp(0.5 * log_series.circle_values(1.0, n)[:, 0])
    root, _ = _fit_scalar(vals[:, None], None, "disc", None, 0, width)
    return root


def _fit_samples(width: int) -> int:
    n = 512
    while n < 4 * (width + 2):
        n *= 2
    return n


def _taylor_reciprocal(coeffs, width: int) -> np.ndarray:
    """1/g as a Taylor series to the given width (Newton doubling)."""
    c0 = coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("series has a zero constant term")
    r = np.array([1.0 / c0], dtype=np.complex128)
    while r.shape[0] < width:
        m = min(2 * r.shape[0], width)
        gr = np.zeros(m, dtype=np.complex128)
        conv = np.convolve(coeffs[:m], r)[:m]
        gr[: conv.shape[0]] = conv
        corr = -gr
        corr[0] += 2.0
        r = np.convolve(r, corr)
        r = r[:m] if r.shape[0] >= m else np.pad(r, (0, m - r.shape[0]))
    return r[:width]


def _spectral_sqrt_annulus(g: SeriesMap, width: int) -> SeriesMap:
    """Square root of a zero-free annulus series with even winding.

    Branch bookkeeping: factor out z^w (w = boundary winding), take the
    log of the remainder on both circles with the branches connected along
    the radial segment at angle 0, exponentiate half, refit, multiply back
    z^(w/2).
    """
    r0 = g.r0
    n = _fit_samples(width + g.width)
    outer = g.circle_values(1.0, n)[:, 0]
    inner = g.circle_values(r0, n)[:, 0]
    if np.abs(outer).min() == 0 or np.abs(inner).min() == 0:
        raise UnsupportedZeroConfigurationError("zero on a boundary circle")
    w_out, slack_out = _winding(outer)
    w_in, slack_in = _winding(inner)
    if max(slack_out, slack_in) > 0.05:
        raise UnsupportedZeroConfigurationError(
            "winding number poorly resolved; zeros too close to the boundary"
        )
    if w_out != w_in:
        raise UnsupportedZeroConfigurationError(
            "series has zeros inside the annulus (winding %d vs %d)"
            % (w_out, w_in)
        )
    w = w_out
    if w % 2 != 0:
        raise UnsupportedZeroConfigurationError(
            "odd boundary winding %d admits no single-valued square root" % w
        )
    theta = 2 * np.pi * np.arange(n) / n
    h_out = outer * np.exp(-1j * w * theta)
    h_in = inner * (r0 ** (-w)) * np.exp(-1j * w * theta)
    ang_out = np.unwrap(np.angle(h_out))
    # connect the inner branch through g along the radial segment at angle 0
    radial = g.eval_many(np.linspace(r0, 1.0, 257)).ravel()
    ang_radial = np.unwrap(np.angle(radial))
    offset = ang_out[0] - ang_radial[-1]
    ang_in0 = ang_radial[0] + offset
    ang_in = np.unwrap(np.angle(h_in))
    ang_in = ang_in - ang_in[0] + ang_in0
    log_out = np.log(np.abs(h_out)) + 1j * ang_out
    log_in = np.log(np.abs(h_in)) + 1j * ang_in
    u_out = np.exp(0.5 * log_out) * np.exp(1j * (w // 2) * theta)
    u_in = np.exp(0.5 * log_in) * (r0 ** (w // 2)) * np.exp(1j * (w // 2) * theta)
    root, _ = _fit_scalar(
        u_out[:, None], u_in[:, None], "annulus", r0, w // 2 - width, w // 2 + width
    )
    return root


def _lift_roundtrip_error(f: SeriesMap, pair: SpinorPair) -> float:
    proj = spinor_project(pair)
    lo = min(f.degree_lo, proj.degree_lo)
    hi = max(f.degree_hi, proj.degree_hi)
    diff = proj._window(lo, hi) - f._window(lo, hi)
    scale = float(np.abs(f.coeffs).max())
    return float(np.abs(diff).max()) / (scale if scale > 0 else 1.0)


def spinor_lift(
    f: SeriesMap, null_tol: float = NULL_TOL, roundtrip_tol: float = 1e-10
) -> SpinorPair:
    """Lift a map into the punctured null quadric through pi.

    Candidate squares are u^2 = (f1 - i f2)/2 and v^2 = -(f1 + i f2)/2;
    whichever is zero-free on the domain gets the exp(half log) square
    root and the partner follows by division from f3 = 2uv.  The global
    sign is fixed by pushing u (then v) at the first boundary sample into
    the closed right half-plane.
    """
    if f.ncomp != 3:
        raise ValueError("lift expects a 3-component map")
    n = _fit_samples(f.width)
    vals = f.circle_values(1.0, n)
    norms2 = (np.abs(vals) ** 2).sum(axis=1)
    sos = np.abs(vals[:, 0] ** 2 + vals[:, 1] ** 2 + vals[:, 2] ** 2)
    circles = [(1.0, vals, norms2, sos)]
    if f.domain == "annulus":
        ivals = f.circle_values(f.r0, n)
        circles.append(
            (
                f.r0,
                ivals,
                (np.abs(ivals) ** 2).sum(axis=1),
                np.abs(ivals[:, 0] ** 2 + ivals[:, 1] ** 2 + ivals[:, 2] ** 2),
            )
        )
    scale2 = max(n2.max() for _, _, n2, _ in circles)
    for _, _, n2, s in circles:
        if s.max() > null_tol * scale2 * 10:
            raise NotInNullConeError(
                "sum-of-squares residual %.3g on samples" % (s.max() / scale2)
            )
        if n2.min() <= (1e-12 * scale2):
            raise NotInNullConeError("map vanishes on a sample (not in A*)")

    u2 = (f.component(0) - f.component(1) * 1j) * 0.5
    v2 = (f.component(0) + f.component(1) * 1j) * (-0.5)
    # degenerate planar branches: one candidate identically zero
    cscale = float(np.abs(f.coeffs).max())
    u2_zero = float(np.abs(u2.coeffs).max()) <= 1e-14 * cscale
    v2_zero = float(np.abs(v2.coeffs).max()) <= 1e-14 * cscale

    width = max(2 * f.width + 8, 64)
    last_exc: Optional[Exception] = None
    while True:
        try:
            pair = _lift_at_width(f, u2, v2, u2_zero, v2_zero, width, n)
            err = _lift_roundtrip_error(f, pair)
            if err <= roundtrip_tol:
                return _normalize_sign(pair)
            last_exc = UnsupportedZeroConfigurationError(
                "lift round-trip error %.3g exceeds %.3g" % (err, roundtrip_tol)
            )
        except (
            UnsupportedZeroConfigurationError,
            NonHolomorphicDataError,
            ZeroDivisionError,
        ) as exc:
            last_exc = exc
        width *= 2
        if width > (1 << 15):
            if isinstance(last_exc, UnsupportedZeroConfigurationError):
                raise last_exc
            raise UnsupportedZeroConfigurationError(str(last_exc))


def _lift_at_width(f, u2, v2, u2_zero, v2_zero, width, n) -> SpinorPair:
    f3 = f.component(2)
    if v2_zero and not u2_zero:
        u = _sqrt_nonvanishing(u2, width, n)
        v = SeriesMap.zero(1, f.domain, f.r0)
        return SpinorPair(u, v)
    if u2_zero and not v2_zero:
        v = _sqrt_nonvanishing(v2, width, n)
        u = SeriesMap.zero(1, f.domain, f.r0)
        return SpinorPair(u, v)
    if u2_zero and v2_zero:
        raise NotInNullConeError("map is identically zero")

    first_exc = None
    for primary, name in ((u2, "u"), (v2, "v")):
        try:
            root = _sqrt_nonvanishing(primary, width, n)
        except UnsupportedZeroConfigurationError as exc:
            if first_exc is None:
                first_exc = exc
            continue
        other = _divide_by(f3 * 0.5, root, width, n)
        if name == "u":
            return SpinorPair(root, other)
        return SpinorPair(other, root)
    raise UnsupportedZeroConfigurationError(
        "both candidate squares vanish somewhere on the domain: %s" % first_exc
    )


def _sqrt_nonvanishing(g: SeriesMap, width: int, n: int) -> SeriesMap:
    """Square root of g, verifying zero-freeness by winding numbers first."""
    outer = g.circle_values(1.0, n)[:, 0]
    amin = float(np.abs(outer).min())
    scale = float(np.abs(outer).max())
    if scale == 0.0 or amin <= 1e-13 * scale:
        raise UnsupportedZeroConfigurationError("candidate square vanishes on samples")
    if g.domain == "disc":
        w, slack = _winding(outer)
        if slack > 0.05:
            raise UnsupportedZeroConfigurationError(
                "winding number poorly resolved on the boundary"
            )
        if w != 0:
            raise UnsupportedZeroConfigurationError(
                "candidate square has %d zeros in the disc" % w
            )
        return _sqrt_on_disc(g, width)
    return _spectral_sqrt_annulus(g, width)


def _divide_by(num: SeriesMap, den: SeriesMap, width: int, n: int) -> SeriesMap:
    """num/den refit from boundary values (den zero-free by construction)."""
    n = max(n, _fit_samples(width + max(num.width, den.width)))
    outer = num.circle_values(1.0, n)[:, 0] / den.circle_values(1.0, n)[:, 0]
    if num.domain == "disc":
        quot, _ = _fit_scalar(outer[:, None], None, "disc", None, 0, width)
        return quot
    inner = num.circle_values(num.r0, n)[:, 0] / den.circle_values(den.r0, n)[:, 0]
    quot, _ = _fit_scalar(
        outer[:, None], inner[:, None], "annulus", num.r0, -width, width
    )
    return quot


def _normalize_sign(pair: SpinorPair) -> SpinorPair:
    """First-boundary-sample right-half-plane convention for (u, v)."""
    z0 = 1.0
    su = complex(pair.u.eval(z0)[0])
    sv = complex(pair.v.eval(z0)[0])
    scale = max(abs(su), abs(sv), 1e-300)
    sign = 1.0
    if abs(su.real) > 1e-12 * scale:
        sign = 1.0 if su.real > 0 else -1.0
    elif abs(sv.real) > 1e-12 * scale:
        sign = 1.0 if sv.real > 0 else -1.0
    elif su.imag < 0:
        sign = -1.0
    return SpinorPair(pair.u * sign, pair.v * sign)


# -- SL2(C) and H^3 ----------------------------------------------------------


def _tmap_entries(p: np.ndarray) -> np.ndarray:
    """Vectorized Eq-free T: p (..., 3) -> matrices (..., 2, 2), det == 1."""
    z1, z2, z3 = p[..., 0], p[..., 1], p[..., 2]
    out = np.empty(p.shape[:-1] + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 1.0 / z3
    out[..., 0, 1] = (z1 + 1j * z2) / z3
    out[..., 1, 0] = (z1 - 1j * z2) / z3
    out[..., 1, 1] = (z1 * z1 + z2 * z2 + z3 * z3) / z3
    return out


def tmap(p, pole_tol: float = POLE_TOL) -> SL2Point:
    """Rational map (z1,z2,z3) -> SL2(C) with unit determinant identically.

    The determinant is (z1^2+z2^2+z3^2 - (z1+iz2)(z1-iz2))/z3^2 = 1 as an
    algebraic identity, null or not.
    """
    p = np.asarray(p, dtype=np.complex128).reshape(3)
    if abs(p[2]) <= pole_tol:
        raise PoleError("third coordinate %.3g at the pole of the map" % abs(p[2]))
    return SL2Point(_tmap_entries(p))


def tmap_inverse(m: SL2Point, pole_tol: float = POLE_TOL) -> np.ndarray:
    """Inverse of tmap on matrices with m11 != 0."""
    mm = m.m if isinstance(m, SL2Point) else np.asarray(m, dtype=np.complex128)
    if abs(mm[0, 0]) <= pole_tol:
        raise PoleError("m11 = %.3g: point is outside the image chart" % abs(mm[0, 0]))
    z3 = 1.0 / mm[0, 0]
    z1 = (mm[0, 1] + mm[1, 0]) / (2.0 * mm[0, 0])
    z2 = (mm[0, 1] - mm[1, 0]) / (2j * mm[0, 0])
    return np.array([z1, z2, z3], dtype=np.complex128)


@dataclass(frozen=True)
class TMapCurveReport:
    """Sampled SL2 image of a null curve with the quadric membership data."""

    boundary_z: np.ndarray  # (N,) boundary nodes
    boundary_matrices: np.ndarray  # (N, 2, 2)
    grid_z: np.ndarray  # (R, A) polar nodes
    grid_matrices: np.ndarray  # (R, A, 2, 2)
    max_det_error: float  # max |det - 1| over all samples
    max_tangent_det: float  # max |det d/dtheta (T o F)| on the boundary
    max_tangent_det_normalized: float  # same, over squared frobenius norm


def polar_grid(n_r: int, n_theta: int, domain: str = "disc", r0=None):
    """Complex polar nodes (n_r, n_theta); disc includes the center ring."""
    if domain == "annulus":
        radii = np.linspace(r0, 1.0, n_r)
    else:
        radii = np.linspace(0.0, 1.0, n_r)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return radii[:, None] * np.exp(1j * theta)[None, :]


def tmap_on_curve(
    F: SeriesMap,
    n_r: int = 33,
    n_theta: int = 256,
    n_boundary: int = 4096,
    pole_tol: float = POLE_TOL,
    null_tol: float = NULL_TOL,
) -> TMapCurveReport:
    """Push a null curve through tmap, sampling grid and boundary.

    Checks that F is null (derivative sum of squares), that F3 clears the
    pole on the whole grid, and reports the quadric membership of the
    image tangents: det of the centered theta-difference of T o F on the
    boundary, which vanishes for exact null curves in SL2(C).
    """
    if F.ncomp != 3:
        raise ValueError("expected a 3-component curve")
    d = F.derivative()
    sos = d.dot(d)
    scale = d.sup_boundary(1024)
    res = sos.sup_boundary(1024)
    if res > null_tol * max(scale * scale, 1e-300):
        raise NotInNullConeError("curve is not null: residual %.3g" % (res / scale**2))
    grid = polar_grid(n_r, n_theta, F.domain, F.r0)
    flat = grid.ravel()
    gvals = F.eval_many(flat)
    f3 = np.abs(gvals[:, 2])
    bad = int(np.argmin(f3))
    if f3[bad] <= pole_tol:
        raise PoleError(
            "third coordinate %.3g at z = %s hits the pole of the map"
            % (f3[bad], flat[bad])
        )
    grid_mats = _tmap_entries(gvals).reshape(n_r, n_theta, 2, 2)
    bz = np.exp(2j * np.pi * np.arange(n_boundary) / n_boundary)
    bvals = F.circle_values(1.0, n_boundary)
    if np.abs(bvals[:, 2]).min() <= pole_tol:
        j = int(np.argmin(np.abs(bvals[:, 2])))
        raise PoleError("third coordinate vanishes near boundary node %d" % j)
    bmats = _tmap_entries(bvals)
    dets = bmats[:, 0, 0] * bmats[:, 1, 1] - bmats[:, 0, 1] * bmats[:, 1, 0]
    gdets = (
        grid_mats[..., 0, 0] * grid_mats[..., 1, 1]
        - grid_mats[..., 0, 1] * grid_mats[..., 1, 0]
    )
    max_det_err = max(
        float(np.abs(dets - 1.0).max()), float(np.abs(gdets - 1.0).max())
    )
    h = 2 * np.pi / n_boundary
    dmats = (np.roll(bmats, -1, axis=0) - np.roll(bmats, 1, axis=0)) / (2 * h)
    tangent_dets = (
        dmats[:, 0, 0] * dmats[:, 1, 1] - dmats[:, 0, 1] * dmats[:, 1, 0]
    )
    fro2 = (np.abs(dmats) ** 2).sum(axis=(1, 2))
    normalized = np.abs(tangent_dets) / np.maximum(fro2, 1e-300)
    return TMapCurveReport(
        boundary_z=bz,
        boundary_matrices=bmats,
        grid_z=grid,
        grid_matrices=grid_mats,
        max_det_error=max_det_err,
        max_tangent_det=float(np.abs(tangent_dets).max()),
        max_tangent_det_normalized=float(normalized.max()),
    )


def bryant_project(m: SL2Point, det_tol: float = DET_TOL) -> H3Point:
    """m -> m conj(m)^T, landing in the hyperboloid model of H^3."""
    mat = m.m if isinstance(m, SL2Point) else np.asarray(m, dtype=np.complex128)
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    if abs(det - 1.0) > det_tol:
        raise NotInSL2Error("determinant %s is not 1 within %.3g" % (det, det_tol))
    h = mat @ np.conj(mat).T
    return H3Point(h)


def h3_minkowski(h: H3Point, tol: float = 1e-10) -> np.ndarray:
    """Hyperboloid coordinates (x0, x1, x2, x3) of a hermitian det-1 point.

    Convention: h = [[x0+x3, x1+ix2], [x1-ix2, x0-x3]].
    """
    mat = h.h if isinstance(h, H3Point) else np.asarray(h, dtype=np.complex128)
    herm = np.abs(mat - np.conj(mat).T).max()
    if herm > 1e-12 * max(1.0, np.abs(mat).max()):
        raise NotInH3Error("matrix is not hermitian (defect %.3g)" % herm)
    x0 = 0.5 * (mat[0, 0].real + mat[1, 1].real)
    x3 = 0.5 * (mat[0, 0].real - mat[1, 1].real)
    x1 = mat[0, 1].real
    x2 = mat[0, 1].imag
    q = x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3
    if abs(q - 1.0) > tol * max(1.0, x0 * x0):
        raise NotInH3Error("minkowski norm %.12g is not 1" % q)
    if x0 <= 0:
        raise NotInH3Error("point lies on the lower sheet (x0 = %.3g)" % x0)
    return np.array([x0, x1, x2, x3], dtype=np.float64)


# -- minimal surfaces --------------------------------------------------------


@dataclass(frozen=True)
class MinimalPartReport:
    """Re F on a polar grid with its conformal factor |F'|."""

    grid_z: np.ndarray  # (R, A) complex nodes
    re_f: np.ndarray  # (R, A, 3) real
    conformal_factor: np.ndarray  # (R, A) = |F'| euclidean
    degenerate: bool  # conformal factor vanishes somewhere


def minimal_part(
    F: SeriesMap,
    n_r: int = 17,
    n_theta: int = 64,
    null_tol: float = NULL_TOL,
    degenerate_tol: float = 1e-8,
) -> MinimalPartReport:
    """Real part of a null curve as a conformal minimal immersion.

    The metric it induces is 2(Re F)* ds^2; on samples the conformal
    factor lambda = |F'| satisfies lambda^2 = 2 |d/dx Re F|^2, the factor
    two being the null-curve metric identity.
    """
    if F.ncomp != 3:
        raise ValueError("expected a 3-component curve")
    d = F.derivative()
    sos = d.dot(d)
    scale = d.sup_boundary(1024)
    if sos.sup_boundary(1024) > null_tol * max(scale * scale, 1e-300):
        raise NotInNullConeError("curve is not null")
    grid = polar_grid(n_r, n_theta, F.domain, F.r0)
    flat = grid.ravel()
    vals = F.eval_many(flat).reshape(n_r, n_theta, 3)
    dvals = d.eval_many(flat).reshape(n_r, n_theta, 3)
    lam = np.sqrt((np.abs(dvals) ** 2).sum(axis=2))
    degenerate = bool(lam.min() <= degenerate_tol * max(lam.max(), 1e-300))
    return MinimalPartReport(
        grid_z=grid,
        re_f=vals.real,
        conformal_factor=lam,
        degenerate=degenerate,
    )
