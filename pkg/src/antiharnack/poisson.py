"""s-harmonic functions in balls built from exterior data via the Poisson kernel.

The ball representation reads

    u(x) = gamma_{n,s} * integral over R^n \\ B_r of
           ((r^2 - |x|^2) / (|y|^2 - r^2))^s * g(y) / |x - y|^n dy

for |x| < r.  For antisymmetric data there is a half-space variant
whose kernel is the difference |x-y|^(-n) - |x_*-y|^(-n); it only needs
the weaker half-space integrability, so it accepts data as large as
g(y) = y_1.  On top of the two evaluators this module provides the two
mean value formulas at the origin (value for general data, first
derivative for antisymmetric data), the radial kernel psi_s that
expresses that derivative as a plain full-space integral, and the
barrier built from an odd plateau datum.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from . import fields, quad
from .errors import DomainError, RejectionError
from .fields import FieldMeta, OddPlateau, SMOOTH, as_points
from .fraclap import reflected_power_difference
from .special import gamma_ns

__all__ = [
    "BallProblem",
    "poisson_eval",
    "poisson_eval_antisym",
    "HarmonicExtension",
    "mean_value_classic",
    "mean_value_antisym_gradient",
    "psi_eval",
    "gradient_via_psi",
    "barrier_phi3",
]

# Fraction of the radius beyond which pointwise evaluation is refused by
# default: the kernel mass concentrates near the boundary and the
# default budget cannot vouch for the result there.
_NEAR_BOUNDARY = 0.95


@dataclass(frozen=True)
class BallProblem:
    """Exterior data g on R^n \\ B_radius posing u = g outside, (-Delta)^s u = 0 inside."""

    radius: float
    exterior_data: fields.Field
    params: "object"

    def __post_init__(self):
        if self.radius <= 0.0:
            raise DomainError("ball radius must be positive")


def _check_inside(bp, x, allow_near_boundary):
    r = float(np.linalg.norm(x))
    if r >= bp.radius:
        raise DomainError(f"evaluation point |x| = {r} outside the open ball of radius {bp.radius}")
    if not allow_near_boundary and r > _NEAR_BOUNDARY * bp.radius:
        raise RejectionError(
            f"|x| = {r} is beyond {_NEAR_BOUNDARY} of the radius; results there are "
            "unreliable at the default budget (pass allow_near_boundary=True to force)"
        )


def poisson_eval(bp, x, q, allow_near_boundary=False):
    """u(x) inside the ball from data integrable in the full-space sense."""
    p = bp.params
    g = bp.exterior_data
    meta = g.meta
    if meta.decay_exponent >= 2.0 * p.s:
        raise RejectionError(
            f"datum growth exponent {meta.decay_exponent} >= 2s = {2.0 * p.s}: "
            "full-space Poisson integral divergent (use poisson_eval_antisym)"
        )
    x = as_points(x, p.n).reshape(p.n)
    _check_inside(bp, x, allow_near_boundary)
    r = bp.radius
    fac = (r * r - float(np.dot(x, x))) ** p.s

    def f(y):
        y = np.asarray(y, dtype=float)
        d2 = np.sum((y - x) ** 2, axis=-1)
        return fac * g(y) * d2 ** (-0.5 * p.n)

    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent - p.n,
        cutoff_radius=None if meta.support_radius is None else max(meta.support_radius, 1.5 * r),
    )
    res = quad.integrate_exterior_ball(f, r, p.s, p, q, tail=tail)
    return gamma_ns(p) * res.value


def poisson_eval_antisym(bp, x, q, allow_near_boundary=False):
    """u(x) for antisymmetric data, via the reflected kernel difference.

    Only requires the half-space integrability (growth below 2s + 1),
    which is what admits g(y) = y_1.
    """
    p = bp.params
    g = bp.exterior_data
    meta = g.meta
    if not meta.antisymmetric:
        raise RejectionError("poisson_eval_antisym requires antisymmetric data")
    if meta.decay_exponent >= 2.0 * p.s + 1.0:
        raise RejectionError(
            f"datum growth exponent {meta.decay_exponent} >= 2s + 1 = {2.0 * p.s + 1.0}: "
            "half-space Poisson integral divergent"
        )
    x = as_points(x, p.n).reshape(p.n)
    _check_inside(bp, x, allow_near_boundary)
    r = bp.radius
    fac = (r * r - float(np.dot(x, x))) ** p.s

    def f(y):
        y = np.asarray(y, dtype=float)
        return fac * g(y) * reflected_power_difference(x, y, float(p.n))

    # kernel difference ~ x_1 y_1 |y|^(-n-2), so the effective decay
    # gains two powers over the plain |x-y|^(-n) kernel
    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent + 1.0 - (p.n + 2.0),
        cutoff_radius=None if meta.support_radius is None else max(meta.support_radius, 1.5 * r),
    )
    res = quad.integrate_exterior_ball(f, r, p.s, p, q, tail=tail, hemisphere="pos")
    return gamma_ns(p) * res.value


class HarmonicExtension:
    """The global function agreeing with g outside the ball and s-harmonic inside.

    Values inside come from the antisymmetric Poisson evaluator; across
    the thin shell (0.95 r, r) where pointwise evaluation is refused,
    the value is a radial linear blend between u at 0.95 r and the datum
    on the sphere (exact for linear data, and the shell's volume keeps
    the committed error well below the tolerances used downstream).

    For n = 1 interior values are cached on a uniform radial grid (step
    r/128) and linearly interpolated, so the extension can serve as an
    integrand without nesting full-accuracy quadratures.
    """

    def __init__(self, bp, q):
        self.bp = bp
        self.q = q
        p = bp.params
        g = bp.exterior_data
        if not g.meta.antisymmetric:
            raise RejectionError("HarmonicExtension requires antisymmetric data")
        self._cache = None
        if p.n == 1:
            ts = np.arange(0, 129) / 128.0 * bp.radius
            keep = ts <= _NEAR_BOUNDARY * bp.radius
            ts = ts[keep]
            vals = np.array(
                [0.0] + [poisson_eval_antisym(bp, np.array([t]), q) for t in ts[1:]]
            )
            self._cache = (ts, vals)

    @property
    def meta(self):
        m = self.bp.exterior_data.meta
        support = None
        if m.support_radius is not None:
            support = max(m.support_radius, self.bp.radius)
        return FieldMeta(m.antisymmetric, m.decay_exponent, support, SMOOTH)

    def _interior(self, pts, rad):
        if self._cache is not None:
            ts, vals = self._cache
            x1 = pts[:, 0]
            return np.sign(x1) * np.interp(np.abs(x1), ts, vals)
        out = np.empty(pts.shape[0])
        for i, y in enumerate(pts):
            out[i] = poisson_eval_antisym(self.bp, y, self.q)
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, x.shape[-1])
        rad = np.linalg.norm(flat, axis=1)
        r = self.bp.radius
        out = np.empty(flat.shape[0])
        g = self.bp.exterior_data
        outside = rad >= r
        if outside.any():
            out[outside] = g(flat[outside])
        inner = rad <= _NEAR_BOUNDARY * r
        if inner.any():
            out[inner] = self._interior(flat[inner], rad[inner])
        shell = ~outside & ~inner
        if shell.any():
            pts = flat[shell]
            rr = rad[shell]
            unit = pts / rr[:, None]
            lo = self._interior(_NEAR_BOUNDARY * r * unit, None)
            hi = g(r * unit)
            t = (rr - _NEAR_BOUNDARY * r) / ((1.0 - _NEAR_BOUNDARY) * r)
            out[shell] = (1.0 - t) * lo + t * hi
        return out.reshape(x.shape[:-1])


def mean_value_classic(g, r, p, q):
    """Value of the Poisson solution at the origin:

    gamma_{n,s} * integral over R^n \\ B_r of r^(2s) g(y) / ((|y|^2-r^2)^s |y|^n) dy.
    """
    meta = g.meta
    if meta.decay_exponent >= 2.0 * p.s:
        raise RejectionError(
            f"datum growth exponent {meta.decay_exponent} >= 2s = {2.0 * p.s}: mean value divergent"
        )
    fac = r ** (2.0 * p.s)

    def f(y):
        y = np.asarray(y, dtype=float)
        r2 = np.sum(y * y, axis=-1)
        return fac * g(y) * r2 ** (-0.5 * p.n)

    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent - p.n,
        cutoff_radius=None if meta.support_radius is None else max(meta.support_radius, 1.5 * r),
    )
    res = quad.integrate_exterior_ball(f, r, p.s, p, q, tail=tail)
    return gamma_ns(p) * res.value


def mean_value_antisym_gradient(g, r, p, q):
    """First derivative at the origin of the s-harmonic function with datum g:

    d_1 u(0) = 2n gamma_{n,s} * integral over {y_1>0} \\ B_r of
               r^(2s) y_1 u(y) / ((|y|^2-r^2)^s |y|^(n+2)) dy,

    where u is the Poisson solution in the unit ball (so for r < 1 the
    integrand needs u inside B_1, supplied by HarmonicExtension).  The
    value must not depend on r in (0, 1].
    """
    meta = g.meta
    if not meta.antisymmetric:
        raise RejectionError("mean_value_antisym_gradient requires antisymmetric data")
    if meta.decay_exponent >= 2.0 * p.s + 1.0:
        raise RejectionError(
            f"datum growth exponent {meta.decay_exponent} >= 2s + 1: gradient formula divergent"
        )
    if not 0.0 < r <= 1.0:
        raise DomainError("r must lie in (0, 1]: the solution is built in the unit ball")
    u = HarmonicExtension(BallProblem(1.0, g, p), q) if r < 1.0 else g
    fac = r ** (2.0 * p.s)

    def f(y):
        y = np.asarray(y, dtype=float)
        r2 = np.sum(y * y, axis=-1)
        return fac * y[..., 0] * u(y) * r2 ** (-0.5 * (p.n + 2.0))

    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent + 1.0 - (p.n + 2.0),
        cutoff_radius=None if meta.support_radius is None else max(meta.support_radius, 1.5),
    )
    res = quad.integrate_exterior_ball(f, r, p.s, p, q, tail=tail, hemisphere="pos")
    return 2.0 * p.n * gamma_ns(p) * res.value


def psi_eval(y, p, q=None):
    """The radial kernel psi_s expressing d_1 u(0) as a plain integral:

    psi_s(y) = n(n+2) gamma_{n,s} * integral from 0 to min(1/|y|, 1) of
               rho^(2s+n+1) (1 - rho^2)^(-s) drho.

    The integral is an incomplete Beta function in rho^2 and is
    evaluated through the regularized incomplete beta (exact handling of
    the algebraic endpoint weight); q is accepted for interface
    symmetry but not needed.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        rad = np.abs(np.atleast_1d(y))
    elif y.shape[-1] == p.n:
        rad = np.linalg.norm(np.atleast_2d(y.reshape(-1, p.n)), axis=1)
    else:
        rad = np.abs(y).ravel()
    m = np.minimum(1.0, 1.0 / np.maximum(rad, 1e-300))
    a = p.s + 0.5 * p.n + 1.0
    b = 1.0 - p.s
    complete = math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    vals = 0.5 * complete * betainc(a, b, m * m)
    out = p.n * (p.n + 2.0) * gamma_ns(p) * vals
    if np.isscalar(y) or y.ndim == 0:
        return float(out[0])
    return out.reshape(y.shape[:-1] if y.ndim > 1 and y.shape[-1] == p.n else y.shape)


def gradient_via_psi(g, p, q):
    """d_1 u(0) = integral over R^n of y_1 psi_s(y) u(y) dy.

    u is the Poisson solution in the unit ball with exterior datum g,
    again realized by HarmonicExtension.  By antisymmetry the integrand
    is even under reflection, so the integral is twice the half-space one.
    """
    meta = g.meta
    if not meta.antisymmetric:
        raise RejectionError("gradient_via_psi requires antisymmetric data")
    if meta.decay_exponent >= 2.0 * p.s + 1.0:
        raise RejectionError(
            f"datum growth exponent {meta.decay_exponent} >= 2s + 1: psi integral divergent"
        )
    u = HarmonicExtension(BallProblem(1.0, g, p), q)

    def f(y):
        y = np.asarray(y, dtype=float)
        return 2.0 * y[..., 0] * psi_eval(y, p) * u(y)

    # psi_s is constant inside the unit ball but leaves it with an
    # infinite-slope kink ~ (rho - 1)^(1-s), so the radial integral is
    # split at rho = 1 with a flattening reparametrization just outside.
    omegas, w = quad.sphere_rule(p.n, max(8, q.angular_points if p.n == 2 else q.angular_points // 2) if p.n > 1 else 1, hemisphere="pos")
    center = np.zeros(p.n)

    def gr(rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        pts = center[None, None, :] + rho[:, None, None] * omegas[None, :, :]
        return rho ** (p.n - 1) * (f(pts) @ w)

    inner = quad.adaptive_interval(gr, 0.0, 1.0, q)

    k = int(math.ceil(3.0 / (1.0 - p.s)))

    def g_kink(tau):
        tau = np.asarray(tau, dtype=float)
        rho = 1.0 + tau**k
        return gr(rho) * k * tau ** (k - 1)

    shell = quad.adaptive_interval(g_kink, 0.0, 1.0, q, scale_hint=abs(inner.value))

    r_cut = q.truncation_radius
    if meta.support_radius is not None:
        r_cut = min(r_cut, max(meta.support_radius, 2.0))
    outer = quad.adaptive_interval(gr, 2.0, r_cut, q, scale_hint=abs(inner.value))
    total = inner + shell + outer
    if meta.support_radius is not None and meta.support_radius <= r_cut:
        return total.value
    qexp = 2.0 * p.s + 2.0 - max(meta.decay_exponent, 0.0)
    tail = quad.integrate_semiinfinite(gr, r_cut, qexp, q, scale_hint=abs(total.value))
    return (total + tail).value


def barrier_phi3(x, p, q):
    """The barrier: s-harmonic in B_1 with the odd plateau as exterior datum.

    Antisymmetric, positive for x_1 > 0 inside the ball, and comparable
    to x_1 on the half ball of radius 1/2 (two-sided linear bounds with
    an empirical constant).
    """
    bp = BallProblem(1.0, OddPlateau(), p)
    return poisson_eval_antisym(bp, x, q)
