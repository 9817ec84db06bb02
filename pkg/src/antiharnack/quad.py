"""Quadrature engine for singular and weighted integrals on R^n, n <= 3.

Design notes:

* The basic 1-D integrator is a deterministic adaptive Gauss-Legendre
  pair (7/15 nodes).  Panels are processed in a fixed order and the final
  sum is accumulated with math.fsum over panels sorted by left endpoint,
  so identical inputs give bitwise-identical outputs.
* Integrals over unbounded radial ranges are mapped to (0, 1] with the
  power substitution rho = a * t^(-1/(q-1)) matched to the declared decay
  rho^(-q) of the radial integrand; the leading tail term becomes a
  bounded integrand, so the tail is integrated rather than truncated.
* The algebraic endpoint weight (rho^2 - r^2)^(-s) on exterior-ball
  integrals is removed exactly by the substitution rho = r (1 + t^(1/(1-s))).
* Principal values are computed through the second-difference form
  (2u(x) - u(x+z) - u(x-z)) / (2 |z|^(n+2s)), which is absolutely
  convergent for C^2 integrands; the tiny ball below the excision radius
  is added back through a two-term Taylor correction.

All integrand callables must be vectorized: radial integrands map a 1-D
array of radii to values, pointwise integrands map arrays of shape
(..., n) to values of shape (...).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError, QuadratureError, RejectionError

__all__ = [
    "QuadSpec",
    "TailModel",
    "QuadResult",
    "adaptive_interval",
    "integrate_semiinfinite",
    "sphere_rule",
    "integrate_fullspace",
    "integrate_halfspace_weighted",
    "integrate_exterior_ball",
    "integrate_pv_second_difference",
    "integrate_ball_around",
    "integrate_halfspace_clipped",
    "quadspec_to_json",
    "quadspec_from_json",
]


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature configuration shared by every integral in the package."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivision_depth: int = 46
    truncation_radius: float = 50.0
    pv_excision: float = 1e-4
    angular_points: int = 64

    def __post_init__(self):
        if self.rel_tol < 1e-12:
            raise DomainError("rel_tol below 1e-12 is not supported")
        if self.truncation_radius < 10.0:
            raise DomainError("truncation_radius must be >= 10")
        if self.pv_excision > 1e-2:
            raise DomainError("pv_excision must be <= 1e-2")


@dataclass(frozen=True)
class TailModel:
    """Decay model of a raw integrand: |f(y)| <= C (1 + |y|)^decay_exponent.

    decay_exponent = -inf together with cutoff_radius declares compact
    (effective) support; integration then stops at the cutoff.
    """

    decay_exponent: float
    constant_bound: float = 0.0
    cutoff_radius: Optional[float] = None


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float

    def __add__(self, other):
        return QuadResult(self.value + other.value, self.error + other.error)

    def scaled(self, c):
        return QuadResult(c * self.value, abs(c) * self.error)


_ZERO = QuadResult(0.0, 0.0)

_X7, _W7 = roots_legendre(7)
_X15, _W15 = roots_legendre(15)
_MAX_PANELS = 40000


def adaptive_interval(f, a, b, q, scale_hint=None, noise=None):
    """Adaptive Gauss 7/15 integration of a vectorized f on [a, b].

    noise, if given, maps points to a pointwise bound on the rounding
    noise of f.  A panel whose error estimate is below its noise budget
    is accepted: subdividing cannot improve on arithmetic noise, and the
    budget is carried into the reported error bound.
    """
    if a == b:
        return _ZERO
    total_len = b - a
    panels = [(a, b, 0)]
    accepted = []
    scale = scale_hint
    n_panels = 1
    while panels:
        k = len(panels)
        pts = np.empty(k * 22)
        for i, (a0, b0, _) in enumerate(panels):
            mid, half = 0.5 * (a0 + b0), 0.5 * (b0 - a0)
            pts[22 * i : 22 * i + 15] = mid + half * _X15
            pts[22 * i + 15 : 22 * i + 22] = mid + half * _X7
        vals = np.asarray(f(pts), dtype=float).reshape(k, 22)
        halves = np.array([0.5 * (b0 - a0) for (a0, b0, _) in panels])
        i15 = halves * (vals[:, :15] @ _W15)
        i7 = halves * (vals[:, 15:] @ _W7)
        errs = np.abs(i15 - i7)
        if noise is not None:
            nvals = np.asarray(noise(pts), dtype=float).reshape(k, 22)
            budgets = 2.0 * halves * np.mean(nvals[:, :15], axis=1)
        else:
            budgets = np.zeros(k)
        if scale is None:
            scale = float(np.sum(np.abs(i15)))
        tol_total = max(q.abs_tol, q.rel_tol * max(scale, q.abs_tol))
        next_panels = []
        for i, (a0, b0, depth) in enumerate(panels):
            tol_local = tol_total * (b0 - a0) / abs(total_len)
            if errs[i] <= tol_local + budgets[i]:
                accepted.append((a0, float(i15[i]), float(errs[i])))
            elif depth >= q.max_subdivision_depth or n_panels >= _MAX_PANELS:
                raise QuadratureError(
                    "subdivision depth exhausted",
                    value=float(i15[i]),
                    error_bound=float(errs[i]),
                )
            else:
                m = 0.5 * (a0 + b0)
                next_panels.append((a0, m, depth + 1))
                next_panels.append((m, b0, depth + 1))
                n_panels += 1
        panels = next_panels
    accepted.sort(key=lambda t: t[0])
    value = math.fsum(t[1] for t in accepted)
    err = math.fsum(t[2] for t in accepted)
    return QuadResult(value, err)


def integrate_semiinfinite(f, a, qexp, q, scale_hint=None):
    """Integral of a vectorized radial f over (a, inf) with |f| ~ rho^(-qexp).

    Substitutes rho = a * t^(-1/(qexp-1)), t in (0, 1], which turns the
    leading tail behaviour into a bounded integrand.
    """
    if not qexp > 1.0:
        raise RejectionError(f"divergent tail: radial decay exponent {qexp} <= 1")
    if a <= 0.0:
        raise DomainError("semi-infinite range must start at a positive radius")
    beta = 1.0 / (qexp - 1.0)

    def g(t):
        rho = a * t ** (-beta)
        return f(rho) * (a * beta) * t ** (-beta - 1.0)

    return adaptive_interval(g, 0.0, 1.0, q, scale_hint=scale_hint)


# --- angular rules ----------------------------------------------------------

def _resolve_angular(p, q):
    if p.n == 1:
        return 1
    if p.n == 2:
        return max(8, q.angular_points)
    return max(8, q.angular_points // 2)


def sphere_rule(n, m, hemisphere=None):
    """Quadrature rule on the unit sphere S^(n-1) (surface measure).

    hemisphere = "pos"/"neg" restricts to omega_1 > 0 / omega_1 < 0 with
    nodes strictly inside the open hemisphere.
    """
    if n == 1:
        if hemisphere == "pos":
            return np.array([[1.0]]), np.array([1.0])
        if hemisphere == "neg":
            return np.array([[-1.0]]), np.array([1.0])
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        if hemisphere is None:
            theta = 2.0 * math.pi * (np.arange(m) + 0.5) / m
            w = np.full(m, 2.0 * math.pi / m)
        else:
            x_gl, w_gl = roots_legendre(m)
            lo, hi = (-0.5 * math.pi, 0.5 * math.pi) if hemisphere == "pos" else (0.5 * math.pi, 1.5 * math.pi)
            theta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x_gl
            w = 0.5 * (hi - lo) * w_gl
        return np.stack([np.cos(theta), np.sin(theta)], axis=1), w
    if n == 3:
        x_gl, w_gl = roots_legendre(m)
        if hemisphere is None:
            c, wc = x_gl, w_gl
        else:
            lo, hi = (0.0, 1.0) if hemisphere == "pos" else (-1.0, 0.0)
            c = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x_gl
            wc = 0.5 * (hi - lo) * w_gl
        phi = 2.0 * math.pi * (np.arange(m) + 0.5) / m
        wphi = 2.0 * math.pi / m
        sin_t = np.sqrt(np.clip(1.0 - c**2, 0.0, 1.0))
        omx = np.repeat(c, m)
        st = np.repeat(sin_t, m)
        ph = np.tile(phi, m)
        omegas = np.stack([omx, st * np.cos(ph), st * np.sin(ph)], axis=1)
        w = np.repeat(wc, m) * wphi
        return omegas, w
    raise DomainError(f"unsupported dimension {n}")


def _angular_average(f, center, omegas, w):
    """Build the radial profile rho -> sum_omega w * f(center + rho * omega)."""
    center = np.asarray(center, dtype=float)

    def g(rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        pts = center[None, None, :] + rho[:, None, None] * omegas[None, :, :]
        return f(pts) @ w

    return g


def _tail_qexp(p, tail, weight_exponent=0.0):
    """Radial decay exponent q of rho^(n-1) * rho^weight_exponent * f."""
    return -(p.n - 1.0 + weight_exponent + tail.decay_exponent)


# --- public integrals -------------------------------------------------------

def _integrate_core(gr, r_cut, q, origin_exponent):
    """Radial integral of gr over (0, r_cut] with gr ~ rho^origin_exponent at 0.

    For a singular (but integrable) origin exponent, the first unit of
    radius is reparametrized as rho = r_near * tau^(3/(1+origin_exponent)).
    The factor 3 over-flattens: the transformed profile vanishes like
    tau^2 at the endpoint, so a conservative (too singular) declared
    exponent still leaves a C^2 integrand.
    """
    if not origin_exponent > -1.0:
        raise RejectionError(f"non-integrable origin singularity: exponent {origin_exponent} <= -1")
    r_near = min(1.0, r_cut)
    beta = 3.0 / (1.0 + origin_exponent)

    def g_sub(tau):
        rho = r_near * tau**beta
        return gr(rho) * (r_near * beta) * tau ** (beta - 1.0)

    near = adaptive_interval(g_sub, 0.0, 1.0, q)
    if r_cut <= r_near:
        return near
    return near + adaptive_interval(gr, r_near, r_cut, q, scale_hint=abs(near.value))


def integrate_fullspace(f, p, q, tail, origin_exponent=0.0):
    """Integral of f over R^n in polar coordinates around the origin.

    origin_exponent declares the power of the radial profile (including
    the rho^(n-1) volume factor) at the origin when it is singular.
    """
    omegas, w = sphere_rule(p.n, _resolve_angular(p, q))
    g = _angular_average(f, np.zeros(p.n), omegas, w)

    def gr(rho):
        return rho ** (p.n - 1) * g(rho)

    r_cut = q.truncation_radius
    if tail.cutoff_radius is not None:
        r_cut = min(r_cut, tail.cutoff_radius)
    core = _integrate_core(gr, r_cut, q, origin_exponent)
    if tail.cutoff_radius is not None and tail.cutoff_radius <= q.truncation_radius:
        return core
    return core + integrate_semiinfinite(gr, r_cut, _tail_qexp(p, tail), q, scale_hint=abs(core.value))


def integrate_halfspace_weighted(f, p, q, tail, origin_exponent=0.0):
    """Integral of f over the half-space {y_1 > 0}."""
    omegas, w = sphere_rule(p.n, _resolve_angular(p, q), hemisphere="pos")
    g = _angular_average(f, np.zeros(p.n), omegas, w)

    def gr(rho):
        return rho ** (p.n - 1) * g(rho)

    qexp = _tail_qexp(p, tail)
    if tail.cutoff_radius is None and not qexp > 1.0:
        raise RejectionError(f"divergent half-space integral: radial decay exponent {qexp} <= 1")
    r_cut = q.truncation_radius
    if tail.cutoff_radius is not None:
        r_cut = min(r_cut, tail.cutoff_radius)
    core = _integrate_core(gr, r_cut, q, origin_exponent)
    if tail.cutoff_radius is not None and tail.cutoff_radius <= q.truncation_radius:
        return core
    return core + integrate_semiinfinite(gr, r_cut, qexp, q, scale_hint=abs(core.value))


def integrate_exterior_ball(f, r, s, p, q, tail, hemisphere=None):
    """Integral of f(y) * (|y|^2 - r^2)^(-s) over the exterior of the ball B_r.

    hemisphere = "pos" restricts to {y_1 > 0} (the half-exterior used by
    the antisymmetric kernel formulas).  The endpoint singularity at
    |y| = r is removed exactly by rho = r (1 + t^(1/(1-s))).
    """
    if r <= 0.0:
        raise DomainError("ball radius must be positive")
    if not 0.0 < s < 1.0:
        raise DomainError("order s must lie in (0, 1)")
    omegas, w = sphere_rule(p.n, _resolve_angular(p, q), hemisphere=hemisphere)
    g = _angular_average(f, np.zeros(p.n), omegas, w)

    qexp = _tail_qexp(p, tail, weight_exponent=-2.0 * s)
    if tail.cutoff_radius is None and not qexp > 1.0:
        raise RejectionError(f"divergent exterior integral: radial decay exponent {qexp} <= 1")

    beta = 1.0 / (1.0 - s)

    def g_near(t):
        rho = r * (1.0 + t**beta)
        return (r ** (1.0 - s) * beta) * rho ** (p.n - 1) * (rho + r) ** (-s) * g(rho)

    near = adaptive_interval(g_near, 0.0, 1.0, q)

    def gr(rho):
        return rho ** (p.n - 1) * (rho * rho - r * r) ** (-s) * g(rho)

    r_cut = max(q.truncation_radius, 4.0 * r)
    if tail.cutoff_radius is not None:
        r_cut = min(r_cut, max(tail.cutoff_radius, 2.0 * r))
    mid = adaptive_interval(gr, 2.0 * r, r_cut, q, scale_hint=abs(near.value))
    out = near + mid
    if tail.cutoff_radius is not None and tail.cutoff_radius <= r_cut:
        return out
    return out + integrate_semiinfinite(gr, r_cut, qexp, q, scale_hint=abs(out.value))


def integrate_ball_around(f, x, radius, p, q):
    """Integral of f over the ball B_radius(x) in polar coordinates around x."""
    omegas, w = sphere_rule(p.n, _resolve_angular(p, q))
    g = _angular_average(f, x, omegas, w)

    def gr(rho):
        return rho ** (p.n - 1) * g(rho)

    return adaptive_interval(gr, 0.0, radius, q)


def integrate_pv_second_difference(u, x, s, p, q, outer_radius=None, excision=None):
    """Principal value of the integral of (u(x) - u(y)) / |x - y|^(n+2s) over R^n.

    Evaluated through the absolutely convergent second-difference form
    (1/2) * integral of (2u(x) - u(x+z) - u(x-z)) / |z|^(n+2s).  By
    default the ball below q.pv_excision is restored through a two-term
    Taylor correction in the radius.

    outer_radius, if given, stops the radial integration there (the
    caller owns everything beyond); the result is then the principal
    value over the ball of that radius around x.

    excision, if given, suppresses the Taylor correction and integrates
    from that radius outward only.  This is the raw excision-limit route
    kept as an independent cross-check of the default treatment.
    """
    x = np.asarray(x, dtype=float)
    meta = u.meta
    omegas, w = sphere_rule(p.n, _resolve_angular(p, q))
    ux = float(u(x[None, :])[0])

    def second_diff(rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        step = rho[:, None, None] * omegas[None, :, :]
        vals = 2.0 * ux - u(x[None, None, :] + step) - u(x[None, None, :] - step)
        return 0.5 * (vals @ w)

    def gr(rho):
        return rho ** (-1.0 - 2.0 * s) * second_diff(rho)

    # rounding-noise floor: the second difference of u carries absolute
    # noise of order eps * |u| near x, amplified by the kernel
    probe = x[None, None, :] + np.array([[0.5], [1.0]])[:, :, None] * omegas[None, :, :]
    uscale = max(abs(ux), float(np.max(np.abs(u(probe)))))
    eps_u = 32.0 * np.finfo(float).eps * uscale

    def gr_noise(rho):
        rho = np.asarray(rho, dtype=float)
        return eps_u * rho ** (-1.0 - 2.0 * s)

    if excision is None:
        a = q.pv_excision
        if outer_radius is not None and not outer_radius > 2.0 * a:
            raise DomainError("outer_radius must exceed twice the excision radius")
        # Taylor restoration of (0, a]: second_diff(rho) = c2 rho^2 + c4 rho^4 + O(rho^6)
        d_a = float(second_diff(np.array([a]))[0])
        d_2a = float(second_diff(np.array([2.0 * a]))[0])
        c2a2 = (16.0 * d_a - d_2a) / 12.0
        c4a4 = (d_2a - 4.0 * d_a) / 12.0
        small = c2a2 * a ** (-2.0 * s) / (2.0 - 2.0 * s) + c4a4 * a ** (-2.0 * s) / (4.0 - 2.0 * s)
        small_err = abs(c4a4) * a ** (-2.0 * s) * 0.1 + 1e-15 * abs(small)
    else:
        a = excision
        small, small_err = 0.0, 0.0

    # (a, r0]: substitution rho = r0 tau^(1/(2-2s)) flattens the rho^(1-2s) profile
    beta = 1.0 / (2.0 - 2.0 * s)
    r0 = 1.0 if outer_radius is None else min(1.0, outer_radius)

    def g_sub(tau):
        rho = r0 * tau**beta
        return gr(rho) * (r0 * beta) * tau ** (beta - 1.0)

    def g_sub_noise(tau):
        rho = r0 * np.asarray(tau, dtype=float) ** beta
        return gr_noise(rho) * (r0 * beta) * tau ** (beta - 1.0)

    tau_a = (a / r0) ** (1.0 / beta)
    near = adaptive_interval(g_sub, tau_a, 1.0, q, noise=g_sub_noise)
    total = QuadResult(small, small_err) + near
    if outer_radius is not None and outer_radius <= r0:
        return total

    r_sup = meta.support_radius
    if r_sup is not None:
        r_out = r_sup + float(np.linalg.norm(x)) + 1.0
    else:
        r_out = q.truncation_radius
    r_out = max(r_out, 2.0 * r0)
    if outer_radius is not None:
        r_out = min(r_out, outer_radius)
    mid = adaptive_interval(gr, r0, r_out, q, scale_hint=abs(near.value), noise=gr_noise)
    total = total + mid
    if outer_radius is not None and r_out >= outer_radius:
        return total

    growth = max(meta.decay_exponent, 0.0) if math.isfinite(meta.decay_exponent) else 0.0
    qexp = 1.0 + 2.0 * s - growth
    tail = integrate_semiinfinite(gr, r_out, qexp, q, scale_hint=abs(total.value))
    return total + tail


def integrate_halfspace_clipped(f, x, delta, p, q, qexp):
    """Integral of f over {y_1 > 0} minus the ball B_delta(x), polar around x.

    Rays are clipped where they exit the half-space; the angular domain is
    split at omega_1 = 0 so each piece is smooth.  qexp is the radial
    decay exponent of rho^(n-1) * (angular average of f) along unclipped
    rays.
    """
    x = np.asarray(x, dtype=float)
    x1 = x[0]
    if x1 <= 0.0:
        raise DomainError("polar center must lie in the open half-space")
    if delta >= x1:
        raise DomainError("excluded ball must stay inside the half-space")
    m = _resolve_angular(p, q)

    # omega_1 > 0: all rays are infinite
    om_pos, w_pos = sphere_rule(p.n, m, hemisphere="pos")
    g_pos = _angular_average(f, x, om_pos, w_pos)

    def gr_pos(rho):
        return rho ** (p.n - 1) * g_pos(rho)

    r_cut = max(q.truncation_radius, 4.0 * (1.0 + float(np.linalg.norm(x))))
    core = adaptive_interval(gr_pos, delta, r_cut, q)
    tail = integrate_semiinfinite(gr_pos, r_cut, qexp, q, scale_hint=abs(core.value))

    # omega_1 < 0: each ray exits the half-space at rho = x1 / (-omega_1);
    # log-reparametrized so all rays share the unit interval
    om_neg, w_neg = sphere_rule(p.n, m, hemisphere="neg")
    rho_exit = x1 / (-om_neg[:, 0])

    def g_neg(tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        ratio = rho_exit / delta
        rho = delta * ratio[None, :] ** tau[:, None]  # (ntau, k)
        pts = x[None, None, :] + rho[:, :, None] * om_neg[None, :, :]
        vals = f(pts) * rho ** p.n * np.log(ratio)[None, :]
        return vals @ w_neg

    neg = adaptive_interval(g_neg, 0.0, 1.0, q, scale_hint=abs(core.value))
    return core + tail + neg


# --- serialization ----------------------------------------------------------

def quadspec_to_json(q):
    import json

    return json.dumps(
        {
            "rel_tol": q.rel_tol,
            "abs_tol": q.abs_tol,
            "max_subdivision_depth": q.max_subdivision_depth,
            "truncation_radius": q.truncation_radius,
            "pv_excision": q.pv_excision,
            "angular_points": q.angular_points,
        },
        sort_keys=True,
    )


def quadspec_from_json(text):
    import json

    return QuadSpec(**json.loads(text))
