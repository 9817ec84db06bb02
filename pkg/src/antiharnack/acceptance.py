"""One-shot validation suite: every release-gating check in one place.

Each criterion function measures a single quantitative property of the
library (a closed-form identity, an operator equivalence, a maximum
principle, a convergence rate) and returns a CriterionResult with the
measured value and the tolerance it is held to.  `run_all` executes the
whole battery and never raises: rejections and quadrature failures are
converted into failed results with a diagnostic message.

Some criteria are parametric in (n, s) and honour the caller's Params;
others are fixed experiments whose configuration is part of the check
itself (these ignore the caller's Params and say so in their docstring).
"""

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fields, fraclap, harnack, poisson, quad
from .errors import DomainError, QuadratureError, RejectionError
from .fields import (
    AntisymGaussianBump,
    Monomial_x1,
    OddCubicBump,
    OddHolderBump,
    Scaled,
    SplitMix64,
    random_nonneg_antisym,
)
from .poisson import BallProblem
from .quad import QuadSpec, TailModel
from .special import Params, c_ns, halfspace_integral_closed, tilde_c_ns

__all__ = ["CriterionResult", "CRITERIA", "run_all"]

_S_GRID = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    runtime_seconds: float
    detail: str = ""


def _result(number, name, passed, measured, tolerance, t0, detail=""):
    return CriterionResult(
        number=number,
        name=name,
        passed=bool(passed),
        measured=float(measured),
        tolerance=float(tolerance),
        runtime_seconds=time.perf_counter() - t0,
        detail=detail,
    )


def criterion_constants(params, q):
    """Half-space kernel integral matches its closed form (all n, s)."""
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 3):
        for s in _S_GRID:
            p = Params(n, s)
            pexp = n + 2.0 * s

            def f(z):
                z = np.asarray(z, dtype=float)
                e1 = np.zeros(z.shape[-1])
                e1[0] = 1.0
                d2 = np.sum((e1 + z) ** 2, axis=-1)
                return d2 ** (-0.5 * pexp)

            res = quad.integrate_halfspace_weighted(f, p, q, tail=TailModel(-pexp))
            closed = halfspace_integral_closed(p)
            worst = max(worst, abs(res.value - closed) / closed)
            tilde = tilde_c_ns(p)
            worst = max(worst, abs(c_ns(p) * res.value - tilde) / tilde)
    return _result(1, "constant_identity", worst <= 1e-6, worst, 1e-6, t0,
                   "max relative error over (n, s) grid, both identities")


def _gap_battery_fields(n):
    center1 = tuple([1.0] + [0.0] * (n - 1))
    center2 = tuple([0.7] + [0.4] * (n - 1))
    return [
        AntisymGaussianBump(center1, 0.5, 1.0),
        AntisymGaussianBump(center2, 0.35, 0.8),
        OddCubicBump(1.0),
        OddCubicBump(1.5),
        random_nonneg_antisym(seed=3, count=3, p=Params(n, 0.5)),
    ]


def _gap_points(n, count=10):
    rng = SplitMix64(11)
    pts = []
    for _ in range(count):
        x = [rng.uniform(0.3, 1.5)]
        for _ in range(n - 1):
            x.append(rng.uniform(-1.0, 1.0))
        pts.append(np.array(x))
    return pts


def criterion_definition_gap(params, q):
    """Classical and antisymmetric operators agree on smooth compact data."""
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2):
        p = Params(n, params.s)
        pts = _gap_points(n)
        for g in _gap_battery_fields(n):
            worst = max(worst, fraclap.definition_gap(g, pts, p, q))
    return _result(2, "definition_equivalence", worst <= 1e-5, worst, 1e-5, t0,
                   "max |classical - antisym| over 5 fields x 10 points, n in {1,2}")


def criterion_kernel_sandwich(params, q):
    """Two-sided kernel bounds hold at every sampled pair (all n, s)."""
    t0 = time.perf_counter()
    total = 0
    for n in (1, 2, 3):
        for s in _S_GRID:
            rep = fraclap.kernel_sandwich_check(Params(n, s), num_pairs=10000, seed=10 * n + int(100 * s))
            total += rep.violations
    return _result(3, "kernel_sandwich", total == 0, total, 0.0, t0,
                   "violations over 9 x 10^4 random pairs")


def criterion_plane_harmonic(params, q):
    """antisym_fraclap annihilates x_1 on the half-space axis."""
    t0 = time.perf_counter()
    g = Monomial_x1()
    worst = 0.0
    for n in (1, 2):
        for s in _S_GRID:
            p = Params(n, s)
            for x1 in np.linspace(0.2, 2.0, 20):
                x = np.zeros(n)
                x[0] = x1
                worst = max(worst, abs(fraclap.antisym_fraclap(g, x, p, q)))
    return _result(4, "x1_s_harmonic", worst <= 2e-5, worst, 2e-5, t0,
                   "max |antisym_fraclap(x_1)| over 20 points, n in {1,2}, three s")


def criterion_mean_value(params, q):
    """Gradient mean-value formula is r-independent and exact on x_1."""
    t0 = time.perf_counter()
    p = params
    radii = (0.25, 0.5, 1.0)
    data = [Monomial_x1()] + [random_nonneg_antisym(seed=k, count=4, p=p) for k in range(1, 6)]
    worst_spread = 0.0
    x1_err = math.inf
    for i, g in enumerate(data):
        vals = [poisson.mean_value_antisym_gradient(g, r, p, q) for r in radii]
        mean = sum(vals) / len(vals)
        spread = (max(vals) - min(vals)) / abs(mean)
        worst_spread = max(worst_spread, spread)
        if i == 0:
            x1_err = max(abs(v - 1.0) for v in vals)
    passed = worst_spread <= 1e-2 and x1_err <= 1e-3
    return _result(5, "mean_value_formula", passed, worst_spread, 1e-2, t0,
                   f"max r-spread over 6 data; datum x_1 error {x1_err:.3e} (tol 1e-3)")


def criterion_gradient_psi(params, q):
    """psi-kernel gradient formula vs finite differences; psi decay envelope."""
    t0 = time.perf_counter()
    p = params
    h = 1e-3
    e1 = np.zeros(p.n)
    e1[0] = 1.0
    worst = 0.0
    for seed in range(11, 16):
        g = random_nonneg_antisym(seed=seed, count=4, p=p)
        bp = BallProblem(1.0, g, p)
        fd = (poisson.poisson_eval(bp, h * e1, q) - poisson.poisson_eval(bp, -h * e1, q)) / (2.0 * h)
        val = poisson.gradient_via_psi(g, p, q)
        worst = max(worst, abs(val - fd) / abs(fd))
    rad = np.concatenate([[0.0], np.geomspace(1e-3, 100.0, 400)])
    weight = 1.0 + rad ** (p.n + 2.0 * p.s + 2.0)
    prod = poisson.psi_eval(rad, p) * weight
    envelope = float(np.max(prod) / np.min(prod))
    passed = worst <= 1e-2 and envelope <= 50.0
    return _result(6, "gradient_via_psi", passed, worst, 1e-2, t0,
                   f"max FD relative error over 5 data; psi envelope ratio {envelope:.2f} (tol 50)")


def criterion_poisson_reproduction(params, q):
    """Exterior datum y_1 reproduces u(x) = x_1 inside the ball (n=1)."""
    t0 = time.perf_counter()
    g = Monomial_x1()
    worst = 0.0
    xs = np.linspace(0.5 / 64.0, 0.5, 64)
    for s in (0.5, 0.75):
        p = Params(1, s)
        bp = BallProblem(1.0, g, p)
        for x1 in xs:
            u = poisson.poisson_eval_antisym(bp, np.array([x1]), q)
            worst = max(worst, abs(u - x1))
    return _result(7, "poisson_reproduction", worst <= 1e-3, worst, 1e-3, t0,
                   "max |u - x_1| on 64-point half-ball grid, s in {0.5, 0.75}")


def criterion_boundary_harnack(params, q):
    """50-seed boundary quotient battery: finite band, grid-stable, scale-invariant.

    Fixed experiment at n=1, s=0.5 regardless of the caller's Params.
    """
    t0 = time.perf_counter()
    p = Params(1, 0.5)
    seeds = list(range(50))
    bat64 = harnack.comparability_battery(seeds, p, q, grid_n=64)
    bat128 = harnack.comparability_battery(seeds, p, q, grid_n=128)
    finite = all(math.isfinite(r.ratio) and r.ratio > 0.0 for r in bat64.reports + bat128.reports)
    drift = max(
        abs(bat128.band_lower / bat64.band_lower - 1.0),
        abs(bat128.band_upper / bat64.band_upper - 1.0),
    )
    g = random_nonneg_antisym(seed=0, count=4, p=p)
    r1 = harnack.boundary_quotient_profile(g, p, q)
    r2 = harnack.boundary_quotient_profile(Scaled(g, 3.5), p, q)
    scale_gap = abs(r1.ratio - r2.ratio)
    passed = finite and bat64.band_lower > 0.0 and drift <= 0.2 and scale_gap <= 1e-10
    return _result(8, "boundary_harnack_battery", passed, drift, 0.2, t0,
                   f"band drift 64->128; band [{bat64.band_lower:.4f}, {bat64.band_upper:.4f}], "
                   f"scaling-invariance gap {scale_gap:.2e} (tol 1e-10)")


def criterion_interior_harnack(params, q):
    """Interior sup/inf battery; exact 5/3 ratio for the linear datum.

    Fixed experiment at n=1, s=0.5, rho=0.5 regardless of the caller's Params.
    """
    t0 = time.perf_counter()
    p = Params(1, 0.5)
    rho = 0.5
    rep = harnack.interior_harnack_check(Monomial_x1(), rho, p, q)
    err = abs(rep.ratio - 5.0 / 3.0)
    finite = True
    for seed in range(50):
        g = random_nonneg_antisym(seed=seed, count=4, p=p)
        r = harnack.interior_harnack_check(g, rho, p, q, seed=seed)
        finite = finite and math.isfinite(r.ratio) and r.ratio > 0.0
    passed = finite and err <= 2e-3
    return _result(9, "interior_harnack", passed, err, 2e-3, t0,
                   "|ratio - 5/3| for datum y_1; 50-seed ratios all finite and positive")


def criterion_counterexample(params, q):
    """Harnack failure without antisymmetry: sup/inf blows up along u_k.

    Fixed experiment at n=1, s=0.25: the blow-up factor at k=32 depends
    on how widely the quotient v/w spreads over the evaluation ball, and
    s=0.25 gives a comfortable margin over the 10x threshold at desk
    scale (the blow-up is asymptotic in k for every s).
    """
    t0 = time.perf_counter()
    p = Params(1, 0.25)
    grid_n = 64
    run = harnack.counterexample_run([1, 2, 4, 8, 16, 32], p, q, grid_n=grid_n)
    mono = all(b > a for a, b in zip(run.ratios, run.ratios[1:]))
    factor = run.ratios[-1] / run.ratios[0]
    quantum = 1.0 / grid_n
    agree = abs(run.m_bar - run.m_bar_bisect) <= quantum
    passed = mono and factor >= 10.0 and agree
    return _result(10, "counterexample_blowup", passed, factor, 10.0, t0,
                   f"ratio(32)/ratio(1), threshold >= 10; monotone {mono}; "
                   f"M_bar gap {abs(run.m_bar - run.m_bar_bisect):.2e} (quantum {quantum:g})")


def criterion_derivative_limit(params, q):
    """First-order convergence of the derivative limit on the standard odd field.

    Fixed experiment at n=1, s=0.5 with the C^3 odd bump: infinitely
    smooth odd fields converge at second order and would not exhibit
    the generic O(h) rate this check certifies.
    """
    t0 = time.perf_counter()
    p = Params(1, 0.5)
    v = OddHolderBump()
    l1, r1 = fraclap.derivative_limit_pair(v, p, q, 2e-3)
    l2, r2 = fraclap.derivative_limit_pair(v, p, q, 1e-3)
    factor = abs(l1 - r1) / abs(l2 - r2)
    passed = 1.5 <= factor <= 3.0
    return _result(11, "derivative_limit_rate", passed, factor, 3.0, t0,
                   "error ratio when h halves from 2e-3 to 1e-3; must lie in [1.5, 3]")


def criterion_barrier(params, q):
    """Barrier is two-sided comparable to x_1 on the half ball (n=1, s=0.5)."""
    t0 = time.perf_counter()
    p = Params(1, 0.5)
    xs = np.linspace(0.5 / 64.0, 0.5, 64)
    quotients = np.array([poisson.barrier_phi3(np.array([x1]), p, q) / x1 for x1 in xs])
    ratio = float(np.max(quotients) / np.min(quotients))
    return _result(12, "barrier_comparability", ratio <= 20.0, ratio, 20.0, t0,
                   "max/min of phi3(x)/x_1 over 64-point half-ball grid")


CRITERIA = (
    criterion_constants,
    criterion_definition_gap,
    criterion_kernel_sandwich,
    criterion_plane_harmonic,
    criterion_mean_value,
    criterion_gradient_psi,
    criterion_poisson_reproduction,
    criterion_boundary_harnack,
    criterion_interior_harnack,
    criterion_counterexample,
    criterion_derivative_limit,
    criterion_barrier,
)


def run_all(params: Optional[Params] = None, q: Optional[QuadSpec] = None):
    """Run every criterion; failures and rejections become report entries."""
    if params is None:
        params = Params(1, 0.5)
    if q is None:
        q = QuadSpec()
    results = []
    for number, fn in enumerate(CRITERIA, start=1):
        t0 = time.perf_counter()
        try:
            results.append(fn(params, q))
        except (RejectionError, QuadratureError, DomainError) as exc:
            results.append(CriterionResult(
                number=number,
                name=fn.__name__.replace("criterion_", ""),
                passed=False,
                measured=math.nan,
                tolerance=math.nan,
                runtime_seconds=time.perf_counter() - t0,
                detail=f"rejected: {exc}",
            ))
    return results
