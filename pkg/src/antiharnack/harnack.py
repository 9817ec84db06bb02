"""Empirical Harnack-inequality checks and the no-antisymmetry counterexample.

For nonnegative antisymmetric data the s-harmonic function built in the
unit ball satisfies a boundary Harnack principle: the quotient u(x)/x_1
stays within a bounded two-sided band on the half ball, and both
extremes are comparable to the half-space integral norm of u.  These
are existence statements; this module measures the constants on grids
and seed batteries.

The counterexample shows the principle genuinely needs antisymmetry:
in a ball away from the symmetry plane, with nonnegative data supported
only on the far side of the plane, the family u_k = v - (M_bar - 1/k) w
stays nonnegative while its inf collapses to zero, so sup/inf blows up.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import fields, quad
from .errors import DomainError, QuadratureError, RejectionError
from .fields import CutoffZeta1, CutoffZeta2, Shifted, SplitMix64
from .poisson import BallProblem, HarmonicExtension, poisson_eval

__all__ = [
    "HarnackReport",
    "CounterexampleRun",
    "BatterySummary",
    "boundary_quotient_profile",
    "interior_harnack_check",
    "counterexample_run",
    "comparability_battery",
]


@dataclass(frozen=True)
class HarnackReport:
    sup_quotient: float
    inf_quotient: float
    ratio: float
    anorm_value: float
    c_lower: float
    c_upper: float
    grid_spec: str
    seed: Optional[int] = None


@dataclass(frozen=True)
class CounterexampleRun:
    m_bar: float
    m_bar_bisect: float
    ks: Tuple[int, ...]
    ratios: Tuple[float, ...]
    sups: Tuple[float, ...]
    infs: Tuple[float, ...]
    grid_spec: str


@dataclass(frozen=True)
class BatterySummary:
    seeds: Tuple[int, ...]
    reports: Tuple[HarnackReport, ...]
    band_lower: float
    band_upper: float


def _check_data_hypotheses(g, p, what):
    meta = g.meta
    if not meta.antisymmetric:
        raise RejectionError(f"{what} requires antisymmetric data")
    if meta.decay_exponent >= 2.0 * p.s + 1.0:
        raise RejectionError(f"{what}: datum growth exponent {meta.decay_exponent} not integrable")
    rng = SplitMix64(977)
    pts = np.array([rng.uniform() for _ in range(1000 * p.n)]).reshape(1000, p.n)
    pts = pts * 8.0 - 4.0
    pts[:, 0] = np.abs(pts[:, 0])
    if float(np.min(g(pts))) < -1e-12:
        raise RejectionError(f"{what} requires data nonnegative on the half-space")


def _half_ball_grid(radius, grid_n, n, x1_floor):
    """Tensor grid of the half ball of the given radius with x_1 >= x1_floor."""
    step = 1.0 / grid_n
    axis = np.arange(-grid_n, grid_n + 1) * step
    axis = axis[np.abs(axis) <= radius + 1e-12]
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    keep = (np.linalg.norm(pts, axis=1) <= radius + 1e-12) & (pts[:, 0] >= x1_floor - 1e-12)
    return pts[keep]


def _report(values, quotients, anorm_value, grid_spec, seed):
    sup_q = float(np.max(quotients))
    inf_q = float(np.min(quotients))
    if sup_q == 0.0 and inf_q == 0.0:
        ratio = math.nan  # degenerate (zero field)
    else:
        ratio = math.inf if inf_q <= 0.0 else sup_q / inf_q
    c_lower = 0.0 if anorm_value == 0.0 else inf_q / anorm_value
    c_upper = 0.0 if anorm_value == 0.0 else sup_q / anorm_value
    return HarnackReport(
        sup_quotient=sup_q,
        inf_quotient=inf_q,
        ratio=ratio,
        anorm_value=anorm_value,
        c_lower=c_lower,
        c_upper=c_upper,
        grid_spec=grid_spec,
        seed=seed,
    )


def boundary_quotient_profile(g, p, q, grid_n=None, seed=None):
    """Sup and inf of u(x)/x_1 over the half ball of radius 1/2.

    u is the s-harmonic function in the unit ball with exterior datum g.
    The grid keeps x_1 >= 1/grid_n: the quotient is a 0/0 limit on the
    plane itself, and the comparability statement lives on the open half
    ball.  The norm entering c_lower/c_upper is the half-space norm of
    the full extension (datum outside, Poisson values inside).
    """
    if grid_n is None:
        grid_n = 32 if p.n == 3 else 64
    _check_data_hypotheses(g, p, "boundary_quotient_profile")
    u = HarmonicExtension(BallProblem(1.0, g, p), q)
    pts = _half_ball_grid(0.5, grid_n, p.n, 1.0 / grid_n)
    vals = u(pts)
    quotients = vals / pts[:, 0]
    anorm_value = fields.anorm(u, p, q)
    return _report(vals, quotients, anorm_value, f"half-ball r=1/2 tensor grid n={grid_n}", seed)


def interior_harnack_check(g, rho, p, q, grid_n=None, seed=None):
    """Sup and inf of u itself over the ball of radius rho/2 around e_1.

    Here u is built in the ball of radius 2, so it is s-harmonic on a
    neighbourhood of the evaluation ball; rho is capped at 1/2 to keep
    the evaluation region well inside.
    """
    if grid_n is None:
        grid_n = 32 if p.n == 3 else 64
    if not 0.0 < rho <= 0.5:
        raise DomainError("rho must lie in (0, 1/2] for the concentric-ball construction")
    _check_data_hypotheses(g, p, "interior_harnack_check")
    u = HarmonicExtension(BallProblem(2.0, g, p), q)
    e1 = np.zeros(p.n)
    e1[0] = 1.0
    local = _half_ball_grid(0.5 * rho, grid_n, p.n, -1.0)
    pts = e1 + local
    vals = u(pts)
    anorm_value = fields.anorm(u, p, q)
    return _report(vals, vals, anorm_value, f"ball r={rho}/2 at e1, tensor grid n={grid_n}", seed)


def counterexample_run(ks, p, q, grid_n=None):
    """The Harnack failure without antisymmetry, reproduced end to end.

    In the ball B_1(2 e_1): v solves with datum zeta_1 (equal to 1 far
    on the other side of the plane), w solves with datum zeta_2 (a bump
    at -2 e_1).  Both data vanish on the half-space outside the ball,
    and both solutions are positive inside.  By linearity
    u_M = v - M w, and M_bar = min over the grid of v/w is the largest
    coefficient keeping u_M nonnegative there; u_k with M = M_bar - 1/k
    has inf -> 0 while sup stays put, so sup/inf grows without bound.
    """
    if grid_n is None:
        grid_n = 32 if p.n == 3 else 64
    ks = tuple(int(k) for k in ks)
    if any(k <= 0 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError("ks must be strictly increasing positive integers")
    offset = tuple([2.0] + [0.0] * (p.n - 1))
    bp_v = BallProblem(1.0, Shifted(CutoffZeta1(), offset), p)
    bp_w = BallProblem(1.0, Shifted(CutoffZeta2(), offset), p)
    pts = _half_ball_grid(0.5, grid_n, p.n, -1.0)
    v = np.array([poisson_eval(bp_v, z, q) for z in pts])
    w = np.array([poisson_eval(bp_w, z, q) for z in pts])
    if np.any(w <= 0.0) or np.any(v <= 0.0):
        raise QuadratureError(
            "Poisson solution not positive on the grid, contradicting the strong "
            "maximum principle: quadrature failure"
        )
    quotients = v / w
    m_bar = float(np.min(quotients))

    # bisection cross-check: smallest M with min(v - M w) <= 0
    lo, hi = 0.0, float(np.max(quotients))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(np.min(v - mid * w)) <= 0.0:
            hi = mid
        else:
            lo = mid
    m_bar_bisect = hi

    ratios = []
    sups = []
    infs = []
    for k in ks:
        uk = v - (m_bar - 1.0 / k) * w
        if float(np.min(uk)) <= 0.0:
            raise QuadratureError(f"u_k lost positivity on the grid at k={k}")
        if float(np.max(uk)) > 1.0 + 1e-9:
            raise QuadratureError(f"u_k exceeded the maximum-principle bound 1 at k={k}")
        sups.append(float(np.max(uk)))
        infs.append(float(np.min(uk)))
        ratios.append(sups[-1] / infs[-1])
    return CounterexampleRun(
        m_bar=m_bar,
        m_bar_bisect=m_bar_bisect,
        ks=ks,
        ratios=tuple(ratios),
        sups=tuple(sups),
        infs=tuple(infs),
        grid_spec=f"ball r=1/2 at 2e1 (local frame), tensor grid n={grid_n}",
    )


def comparability_battery(seeds, p, q, grid_n=None, count=4):
    """Boundary quotient profiles across seeded random data.

    Emits per-seed comparability constants and the enclosing band
    [min c_lower, max c_upper]; for admissible data the band is
    positive and finite, with no claim about its width.
    """
    reports = []
    for seed in seeds:
        g = fields.random_nonneg_antisym(seed=seed, count=count, p=p)
        reports.append(boundary_quotient_profile(g, p, q, grid_n=grid_n, seed=seed))
    if reports:
        band_lower = min(r.c_lower for r in reports)
        band_upper = max(r.c_upper for r in reports)
    else:
        band_lower = math.nan
        band_upper = math.nan
    return BatterySummary(
        seeds=tuple(seeds),
        reports=tuple(reports),
        band_lower=band_lower,
        band_upper=band_upper,
    )
