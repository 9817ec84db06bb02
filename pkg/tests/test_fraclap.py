import math

import numpy as np
import pytest

from antiharnack import fraclap
from antiharnack.errors import DomainError, RejectionError
from antiharnack.fields import (
    AntisymGaussianBump,
    GaussianBump,
    Monomial_x1,
    OddCubicBump,
    OddHolderBump,
    random_nonneg_antisym,
)
from antiharnack.fraclap import (
    antisym_fraclap,
    classical_fraclap,
    definition_gap,
    derivative_limit_pair,
    kernel_difference,
    kernel_sandwich_bounds,
    kernel_sandwich_check,
    pointwise_bound_check,
    rescaled_kernel_bound_check,
)
from antiharnack.quad import QuadSpec
from antiharnack.special import Params

Q = QuadSpec()
P1 = Params(1, 0.5)


def test_kernel_difference_exact_value():
    # n=1, s=1/2: K(x,y) = 1/(x-y)^2 - 1/(x+y)^2; at x=1, y=2 this is 8/9
    val = kernel_difference(np.array([1.0]), np.array([2.0]), P1)
    assert float(val) == pytest.approx(8.0 / 9.0, rel=1e-14)


def test_kernel_difference_positive_and_cancellation_safe():
    # x and y extremely close to the plane: the two power terms agree to
    # 1e-16 relative and naive subtraction would return 0 or garbage
    p = Params(2, 0.75)
    x = np.array([1e-9, 0.3])
    y = np.array([2e-9, -0.4])
    k = float(kernel_difference(x, y, p))
    lower, upper = kernel_sandwich_bounds(x, y, p)
    assert 0.0 < float(lower) <= k <= float(upper)


def test_kernel_difference_rejects_coincident_points():
    with pytest.raises(DomainError):
        kernel_difference(np.array([1.0]), np.array([1.0]), P1)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_kernel_sandwich_no_violations(n, s):
    rep = kernel_sandwich_check(Params(n, s), num_pairs=2000, seed=5)
    assert rep.violations == 0
    assert rep.min_lower_margin >= 0.0
    assert rep.min_upper_margin >= 0.0


def test_classical_routes_agree():
    g = AntisymGaussianBump((1.0,), 0.5, 1.0)
    x = np.array([0.6])
    a = classical_fraclap(g, x, P1, Q, route="second_difference")
    b = classical_fraclap(g, x, P1, Q, route="excision")
    assert a == pytest.approx(b, rel=1e-6)


def test_classical_fraclap_lorentzian_not_applicable():
    # growth bound must beat 2s for the classical integral to converge
    with pytest.raises(RejectionError):
        classical_fraclap(Monomial_x1(), np.array([0.5]), P1, Q)


def test_classical_rejects_nonsmooth():
    from antiharnack.fields import OddPlateau
    with pytest.raises(RejectionError):
        classical_fraclap(OddPlateau(), np.array([0.5]), P1, Q)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_antisym_fraclap_annihilates_x1(s):
    p = Params(1, s)
    g = Monomial_x1()
    for x1 in (0.2, 0.7, 1.5):
        val = antisym_fraclap(g, np.array([x1]), p, Q)
        assert abs(val) <= 1e-7


def test_antisym_fraclap_near_plane_rejection():
    with pytest.raises(RejectionError):
        antisym_fraclap(Monomial_x1(), np.array([1e-6]), P1, Q)


def test_antisym_fraclap_requires_antisymmetry():
    with pytest.raises(RejectionError):
        antisym_fraclap(GaussianBump((1.0,), 0.5, 1.0), np.array([0.5]), P1, Q)


def test_definition_gap_small_on_smooth_compact_field():
    g = AntisymGaussianBump((0.8,), 0.4, 1.0)
    pts = [np.array([0.5]), np.array([1.1])]
    assert definition_gap(g, pts, P1, Q) <= 1e-7


def test_derivative_limit_pair_converges():
    v = OddCubicBump(1.0)
    l1, r1 = derivative_limit_pair(v, P1, Q, 2e-3)
    l2, r2 = derivative_limit_pair(v, P1, Q, 1e-3)
    assert r1 == r2  # the right side does not depend on h
    assert abs(l2 - r2) < abs(l1 - r1)
    assert abs(l2 - r2) <= 1e-5 * abs(r2)


def test_derivative_limit_rate_on_holder_field():
    # the C^3 odd bump converges at first order: halving h scales the
    # error by a factor strictly between 1.5 and 3
    v = OddHolderBump()
    l1, r1 = derivative_limit_pair(v, P1, Q, 2e-3)
    l2, r2 = derivative_limit_pair(v, P1, Q, 1e-3)
    factor = abs(l1 - r1) / abs(l2 - r2)
    assert 1.5 <= factor <= 3.0


def test_derivative_limit_rejects_nonzero_slope():
    with pytest.raises(RejectionError):
        derivative_limit_pair(AntisymGaussianBump((0.5,), 0.5, 1.0), P1, Q, 1e-3)


def test_pointwise_bound_report_finite():
    g = random_nonneg_antisym(seed=2, count=3, p=P1)
    rep = pointwise_bound_check(g, np.array([0.4]), P1, Q)
    assert math.isfinite(rep.value)
    assert math.isfinite(rep.ratio)


def test_rescaled_kernel_bound_bounded():
    # the witnessed constant is finite and stable under shrinking R
    a = np.array([3.0])
    small = rescaled_kernel_bound_check(0.25, a, P1, num_pairs=2000, seed=1)
    large = rescaled_kernel_bound_check(0.5, a, P1, num_pairs=2000, seed=1)
    for rep in (small, large):
        assert math.isfinite(rep.max_ratio) and rep.max_ratio > 0.0
    assert small.max_ratio <= 10.0 * large.max_ratio
    assert large.max_ratio <= 10.0 * small.max_ratio
