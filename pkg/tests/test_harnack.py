import math

import numpy as np
import pytest

from antiharnack.errors import DomainError, RejectionError
from antiharnack.fields import (
    GaussianBump,
    Monomial_x1,
    Scaled,
    random_nonneg_antisym,
)
from antiharnack.harnack import (
    boundary_quotient_profile,
    comparability_battery,
    counterexample_run,
    interior_harnack_check,
)
from antiharnack.quad import QuadSpec
from antiharnack.special import Params

Q = QuadSpec()
P1 = Params(1, 0.5)


def test_boundary_profile_linear_datum_is_flat():
    # with datum y_1 the solution is x_1 itself, so the quotient u/x_1
    # is identically 1 on the half ball
    rep = boundary_quotient_profile(Monomial_x1(), P1, Q, grid_n=32)
    assert rep.sup_quotient == pytest.approx(1.0, abs=1e-9)
    assert rep.inf_quotient == pytest.approx(1.0, abs=1e-9)
    assert rep.ratio == pytest.approx(1.0, abs=1e-9)


def test_boundary_profile_random_data_band():
    rep = boundary_quotient_profile(random_nonneg_antisym(seed=1, count=4, p=P1), P1, Q)
    assert 0.0 < rep.inf_quotient <= rep.sup_quotient
    assert math.isfinite(rep.ratio) and rep.ratio >= 1.0
    assert 0.0 < rep.c_lower <= rep.c_upper < math.inf


def test_boundary_profile_scaling_invariance():
    g = random_nonneg_antisym(seed=2, count=4, p=P1)
    r1 = boundary_quotient_profile(g, P1, Q)
    r2 = boundary_quotient_profile(Scaled(g, 3.5), P1, Q)
    assert abs(r1.ratio - r2.ratio) <= 1e-10
    assert r2.sup_quotient == pytest.approx(3.5 * r1.sup_quotient, rel=1e-12)


def test_boundary_profile_rejects_bad_data():
    with pytest.raises(RejectionError):
        boundary_quotient_profile(GaussianBump((1.0,), 0.5, 1.0), P1, Q)
    with pytest.raises(RejectionError):
        boundary_quotient_profile(Scaled(Monomial_x1(), -1.0), P1, Q)


def test_interior_linear_datum_exact_ratio():
    # u = x_1 on the ball of radius rho/2 around e_1 has
    # sup/inf = (1 + rho/2) / (1 - rho/2)
    rho = 0.5
    rep = interior_harnack_check(Monomial_x1(), rho, P1, Q)
    assert rep.ratio == pytest.approx((1 + rho / 2) / (1 - rho / 2), abs=2e-3)


def test_interior_rho_validation():
    with pytest.raises(DomainError):
        interior_harnack_check(Monomial_x1(), 0.8, P1, Q)


def test_battery_band_positive_finite():
    bat = comparability_battery(range(5), P1, Q)
    assert len(bat.reports) == 5
    assert 0.0 < bat.band_lower <= bat.band_upper < math.inf
    for rep in bat.reports:
        assert math.isfinite(rep.ratio) and rep.ratio > 0.0


def test_counterexample_monotone_blowup():
    p = Params(1, 0.25)
    run = counterexample_run([1, 2, 4, 8, 16, 32], p, Q)
    assert all(b > a for a, b in zip(run.ratios, run.ratios[1:]))
    assert run.ratios[-1] >= 10.0 * run.ratios[0]
    assert all(i > 0.0 for i in run.infs)
    assert all(s <= 1.0 + 1e-9 for s in run.sups)
    assert abs(run.m_bar - run.m_bar_bisect) <= 1.0 / 64.0


def test_counterexample_requires_increasing_ks():
    with pytest.raises(DomainError):
        counterexample_run([1, 2, 2], P1, Q)
    with pytest.raises(DomainError):
        counterexample_run([0, 1], P1, Q)


def test_counterexample_determinism():
    p = Params(1, 0.25)
    a = counterexample_run([1, 4], p, Q)
    b = counterexample_run([1, 4], p, Q)
    assert a.ratios == b.ratios and a.m_bar == b.m_bar
