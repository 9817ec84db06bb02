import math

import numpy as np
import pytest

from antiharnack.errors import DomainError, RejectionError
from antiharnack.fields import (
    GaussianBump,
    Monomial_x1,
    OddPlateau,
    random_nonneg_antisym,
)
from antiharnack.poisson import (
    BallProblem,
    HarmonicExtension,
    barrier_phi3,
    gradient_via_psi,
    mean_value_antisym_gradient,
    mean_value_classic,
    poisson_eval,
    poisson_eval_antisym,
    psi_eval,
)
from antiharnack.quad import QuadSpec
from antiharnack.special import Params

Q = QuadSpec()
P1 = Params(1, 0.5)


def test_poisson_constant_datum_normalization():
    # the Poisson kernel integrates to 1: a constant datum reproduces itself
    one = GaussianBump((0.0,), math.inf, 1.0)
    for n, s in ((1, 0.25), (1, 0.75), (2, 0.5)):
        p = Params(n, s)
        bp = BallProblem(1.0, GaussianBump(tuple([0.0] * n), math.inf, 1.0), p)
        x = np.zeros(n)
        x[0] = 0.3
        assert poisson_eval(bp, x, Q) == pytest.approx(1.0, abs=1e-9)
    del one


def test_poisson_linear_datum_reproduced():
    g = Monomial_x1()
    for s in (0.5, 0.75):
        p = Params(1, s)
        bp = BallProblem(1.0, g, p)
        for x1 in (0.1, 0.45, -0.3):
            u = poisson_eval_antisym(bp, np.array([x1]), Q)
            assert u == pytest.approx(x1, abs=1e-9)


def test_poisson_routes_agree_on_antisymmetric_datum():
    p = P1
    g = random_nonneg_antisym(seed=4, count=3, p=p)
    bp = BallProblem(1.0, g, p)
    x = np.array([0.35])
    assert poisson_eval(bp, x, Q) == pytest.approx(
        poisson_eval_antisym(bp, x, Q), rel=1e-8
    )


def test_poisson_near_boundary_refusal():
    bp = BallProblem(1.0, Monomial_x1(), P1)
    with pytest.raises(RejectionError):
        poisson_eval_antisym(bp, np.array([0.97]), Q)
    with pytest.raises(DomainError):
        poisson_eval_antisym(bp, np.array([1.2]), Q)
    # the refusal is an accuracy guard, not a mathematical obstruction
    val = poisson_eval_antisym(bp, np.array([0.97]), Q, allow_near_boundary=True)
    assert math.isfinite(val)


def test_mean_value_classic_constant():
    for r in (0.5, 1.0, 2.0):
        one = GaussianBump((0.0,), math.inf, 1.0)
        assert mean_value_classic(one, r, P1, Q) == pytest.approx(1.0, rel=1e-9)


def test_mean_value_gradient_linear_datum():
    for r in (0.25, 0.5, 1.0):
        v = mean_value_antisym_gradient(Monomial_x1(), r, P1, Q)
        assert v == pytest.approx(1.0, abs=1e-3)


def test_mean_value_gradient_r_independent():
    g = random_nonneg_antisym(seed=9, count=4, p=P1)
    vals = [mean_value_antisym_gradient(g, r, P1, Q) for r in (0.25, 0.5, 1.0)]
    mean = sum(vals) / 3.0
    assert (max(vals) - min(vals)) / abs(mean) <= 1e-2


def test_mean_value_gradient_rejects_symmetric_datum():
    with pytest.raises(RejectionError):
        mean_value_antisym_gradient(GaussianBump((1.0,), 0.5, 1.0), 0.5, P1, Q)


def test_psi_closed_values():
    # at n=1, s=1/2: psi(0) = n(n+2) gamma_ns * B(s+n/2+1, 1-s)/2 = 2/pi
    assert psi_eval(0.0, P1) == pytest.approx(2.0 / math.pi, rel=1e-12)
    # constant inside the unit ball
    assert psi_eval(0.7, P1) == psi_eval(0.0, P1)
    # decreasing outside with an algebraic tail of exponent n+2s+2
    rad = np.geomspace(1.0, 100.0, 50)
    vals = psi_eval(rad, P1)
    assert np.all(np.diff(vals) < 0.0)
    weighted = vals * (1.0 + rad ** (P1.n + 2.0 * P1.s + 2.0))
    assert float(np.max(weighted) / np.min(weighted)) <= 50.0


def test_gradient_via_psi_linear_datum():
    assert gradient_via_psi(Monomial_x1(), P1, Q) == pytest.approx(1.0, abs=1e-3)


def test_gradient_via_psi_matches_mean_value_route():
    g = random_nonneg_antisym(seed=13, count=4, p=P1)
    a = gradient_via_psi(g, P1, Q)
    b = mean_value_antisym_gradient(g, 0.5, P1, Q)
    assert a == pytest.approx(b, rel=1e-2)


def test_harmonic_extension_structure():
    g = random_nonneg_antisym(seed=6, count=3, p=P1)
    u = HarmonicExtension(BallProblem(1.0, g, P1), Q)
    assert u.meta.antisymmetric
    outside = np.array([[1.5], [-2.0], [3.0]])
    assert np.allclose(u(outside), g(outside))
    inside = np.array([[0.3], [-0.3], [0.6]])
    vals = u(inside)
    assert np.allclose(vals[0], -vals[1], atol=1e-12)
    assert np.all(np.isfinite(vals))


def test_barrier_comparable_to_x1():
    xs = np.linspace(0.01, 0.5, 8)
    quot = np.array([barrier_phi3(np.array([x]), P1, Q) / x for x in xs])
    assert np.all(quot > 0.0)
    assert float(np.max(quot) / np.min(quot)) <= 20.0


def test_barrier_datum_is_odd_plateau():
    x = np.array([[2.5], [-2.5], [0.0]])
    vals = OddPlateau()(x)
    assert vals[0] == 1.0 and vals[1] == -1.0 and vals[2] == 0.0
