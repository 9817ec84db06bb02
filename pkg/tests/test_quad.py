import math

import numpy as np
import pytest

from antiharnack import fields, quad
from antiharnack.errors import DomainError, QuadratureError, RejectionError
from antiharnack.quad import (
    QuadSpec,
    TailModel,
    adaptive_interval,
    integrate_ball_around,
    integrate_exterior_ball,
    integrate_fullspace,
    integrate_halfspace_weighted,
    integrate_pv_second_difference,
    integrate_semiinfinite,
    quadspec_from_json,
    quadspec_to_json,
    sphere_rule,
)
from antiharnack.special import Params, gamma_ns, halfspace_integral_closed

Q = QuadSpec()


class Lorentzian(fields.Field):
    """1 / (1 + |x|^2); test-only field with a closed-form half Laplacian."""

    family = "test_lorentzian"

    @property
    def meta(self):
        return fields.FieldMeta(False, -2.0, None, fields.SMOOTH)

    def _values(self, pts):
        return 1.0 / (1.0 + np.sum(pts * pts, axis=1))


def _gaussian(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-np.sum(x * x, axis=-1))


def _closed_form_cases():
    """Twelve integrands with closed forms, spanning every engine.

    Each entry returns (computed QuadResult, exact value).
    """
    p1, p2, p3 = Params(1, 0.5), Params(2, 0.5), Params(3, 0.5)
    cases = []

    # 1: smooth finite interval
    cases.append((
        "sin on [0, pi]",
        lambda: adaptive_interval(lambda t: np.sin(t), 0.0, math.pi, Q),
        2.0,
    ))
    # 2: C^0 endpoint, adaptive refinement
    cases.append((
        "sqrt on [0, 1]",
        lambda: adaptive_interval(lambda t: np.sqrt(t), 0.0, 1.0, Q),
        2.0 / 3.0,
    ))
    # 3: smooth finite interval, non-polynomial
    cases.append((
        "1/(1+t^2) on [0, 1]",
        lambda: adaptive_interval(lambda t: 1.0 / (1.0 + t * t), 0.0, 1.0, Q),
        math.pi / 4.0,
    ))
    # 4: algebraic tail, exactly matched power map
    cases.append((
        "1/(1+t^2) on [1, inf)",
        lambda: integrate_semiinfinite(lambda t: 1.0 / (1.0 + t * t), 1.0, 2.0, Q),
        math.pi / 4.0,
    ))
    # 5: pure power tail
    cases.append((
        "t^-2.5 on [2, inf)",
        lambda: integrate_semiinfinite(lambda t: np.asarray(t) ** -2.5, 2.0, 2.5, Q),
        2.0 ** -1.5 / 1.5,
    ))
    # 6-8: full-space Gaussians across dimensions
    cases.append((
        "gaussian R^1",
        lambda: integrate_fullspace(_gaussian, p1, Q, TailModel(-math.inf, cutoff_radius=9.0)),
        math.sqrt(math.pi),
    ))
    cases.append((
        "gaussian R^2",
        lambda: integrate_fullspace(_gaussian, p2, Q, TailModel(-math.inf, cutoff_radius=9.0)),
        math.pi,
    ))
    cases.append((
        "gaussian R^3",
        lambda: integrate_fullspace(_gaussian, p3, Q, TailModel(-math.inf, cutoff_radius=9.0)),
        math.pi ** 1.5,
    ))

    # 9: half-space kernel integral vs its gamma-function closed form
    ps = Params(2, 0.75)
    pexp = ps.n + 2.0 * ps.s

    def kernel(z):
        z = np.asarray(z, dtype=float)
        e1 = np.zeros(z.shape[-1])
        e1[0] = 1.0
        return np.sum((e1 + z) ** 2, axis=-1) ** (-0.5 * pexp)

    cases.append((
        "halfspace |e1+z|^-(n+2s)",
        lambda: integrate_halfspace_weighted(kernel, ps, Q, TailModel(-pexp)),
        halfspace_integral_closed(ps),
    ))

    # 10: exterior-ball weight normalization (Poisson kernel mass)
    r = 0.7

    def inv_n(y):
        y = np.asarray(y, dtype=float)
        return np.sum(y * y, axis=-1) ** (-0.5 * p2.n)

    cases.append((
        "exterior ball Poisson mass",
        lambda: integrate_exterior_ball(inv_n, r, p2.s, p2, Q, TailModel(-float(p2.n))),
        1.0 / (gamma_ns(p2) * r ** (2.0 * p2.s)),
    ))

    # 11: principal value with a closed-form half Laplacian:
    # PV of (u(x)-u(y))/|x-y|^2 for u = 1/(1+x^2) equals
    # pi (1-x^2)/(1+x^2)^2
    x0 = 0.3
    cases.append((
        "PV second difference Lorentzian",
        lambda: integrate_pv_second_difference(Lorentzian(), np.array([x0]), 0.5, p1, Q),
        math.pi * (1.0 - x0 * x0) / (1.0 + x0 * x0) ** 2,
    ))

    # 12: polar ball integral
    cases.append((
        "gaussian over a disc",
        lambda: integrate_ball_around(_gaussian, np.zeros(2), 1.5, p2, Q),
        math.pi * (1.0 - math.exp(-1.5 ** 2)),
    ))
    return cases


@pytest.mark.parametrize("case", _closed_form_cases(), ids=lambda c: c[0])
def test_closed_form_and_error_honesty(case):
    name, compute, exact = case
    res = compute()
    err = abs(res.value - exact)
    assert err <= 1e-7 * max(1.0, abs(exact)), name
    # honesty: the true error never exceeds 3x the reported bound
    # (a tiny floor covers cases the rule gets exactly right)
    assert err <= 3.0 * res.error + 64.0 * np.finfo(float).eps * abs(exact), name


def test_bitwise_determinism():
    for _ in range(2):
        a = integrate_halfspace_weighted(_gaussian, Params(2, 0.5), Q,
                                         TailModel(-math.inf, cutoff_radius=9.0))
        b = integrate_halfspace_weighted(_gaussian, Params(2, 0.5), Q,
                                         TailModel(-math.inf, cutoff_radius=9.0))
        assert a.value == b.value and a.error == b.error


def test_truncation_radius_doubling_stable():
    p = Params(1, 0.75)
    pexp = p.n + 2.0 * p.s

    def kernel(z):
        z = np.asarray(z, dtype=float)
        e1 = np.zeros(z.shape[-1])
        e1[0] = 1.0
        return np.sum((e1 + z) ** 2, axis=-1) ** (-0.5 * pexp)

    qa = QuadSpec()
    qb = QuadSpec(truncation_radius=100.0)
    a = integrate_halfspace_weighted(kernel, p, qa, TailModel(-pexp))
    b = integrate_halfspace_weighted(kernel, p, qb, TailModel(-pexp))
    assert a.value == pytest.approx(b.value, rel=1e-9)


def test_pv_routes_agree():
    p = Params(1, 0.5)
    u = Lorentzian()
    x = np.array([0.3])
    a = integrate_pv_second_difference(u, x, p.s, p, Q)
    b = integrate_pv_second_difference(u, x, p.s, p, Q, excision=1e-5)
    assert a.value == pytest.approx(b.value, rel=1e-4)


def test_quadspec_validation():
    with pytest.raises(DomainError):
        QuadSpec(rel_tol=1e-13)
    with pytest.raises(DomainError):
        QuadSpec(truncation_radius=5.0)
    with pytest.raises(DomainError):
        QuadSpec(pv_excision=0.1)


def test_quadspec_json_round_trip():
    q = QuadSpec(rel_tol=1e-9, truncation_radius=80.0, angular_points=48)
    assert quadspec_from_json(quadspec_to_json(q)) == q


def test_divergent_tail_rejection():
    with pytest.raises(RejectionError):
        integrate_semiinfinite(lambda t: 1.0 / np.asarray(t), 1.0, 1.0, Q)
    with pytest.raises(RejectionError):
        integrate_halfspace_weighted(_gaussian, Params(1, 0.5), Q, TailModel(0.0))


def test_unresolvable_integrand_raises():
    # a strong interior algebraic singularity exhausts the subdivision
    # depth and must surface as an error, not a silent wrong value
    shallow = QuadSpec(max_subdivision_depth=12)

    def f(t):
        return np.abs(np.asarray(t) - 1.0 / math.pi) ** -0.95

    with pytest.raises(QuadratureError):
        adaptive_interval(f, 0.0, 1.0, shallow)


def test_sphere_rule_moments():
    for n, measure in ((1, 2.0), (2, 2.0 * math.pi), (3, 4.0 * math.pi)):
        omegas, w = sphere_rule(n, 64)
        assert float(np.sum(w)) == pytest.approx(measure, rel=1e-12)
        # mean of omega_1^2 over the sphere is 1/n
        assert float((omegas[:, 0] ** 2) @ w / np.sum(w)) == pytest.approx(1.0 / n, rel=1e-10)
    omegas, w = sphere_rule(2, 64, hemisphere="pos")
    assert float(np.sum(w)) == pytest.approx(math.pi, rel=1e-12)
    assert np.all(omegas[:, 0] > 0.0)
