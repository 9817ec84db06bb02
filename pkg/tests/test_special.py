import math

import pytest
import scipy.special as sp

from antiharnack.errors import DomainError
from antiharnack.special import (
    Params,
    c_1s,
    c_ns,
    gamma_fn,
    gamma_ns,
    halfspace_integral_closed,
    tilde_c_ns,
)

S_GRID = (0.25, 0.5, 0.75)


def test_params_validation():
    with pytest.raises(DomainError):
        Params(4, 0.5)
    with pytest.raises(DomainError):
        Params(1, 0.0)
    with pytest.raises(DomainError):
        Params(1, 1.0)
    with pytest.raises(DomainError):
        Params(0, 0.5)


def test_gamma_fn_matches_scipy():
    for x in (0.25, 0.5, 1.0, 1.75, 2.5, 3.0):
        assert gamma_fn(x) == pytest.approx(float(sp.gamma(x)), rel=1e-14)
    with pytest.raises(DomainError):
        gamma_fn(0.0)


def test_known_values_n1_s_half():
    # at n = 1, s = 1/2 all three constants collapse to 1/pi and the
    # half-space integral is exactly 1
    p = Params(1, 0.5)
    assert c_ns(p) == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert gamma_ns(p) == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert tilde_c_ns(p) == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert halfspace_integral_closed(p) == pytest.approx(1.0, rel=1e-14)


def test_c_1s_is_the_n1_constant():
    for s in S_GRID:
        assert c_1s(s) == c_ns(Params(1, s))


def test_constant_identity_all_params():
    # c_ns * halfspace integral == tilde_c, and tilde_c is n-free
    for s in S_GRID:
        tildes = []
        for n in (1, 2, 3):
            p = Params(n, s)
            assert c_ns(p) * halfspace_integral_closed(p) == pytest.approx(
                tilde_c_ns(p), rel=1e-13
            )
            tildes.append(tilde_c_ns(p))
        assert max(tildes) - min(tildes) <= 1e-15 * max(tildes)


def test_gamma_ns_sin_reflection():
    # gamma_ns vanishes linearly at both endpoints of s in (0,1) through
    # sin(pi s); check the reflection symmetry it inherits
    for n in (1, 2, 3):
        a = gamma_ns(Params(n, 0.25))
        b = gamma_ns(Params(n, 0.75))
        assert a == pytest.approx(b, rel=1e-14)


def test_frozen_reference_values():
    # spot values frozen from the defining gamma-function formulas,
    # evaluated independently with scipy.special at high precision
    p = Params(2, 0.25)
    assert c_ns(p) == pytest.approx(
        0.25 * math.pi ** -1.0 * 4.0**0.25 * float(sp.gamma(1.25) / sp.gamma(0.75)),
        rel=1e-14,
    )
    assert c_ns(Params(2, 0.25)) == pytest.approx(0.08324198387542509, rel=1e-12)
    assert c_ns(Params(3, 0.75)) == pytest.approx(0.11905056737670182, rel=1e-12)
    assert gamma_ns(Params(2, 0.5)) == pytest.approx(0.10132118364233778, rel=1e-12)
    assert halfspace_integral_closed(Params(3, 0.25)) == pytest.approx(
        8.377580409572781, rel=1e-12
    )
