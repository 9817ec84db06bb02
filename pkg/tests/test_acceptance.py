"""Release acceptance suite: one test per gating criterion.

Each test runs one criterion at its reference configuration, prints a
single pass/fail line with the measured value and its tolerance, and
asserts the criterion holds within its runtime budget.
"""

import pytest

from antiharnack import acceptance
from antiharnack.quad import QuadSpec
from antiharnack.special import Params

PARAMS = Params(1, 0.5)
Q = QuadSpec()

BUDGETS = {
    1: 30.0,
    2: 180.0,
    3: 5.0,
    4: 120.0,
    5: 120.0,
    6: 180.0,
    7: 60.0,
    8: 600.0,
    9: 300.0,
    10: 600.0,
    11: 120.0,
    12: 120.0,
}


def _check(criterion):
    result = criterion(PARAMS, Q)
    status = "PASS" if result.passed else "FAIL"
    print(
        f"criterion {result.number:2d} {result.name}: {status} "
        f"(measured {result.measured:.6g}, tolerance {result.tolerance:g}, "
        f"{result.runtime_seconds:.1f}s) {result.detail}"
    )
    assert result.passed, f"{result.name}: measured {result.measured} vs tolerance {result.tolerance}; {result.detail}"
    budget = BUDGETS[result.number]
    assert result.runtime_seconds < budget, (
        f"{result.name} exceeded its runtime budget: {result.runtime_seconds:.1f}s >= {budget}s"
    )
    return result


def test_criterion_01_constant_identity(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_constants)


def test_criterion_02_definition_equivalence(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_definition_gap)


def test_criterion_03_kernel_sandwich(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_kernel_sandwich)


def test_criterion_04_x1_s_harmonic(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_plane_harmonic)


def test_criterion_05_mean_value_formula(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_mean_value)


def test_criterion_06_gradient_via_psi(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_gradient_psi)


def test_criterion_07_poisson_reproduction(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_poisson_reproduction)


def test_criterion_08_boundary_harnack_battery(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_boundary_harnack)


def test_criterion_09_interior_harnack(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_interior_harnack)


def test_criterion_10_counterexample_blowup(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_counterexample)


def test_criterion_11_derivative_limit_rate(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_derivative_limit)


def test_criterion_12_barrier_comparability(capsys):
    with capsys.disabled():
        _check(acceptance.criterion_barrier)
