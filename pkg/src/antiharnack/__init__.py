"""Numerics for the antisymmetric fractional Laplacian.

Normalization constants, test-function families with integrability
norms, singular-integral quadrature, pointwise fractional Laplacians
under the classical and half-space antisymmetric definitions, Poisson
constructions of s-harmonic functions in balls, and empirical Harnack
verification including the counterexample showing the boundary Harnack
principle genuinely needs antisymmetry.
"""

from .errors import DomainError, QuadratureError, RejectionError
from .special import (
    Params,
    c_1s,
    c_ns,
    gamma_ns,
    halfspace_integral_closed,
    tilde_c_ns,
)
from .fields import (
    AntisymGaussianBump,
    Antisymmetrized,
    CutoffZeta1,
    CutoffZeta2,
    ExteriorRestriction,
    Field,
    FieldMeta,
    GaussianBump,
    MirrorBumpSum,
    Monomial_x1,
    OddCubicBump,
    OddHolderBump,
    OddPlateau,
    Scaled,
    Shifted,
    SplitMix64,
    Zero,
    anorm,
    antisymmetrize,
    evaluate,
    field_from_json,
    field_to_json,
    lsnorm,
    random_nonneg_antisym,
    reflect,
)
from .quad import (
    QuadResult,
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
from .fraclap import (
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
from .poisson import (
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
from .harnack import (
    BatterySummary,
    CounterexampleRun,
    HarnackReport,
    boundary_quotient_profile,
    comparability_battery,
    counterexample_run,
    interior_harnack_check,
)
from .acceptance import CriterionResult, run_all
from .cli import RunConfig, config_from_json, config_to_json

__version__ = "1.0.0"
