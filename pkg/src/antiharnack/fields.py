"""Closed-form test-function families, antisymmetrization, and the two integrability norms.

Every field is an immutable value object that evaluates pointwise on
arrays of points of shape (..., n).  Antisymmetric families are built by
construction as f(x) - f(x_*) where x_* = (-x_1, x') is the reflection
across the plane {x_1 = 0}, so the cancellation in the antisymmetry
identity is exact in floating point.
"""

import json
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, RejectionError
from .special import Params

__all__ = [
    "SMOOTH",
    "LIPSCHITZ",
    "MEASURABLE",
    "FieldMeta",
    "Field",
    "Monomial_x1",
    "GaussianBump",
    "AntisymGaussianBump",
    "MirrorBumpSum",
    "CutoffZeta1",
    "CutoffZeta2",
    "OddPlateau",
    "OddCubicBump",
    "ExteriorRestriction",
    "Antisymmetrized",
    "Scaled",
    "Zero",
    "SplitMix64",
    "reflect",
    "evaluate",
    "antisymmetrize",
    "random_nonneg_antisym",
    "anorm",
    "lsnorm",
    "field_to_json",
    "field_from_json",
]

SMOOTH = "smooth"
LIPSCHITZ = "lipschitz"
MEASURABLE = "measurable"

# Gaussian bumps fall below 1e-16 relative amplitude beyond this many widths.
_GAUSSIAN_CUTOFF_WIDTHS = 9.0


def reflect(x):
    """Reflection across {x_1 = 0}: (x_1, x') -> (-x_1, x').  Involution."""
    x = np.asarray(x, dtype=float)
    out = x.copy()
    out[..., 0] = -out[..., 0]
    return out


def as_points(x, n):
    """Coerce x to an array of points of shape (..., n)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        if n != 1:
            raise DomainError(f"scalar point given but dimension is {n}")
        x = x.reshape(1)
    if x.shape[-1] != n:
        raise DomainError(f"point has dimension {x.shape[-1]}, expected {n}")
    return x


@dataclass(frozen=True)
class FieldMeta:
    """Declared analytic metadata of a field family.

    decay_exponent is the growth bound p in |u(y)| <= C (1 + |y|)^p;
    -inf means compactly supported (see support_radius, which for
    Gaussian-type families is the radius beyond which |u| < 1e-16 times
    its amplitude).
    """

    antisymmetric: bool
    decay_exponent: float
    support_radius: Optional[float]
    smoothness: str


class Field:
    """Base class: a pure closed-form function on R^n with metadata."""

    family = "abstract"

    @property
    def meta(self):
        raise NotImplementedError

    def _values(self, pts):
        raise NotImplementedError

    def __call__(self, x, n=None):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        flat = x.reshape(-1, x.shape[-1])
        return self._values(flat).reshape(x.shape[:-1])

    def _params_json(self):
        return {}


@dataclass(frozen=True)
class Monomial_x1(Field):
    """u(x) = x_1: the prototypical antisymmetric s-harmonic function on the half-space."""

    family = "monomial_x1"

    @property
    def meta(self):
        return FieldMeta(True, 1.0, None, SMOOTH)

    def _values(self, pts):
        return pts[:, 0].copy()


@dataclass(frozen=True)
class Zero(Field):
    family = "zero"

    @property
    def meta(self):
        return FieldMeta(True, -math.inf, 0.0, SMOOTH)

    def _values(self, pts):
        return np.zeros(pts.shape[0])


@dataclass(frozen=True)
class GaussianBump(Field):
    """a * exp(-|x - c|^2 / (2 w^2)); width = inf gives the constant a."""

    center: Tuple[float, ...]
    width: float
    amplitude: float
    family = "gaussian_bump"

    @property
    def meta(self):
        if math.isinf(self.width):
            return FieldMeta(False, 0.0, None, SMOOTH)
        r = float(np.linalg.norm(self.center)) + _GAUSSIAN_CUTOFF_WIDTHS * self.width
        return FieldMeta(False, -math.inf, r, SMOOTH)

    def _values(self, pts):
        if math.isinf(self.width):
            return np.full(pts.shape[0], float(self.amplitude))
        d2 = np.sum((pts - np.asarray(self.center)) ** 2, axis=1)
        return self.amplitude * np.exp(-d2 / (2.0 * self.width**2))

    def _params_json(self):
        return {"center": list(self.center), "width": self.width, "amplitude": self.amplitude}


@dataclass(frozen=True)
class AntisymGaussianBump(Field):
    """Gaussian bump centred in the half-space minus its mirror image."""

    center: Tuple[float, ...]
    width: float
    amplitude: float
    family = "antisym_gaussian_bump"

    def __post_init__(self):
        if self.center[0] <= 0:
            raise DomainError("bump center must lie in the open half-space {x_1 > 0}")

    @property
    def meta(self):
        c = np.asarray(self.center)
        r = float(np.linalg.norm(c)) + _GAUSSIAN_CUTOFF_WIDTHS * self.width
        return FieldMeta(True, -math.inf, r, SMOOTH)

    def _values(self, pts):
        c = np.asarray(self.center)
        d2 = np.sum((pts - c) ** 2, axis=1)
        d2m = np.sum((reflect(pts) - c) ** 2, axis=1)
        w2 = 2.0 * self.width**2
        return self.amplitude * (np.exp(-d2 / w2) - np.exp(-d2m / w2))

    def _params_json(self):
        return {"center": list(self.center), "width": self.width, "amplitude": self.amplitude}


MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator; the fixed PRNG behind seeded random fields.

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64)
    z = state'; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB; output z ^ (z >> 31)

    uniform() maps the top 53 bits to [0, 1).
    """

    def __init__(self, seed):
        self._state = int(seed) & MASK64

    def next_u64(self):
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo=0.0, hi=1.0):
        return lo + (hi - lo) * (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class MirrorBumpSum(Field):
    """Seeded sum of mirrored Gaussian bumps, nonnegative on the half-space.

    Centers are drawn in {x_1 >= 0.2} intersected with the ball of radius
    `box`; each width is capped at half the center's x_1 coordinate, which
    makes every mirrored bump (and hence the sum) nonnegative on {x_1 > 0}.
    """

    seed: int
    count: int
    n: int
    box: float = 5.0
    family = "mirror_bump_sum"

    def __post_init__(self):
        if self.count < 1:
            raise DomainError("count must be >= 1")
        object.__setattr__(self, "_bumps", self._generate())

    def _generate(self):
        rng = SplitMix64(self.seed)
        bumps = []
        for _ in range(self.count):
            while True:
                c = [rng.uniform(0.2, self.box)]
                for _ in range(self.n - 1):
                    c.append(rng.uniform(-self.box, self.box))
                if math.hypot(*c) <= self.box:
                    break
            width = min(rng.uniform(0.1, 0.6), c[0] / 2.0)
            amplitude = rng.uniform(0.5, 1.5)
            bumps.append(AntisymGaussianBump(tuple(c), width, amplitude))
        return tuple(bumps)

    @property
    def meta(self):
        r = max(b.meta.support_radius for b in self._bumps)
        return FieldMeta(True, -math.inf, r, SMOOTH)

    def _values(self, pts):
        out = np.zeros(pts.shape[0])
        for b in self._bumps:
            out += b._values(pts)
        return out

    def _params_json(self):
        return {"seed": self.seed, "count": self.count, "n": self.n, "box": self.box}


def _smoothstep(t):
    """Quintic smoothstep: 0 at t<=0, 1 at t>=1, C^2 across both ends."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class CutoffZeta1(Field):
    """Cutoff equal to 1 on {x_1 <= -1}, 0 on {x_1 >= 0}, smoothstep between."""

    family = "cutoff_zeta1"

    @property
    def meta(self):
        return FieldMeta(False, 0.0, None, LIPSCHITZ)

    def _values(self, pts):
        return _smoothstep(-pts[:, 0])


@dataclass(frozen=True)
class CutoffZeta2(Field):
    """Radial cutoff around -2 e_1: 1 inside radius 1/2, 0 outside radius 1."""

    family = "cutoff_zeta2"

    @property
    def meta(self):
        return FieldMeta(False, -math.inf, 3.0, LIPSCHITZ)

    def _values(self, pts):
        c = np.zeros(pts.shape[1])
        c[0] = -2.0
        d = np.linalg.norm(pts - c, axis=1)
        return _smoothstep(2.0 * (1.0 - d))


@dataclass(frozen=True)
class OddPlateau(Field):
    """Odd monotone cutoff of x_1: 0 at the plane, +-1 beyond |x_1| = 2.

    phi(x) = sign(x_1) * smoothstep(|x_1| / 2); C^2 and antisymmetric.
    """

    family = "odd_plateau"

    @property
    def meta(self):
        return FieldMeta(True, 0.0, None, LIPSCHITZ)

    def _values(self, pts):
        x1 = pts[:, 0]
        return np.sign(x1) * _smoothstep(np.abs(x1) / 2.0)


@dataclass(frozen=True)
class OddCubicBump(Field):
    """x_1^3 * exp(-|x|^2 / w^2): antisymmetric with zero slope at the origin."""

    width: float = 1.0
    family = "odd_cubic_bump"

    @property
    def meta(self):
        return FieldMeta(True, -math.inf, 9.0 * self.width, SMOOTH)

    def _values(self, pts):
        r2 = np.sum(pts**2, axis=1)
        return pts[:, 0] ** 3 * np.exp(-r2 / self.width**2)

    def _params_json(self):
        return {"width": self.width}


@dataclass(frozen=True)
class OddHolderBump(Field):
    """sign(x_1) |x_1|^exponent * exp(-|x|^2 / w^2).

    Antisymmetric with zero slope at the origin, like the cubic bump,
    but with only finite Hoelder regularity across the plane (the
    exponent defaults to 3.25, so the field is C^3 but not C^4 there).
    This is the standard probe for limits whose convergence rate is set
    by the regularity at the plane; infinitely smooth odd fields
    converge faster and would mask the generic rate.  Away from the
    plane the function is real-analytic, so pointwise operator
    evaluations (always taken at x_1 > 0) see a smooth function.
    """

    exponent: float = 3.25
    width: float = 1.0
    family = "odd_holder_bump"

    @property
    def meta(self):
        return FieldMeta(True, -math.inf, 9.0 * self.width, SMOOTH)

    def _values(self, pts):
        r2 = np.sum(pts**2, axis=1)
        x1 = pts[:, 0]
        return np.sign(x1) * np.abs(x1) ** self.exponent * np.exp(-r2 / self.width**2)

    def _params_json(self):
        return {"exponent": self.exponent, "width": self.width}


@dataclass(frozen=True)
class ExteriorRestriction(Field):
    """inner(x) outside the ball of the given radius, 0 inside."""

    inner: Field
    radius: float
    family = "exterior_restriction"

    @property
    def meta(self):
        m = self.inner.meta
        return replace(m, smoothness=MEASURABLE)

    def _values(self, pts):
        outside = np.linalg.norm(pts, axis=1) >= self.radius
        out = np.zeros(pts.shape[0])
        if outside.any():
            out[outside] = self.inner._values(pts[outside])
        return out

    def _params_json(self):
        return {"inner": _to_dict(self.inner), "radius": self.radius}


@dataclass(frozen=True)
class Antisymmetrized(Field):
    """inner(x) - inner(x_*): antisymmetric by construction."""

    inner: Field
    family = "antisymmetrized"

    @property
    def meta(self):
        m = self.inner.meta
        support = None if m.support_radius is None else m.support_radius
        return FieldMeta(True, m.decay_exponent, support, m.smoothness)

    def _values(self, pts):
        return self.inner._values(pts) - self.inner._values(reflect(pts))

    def _params_json(self):
        return {"inner": _to_dict(self.inner)}


@dataclass(frozen=True)
class Scaled(Field):
    inner: Field
    factor: float
    family = "scaled"

    @property
    def meta(self):
        return self.inner.meta

    def _values(self, pts):
        return self.factor * self.inner._values(pts)

    def _params_json(self):
        return {"inner": _to_dict(self.inner), "factor": self.factor}


@dataclass(frozen=True)
class Shifted(Field):
    """inner(offset + x): the pullback of a field under translation.

    Used to pose problems on translated balls in the origin-centred frame.
    Translation does not preserve antisymmetry, so the result is never
    marked antisymmetric.
    """

    inner: Field
    offset: Tuple[float, ...]
    family = "shifted"

    @property
    def meta(self):
        m = self.inner.meta
        support = None
        if m.support_radius is not None:
            support = m.support_radius + float(np.linalg.norm(self.offset))
        return FieldMeta(False, m.decay_exponent, support, m.smoothness)

    def _values(self, pts):
        return self.inner._values(pts + np.asarray(self.offset))

    def _params_json(self):
        return {"inner": _to_dict(self.inner), "offset": list(self.offset)}


def evaluate(spec, x, n=None):
    """Evaluate a field at a point or array of points of shape (..., n)."""
    if n is not None:
        x = as_points(x, n)
    return spec(x)


def antisymmetrize(f):
    """Return the field x -> f(x) - f(x_*)."""
    return Antisymmetrized(f)


def random_nonneg_antisym(seed, count, p):
    """Seeded antisymmetric field, nonnegative on the half-space {x_1 > 0}."""
    return MirrorBumpSum(seed=seed, count=count, n=p.n)


# --- norms -----------------------------------------------------------------

def anorm(spec, p, q):
    """Half-space weighted L^1 norm: integral over {x_1>0} of x_1 |u| / (1 + |x|^(n+2s+2)).

    Converges iff the declared growth exponent is below 2s + 1.
    """
    from . import quad

    meta = spec.meta
    if meta.decay_exponent >= 2.0 * p.s + 1.0:
        raise RejectionError(
            f"half-space norm divergent: declared growth exponent {meta.decay_exponent} "
            f">= 2s + 1 = {2.0 * p.s + 1.0}"
        )

    def integrand(y):
        r = np.linalg.norm(y, axis=-1)
        return y[..., 0] * np.abs(spec(y)) / (1.0 + r ** (p.n + 2.0 * p.s + 2.0))

    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent + 1.0 - (p.n + 2.0 * p.s + 2.0),
        cutoff_radius=meta.support_radius,
    )
    res = quad.integrate_halfspace_weighted(integrand, p, q, tail=tail)
    return res.value


def lsnorm(spec, p, q):
    """Full-space weighted L^1 norm: integral of |u| / (1 + |x|^(n+2s)).

    Converges iff the declared growth exponent is below 2s; Monomial_x1
    with s <= 1/2 is rejected here, which is exactly the case the
    half-space norm exists to handle.
    """
    from . import quad

    meta = spec.meta
    if meta.decay_exponent >= 2.0 * p.s:
        raise RejectionError(
            f"full-space norm divergent: declared growth exponent {meta.decay_exponent} "
            f">= 2s = {2.0 * p.s}"
        )

    def integrand(y):
        r = np.linalg.norm(y, axis=-1)
        return np.abs(spec(y)) / (1.0 + r ** (p.n + 2.0 * p.s))

    tail = quad.TailModel(
        decay_exponent=meta.decay_exponent - (p.n + 2.0 * p.s),
        cutoff_radius=meta.support_radius,
    )
    res = quad.integrate_fullspace(integrand, p, q, tail=tail)
    return res.value


# --- JSON serialization -----------------------------------------------------

_FAMILIES = {
    "monomial_x1": Monomial_x1,
    "zero": Zero,
    "gaussian_bump": GaussianBump,
    "antisym_gaussian_bump": AntisymGaussianBump,
    "mirror_bump_sum": MirrorBumpSum,
    "cutoff_zeta1": CutoffZeta1,
    "cutoff_zeta2": CutoffZeta2,
    "odd_plateau": OddPlateau,
    "odd_cubic_bump": OddCubicBump,
    "odd_holder_bump": OddHolderBump,
    "exterior_restriction": ExteriorRestriction,
    "antisymmetrized": Antisymmetrized,
    "scaled": Scaled,
    "shifted": Shifted,
}


def _to_dict(spec):
    m = spec.meta
    return {
        "family": spec.family,
        "params": spec._params_json(),
        "meta": {
            "antisymmetric": m.antisymmetric,
            "decay_exponent": None if math.isinf(m.decay_exponent) else m.decay_exponent,
            "support_radius": m.support_radius,
            "smoothness": m.smoothness,
        },
    }


def _from_dict(d):
    family = d["family"]
    if family not in _FAMILIES:
        raise DomainError(f"unknown field family {family!r}")
    cls = _FAMILIES[family]
    params = dict(d.get("params", {}))
    if "center" in params:
        params["center"] = tuple(params["center"])
    if "offset" in params:
        params["offset"] = tuple(params["offset"])
    if "inner" in params:
        params["inner"] = _from_dict(params["inner"])
    return cls(**params)


def field_to_json(spec):
    return json.dumps(_to_dict(spec), sort_keys=True)


def field_from_json(text):
    return _from_dict(json.loads(text))
