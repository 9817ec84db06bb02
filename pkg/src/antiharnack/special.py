"""Normalisation constants of the fractional Laplacian and the closed forms relating them.

All four constants below are elementary combinations of the gamma function.
They satisfy the identity

    c_ns(p) * halfspace_integral_closed(p) == tilde_c_ns(p)

for every admissible (n, s), and tilde_c_ns does not depend on n.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Params",
    "gamma_fn",
    "c_ns",
    "c_1s",
    "gamma_ns",
    "tilde_c_ns",
    "halfspace_integral_closed",
]


@dataclass(frozen=True)
class Params:
    """Dimension n and fractional order s, the global problem context."""

    n: int
    s: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise DomainError(f"dimension n must be 1, 2 or 3, got {self.n!r}")
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"fractional order s must lie strictly in (0, 1), got {self.s!r}")


def gamma_fn(x):
    """Gamma function for positive real arguments.

    Backed by the C library implementation (double precision, well beyond
    the 12 significant digits required here).
    """
    if x <= 0.0:
        raise DomainError(f"gamma_fn requires a positive argument, got {x!r}")
    return math.gamma(x)


def c_ns(p):
    """Normalisation constant of the singular-integral fractional Laplacian.

    c_{n,s} = s * pi^(-n/2) * 4^s * Gamma((n+2s)/2) / Gamma(1-s)
    """
    n, s = p.n, p.s
    return s * math.pi ** (-n / 2.0) * 4.0**s * gamma_fn((n + 2.0 * s) / 2.0) / gamma_fn(1.0 - s)


def c_1s(s):
    """c_{1,s}: the n = 1 normalisation constant, used by the half-space zero-order term."""
    return c_ns(Params(1, s))


def gamma_ns(p):
    """Normalisation constant of the mean-value / Poisson kernel formulas.

    gamma_{n,s} = sin(pi*s) * Gamma(n/2) / pi^(n/2 + 1)
    """
    n, s = p.n, p.s
    return math.sin(math.pi * s) * gamma_fn(n / 2.0) / math.pi ** (n / 2.0 + 1.0)


def tilde_c_ns(p):
    """c_{1,s} / (2s), evaluated through its n-free closed form.

    Equals 2^(2s-1) * Gamma((1+2s)/2) / (sqrt(pi) * Gamma(1-s)); in
    particular the value is independent of n.
    """
    s = p.s
    return 2.0 ** (2.0 * s - 1.0) * gamma_fn((1.0 + 2.0 * s) / 2.0) / (math.sqrt(math.pi) * gamma_fn(1.0 - s))


def halfspace_integral_closed(p):
    """Closed form of the half-space integral of |e_1 + z|^-(n+2s).

    integral over {z_1 > 0} of |e_1 + z|^-(n+2s) dz
        = pi^((n-1)/2) * Gamma((1+2s)/2) / (2s * Gamma((n+2s)/2))
    """
    n, s = p.n, p.s
    return (
        math.pi ** ((n - 1.0) / 2.0)
        * gamma_fn((1.0 + 2.0 * s) / 2.0)
        / (2.0 * s * gamma_fn((n + 2.0 * s) / 2.0))
    )
