"""Riemann-Liouville fractional integrals.

    J_{a+}^alpha f(x) = 1/Gamma(alpha) int_a^x (x-t)**(alpha-1) f(t) dt,  x > a
    J_{b-}^alpha f(x) = 1/Gamma(alpha) int_x^b (t-x)**(alpha-1) f(t) dt,  x < b

Order zero is the identity and is returned without quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .quadrature import DEFAULT_TOL, Tolerance, integrate_singular
from .specfun import DomainError, gamma_fn

__all__ = ["Interval", "rl_left", "rl_right"]


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"invalid interval [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"fractional order must be positive, got {alpha!r}")
    return alpha


def rl_left(f: Callable, a: float, alpha: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Left-sided integral J_{a+}^alpha f evaluated at ``x > a``."""
    alpha = _check_order(alpha)
    if alpha == 0.0:
        return float(f(x))
    if not x > a:
        raise DomainError(f"rl_left needs x > a, got x={x}, a={a}")
    res = integrate_singular(f, a, x, alpha, "left-kernel", tol)
    return res.value / gamma_fn(alpha)


def rl_right(f: Callable, b: float, alpha: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Right-sided integral J_{b-}^alpha f evaluated at ``x < b``."""
    alpha = _check_order(alpha)
    if alpha == 0.0:
        return float(f(x))
    if not x < b:
        raise DomainError(f"rl_right needs x < b, got x={x}, b={b}")
    res = integrate_singular(f, x, b, alpha, "right-kernel", tol)
    return res.value / gamma_fn(alpha)
