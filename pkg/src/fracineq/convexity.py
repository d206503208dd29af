"""Closed-form test functions and empirical certifiers for s-convexity
(second sense) and m-convexity.

Certification is falsification only: a ``holds`` verdict means no
counterexample was found on the tensor grid plus the random samples, not
that the property is proved.

FuncSpec string grammar (``parse_funcspec``)::

    power:p               x**p                domain [0, inf)
    abs-power:p[,c]       |x - c|**p          domain R, c defaults to 0
    affine:c0,c1          c0 + c1 x           domain R
    quadratic:c0,c1,c2    c0 + c1 x + c2 x^2  domain R
    exp:k                 exp(k x)            domain R
    poly:c0,c1,...,cn     sum c_i x^i         domain R  (alias: custom-polynomial)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .fracint import Interval
from .specfun import DomainError

__all__ = [
    "ConvexityVerdict",
    "FuncSpec",
    "Witness",
    "abs_derivative_power",
    "check_convex",
    "check_m_convex",
    "check_s_convex",
    "parse_funcspec",
]

DEFAULT_GRID_N = 33
DEFAULT_RANDOM = 10_000

_ARITY = {
    "power": (1, 1),
    "abs-power": (1, 2),
    "affine": (2, 2),
    "quadratic": (3, 3),
    "exp": (1, 1),
    "poly": (1, 64),
}


def _fmt(v: float) -> str:
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


@dataclass(frozen=True)
class FuncSpec:
    """A closed-form real function with analytic derivative.

    Instances are callable on floats and numpy arrays.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in _ARITY:
            raise ValueError(f"unknown function family {self.family!r}")
        lo, hi = _ARITY[self.family]
        if not lo <= len(self.params) <= hi:
            raise ValueError(f"{self.family} takes {lo}..{hi} parameters, got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError("parameters must be finite")
        if self.family in ("power", "abs-power") and self.params[0] < 0:
            raise ValueError(f"{self.family} exponent must be >= 0")

    # --- identity ---------------------------------------------------------
    def __str__(self) -> str:
        params = self.params
        if self.family == "abs-power" and len(params) == 2 and params[1] == 0.0:
            params = params[:1]
        return f"{self.family}:" + ",".join(_fmt(p) for p in params)

    @property
    def coeffs(self) -> np.ndarray:
        """Ascending polynomial coefficients (polynomial families only)."""
        if self.family == "affine" or self.family == "quadratic" or self.family == "poly":
            return np.array(self.params, dtype=float)
        raise AttributeError(f"{self.family} is not a polynomial family")

    @property
    def is_polynomial(self) -> bool:
        return self.family in ("affine", "quadratic", "poly")

    @property
    def domain(self) -> tuple[float, float]:
        if self.family == "power":
            return (0.0, math.inf)
        return (-math.inf, math.inf)

    @property
    def has_derivative(self) -> bool:
        return True

    def covers(self, a: float, b: float) -> bool:
        lo, hi = self.domain
        return lo <= a and b <= hi

    # --- evaluation -------------------------------------------------------
    def _eval(self, x: np.ndarray) -> np.ndarray:
        fam, p = self.family, self.params
        if fam == "power":
            return np.power(x, p[0]) if p[0] != 0 else np.ones_like(x)
        if fam == "abs-power":
            c = p[1] if len(p) > 1 else 0.0
            return np.power(np.abs(x - c), p[0]) if p[0] != 0 else np.ones_like(x)
        if fam == "exp":
            return np.exp(p[0] * x)
        return P.polyval(x, self.coeffs)

    def _deriv(self, x: np.ndarray) -> np.ndarray:
        fam, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore"):
            if fam == "power":
                if p[0] == 0:
                    return np.zeros_like(x)
                if p[0] == 1:
                    return np.ones_like(x)
                return p[0] * np.power(x, p[0] - 1.0)
            if fam == "abs-power":
                c = p[1] if len(p) > 1 else 0.0
                if p[0] == 0:
                    return np.zeros_like(x)
                d = x - c
                if p[0] == 1:
                    return np.sign(d)
                return p[0] * np.power(np.abs(d), p[0] - 1.0) * np.sign(d)
            if fam == "exp":
                return p[0] * np.exp(p[0] * x)
            return P.polyval(x, P.polyder(self.coeffs))

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._eval(arr)
        return float(out) if out.ndim == 0 else out

    def derivative(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._deriv(arr)
        return float(out) if out.ndim == 0 else out

    # --- analytic facts used to pick admissible pairings --------------------
    def derivative_finite_on(self, a: float, b: float) -> bool:
        """True when f' is bounded on [a, b] (kinks are allowed)."""
        fam, p = self.family, self.params
        if fam == "power":
            return p[0] == 0 or p[0] >= 1 or a > 0
        if fam == "abs-power":
            c = p[1] if len(p) > 1 else 0.0
            return p[0] == 0 or p[0] >= 1 or not (a <= c <= b)
        return True

    def _critical_points(self, a: float, b: float) -> list[float]:
        pts = [a, b]
        if self.is_polynomial and len(self.params) > 1:
            for r in P.polyroots(P.polyder(self.coeffs)):
                if abs(r.imag) < 1e-12 and a < r.real < b:
                    pts.append(float(r.real))
        elif self.family == "abs-power":
            c = self.params[1] if len(self.params) > 1 else 0.0
            if a < c < b:
                pts.append(c)
        return pts

    def min_on(self, a: float, b: float) -> float:
        return min(self(x) for x in self._critical_points(a, b))

    def convex_label(self, a: float, b: float) -> Optional[bool]:
        """Known ordinary convexity on [a, b]; None when not decidable here."""
        fam, p = self.family, self.params
        if fam in ("power", "abs-power"):
            if p[0] == 0 or p[0] >= 1:
                return True
            return False
        if fam == "exp":
            return True
        if fam == "affine":
            return True
        if fam == "quadratic":
            return p[2] >= 0
        second = P.polyder(self.coeffs, 2)
        if second.size == 0:
            return True
        pts = [a, b] + [
            float(r.real)
            for r in (P.polyroots(P.polyder(second)) if second.size > 1 else [])
            if abs(r.imag) < 1e-12 and a < r.real < b
        ]
        return min(P.polyval(x, second) for x in pts) >= 0

    def s_convex_label(self, s: float, a: float, b: float) -> Optional[bool]:
        """Known s-convexity (second sense) on [a, b] with a >= 0."""
        if s == 1.0:
            return self.convex_label(a, b)
        if self.min_on(a, b) < 0:
            # f(x) <= (lam**s + (1-lam)**s) f(x) fails wherever f(x) < 0
            return False
        if self.convex_label(a, b):
            return True
        if self.family == "power":
            if self.params[0] >= s:
                return True  # subadditivity of x**p and lam**p <= lam**s
            if a == 0.0:
                return False
        return None

    def m_convex_label(self, m: float, b: float) -> Optional[bool]:
        """Known m-convexity on [0, b]."""
        if m == 1.0:
            return self.convex_label(0.0, b)
        if self(0.0) > 0:
            return False  # t = 0, y = 0 gives f(0) <= m f(0)
        if self.convex_label(0.0, b):
            return True  # f(my) <= m f(y) + (1-m) f(0) <= m f(y)
        if self.family == "power" and 0 < self.params[0] < 1:
            return False  # (m y)**p > m y**p
        return None


def parse_funcspec(text: str) -> FuncSpec:
    """Parse ``"family:p1,p2,..."`` into a FuncSpec (see module docstring)."""
    if isinstance(text, FuncSpec):
        return text
    family, sep, rest = str(text).strip().partition(":")
    family = family.strip().lower()
    if family == "custom-polynomial":
        family = "poly"
    if not sep or not rest.strip():
        raise ValueError(f"malformed function spec {text!r}; expected 'family:params'")
    try:
        params = tuple(float(tok) for tok in rest.split(","))
    except ValueError as exc:
        raise ValueError(f"malformed parameters in function spec {text!r}") from exc
    if family == "abs-power" and len(params) == 1:
        params = params + (0.0,)
    return FuncSpec(family, params)


class _AbsDerivativePower:
    """x -> |f'(x)|**q, picklable and vectorized."""

    def __init__(self, f: FuncSpec, q: float):
        self.f = f
        self.q = q

    def __call__(self, x):
        return np.abs(self.f.derivative(x)) ** self.q

    def __repr__(self):
        return f"|{self.f}'|^{_fmt(self.q)}"


def abs_derivative_power(f: FuncSpec, q: float) -> Callable:
    return _AbsDerivativePower(f, q)


# --- certifiers -------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    t: float
    violation: float


@dataclass(frozen=True)
class ConvexityVerdict:
    holds: bool
    witness: Optional[Witness]
    samples_checked: int

    def describe(self, grid_n: int, n_random: int) -> str:
        budget = f"grid {grid_n}³ + {n_random} random"
        if self.holds:
            return f"holds ({budget})"
        w = self.witness
        return (
            f"violated at x={w.x:.17g}, y={w.y:.17g}, t={w.t:.17g}, "
            f"violation {w.violation:.6g} ({budget})"
        )


Func = Union[FuncSpec, Callable]


def violation_tolerance(rhs):
    return 1e-12 + 1e-9 * np.abs(rhs)


def _check_domain(f: Func, domain: Interval) -> None:
    if domain.a < 0:
        raise DomainError(f"certifier domain must lie in [0, inf), got [{domain.a}, {domain.b}]")
    if isinstance(f, FuncSpec) and not f.covers(domain.a, domain.b):
        raise DomainError(f"{f} is not defined on [{domain.a}, {domain.b}]")


def _samples(domain: Interval, grid_n: int, n_random: int, seed: int):
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    pts = np.linspace(domain.a, domain.b, grid_n)
    ts = np.linspace(0.0, 1.0, grid_n)
    X, Y, T = np.meshgrid(pts, pts, ts, indexing="ij")
    # counter-based generator: the stream depends on the seed only
    rng = np.random.Generator(np.random.Philox(seed))
    rx = rng.uniform(domain.a, domain.b, n_random)
    ry = rng.uniform(domain.a, domain.b, n_random)
    rt = rng.uniform(0.0, 1.0, n_random)
    return (
        np.concatenate([X.ravel(), rx]),
        np.concatenate([Y.ravel(), ry]),
        np.concatenate([T.ravel(), rt]),
    )


def _verdict(lhs, rhs, x, y, t) -> ConvexityVerdict:
    with np.errstate(invalid="ignore"):
        gap = lhs - rhs
    if not np.all(np.isfinite(gap)):
        raise DomainError("function evaluation produced non-finite values on the certifier grid")
    bad = gap > violation_tolerance(rhs)
    if not bad.any():
        return ConvexityVerdict(True, None, int(gap.size))
    masked = np.where(bad, gap, -np.inf)
    i = int(np.argmax(masked))
    return ConvexityVerdict(False, Witness(float(x[i]), float(y[i]), float(t[i]), float(gap[i])), int(gap.size))


def check_convex(
    f: Func, domain: Interval, grid_n: int = DEFAULT_GRID_N, seed: int = 0, n_random: int = DEFAULT_RANDOM
) -> ConvexityVerdict:
    """Ordinary convexity: f(t x + (1-t) y) <= t f(x) + (1-t) f(y)."""
    _check_domain(f, domain)
    x, y, t = _samples(domain, grid_n, n_random, seed)
    z = np.clip(t * x + (1.0 - t) * y, domain.a, domain.b)
    return _verdict(f(z), t * f(x) + (1.0 - t) * f(y), x, y, t)


def check_s_convex(
    f: Func,
    s: float,
    domain: Interval,
    grid_n: int = DEFAULT_GRID_N,
    seed: int = 0,
    n_random: int = DEFAULT_RANDOM,
) -> ConvexityVerdict:
    """s-convexity in the second sense on ``domain`` (which must lie in [0, inf)):
    f(t x + (1-t) y) <= t**s f(x) + (1-t)**s f(y)."""
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s!r}")
    _check_domain(f, domain)
    x, y, t = _samples(domain, grid_n, n_random, seed)
    z = np.clip(t * x + (1.0 - t) * y, domain.a, domain.b)
    return _verdict(f(z), t**s * f(x) + (1.0 - t) ** s * f(y), x, y, t)


def check_m_convex(
    f: Func,
    m: float,
    domain: Interval,
    grid_n: int = DEFAULT_GRID_N,
    seed: int = 0,
    n_random: int = DEFAULT_RANDOM,
) -> ConvexityVerdict:
    """m-convexity on ``domain = [0, b]``: f(t x + m(1-t) y) <= t f(x) + m(1-t) f(y)."""
    if not 0.0 < m <= 1.0:
        raise DomainError(f"m must lie in (0, 1], got {m!r}")
    if domain.a != 0.0:
        raise DomainError("m-convexity is defined on intervals [0, b]")
    _check_domain(f, domain)
    x, y, t = _samples(domain, grid_n, n_random, seed)
    z = np.clip(t * x + m * (1.0 - t) * y, domain.a, domain.b)
    return _verdict(f(z), t * f(x) + m * (1.0 - t) * f(y), x, y, t)
