"""Evaluators for Hermite-Hadamard type inequalities and the fractional
trapezoid identity.

Every evaluator returns an :class:`InequalityReport` holding all terms of
the chain.  Where the printed form of a bound differs from what its
derivation actually yields, both right-hand sides are computed and stored;
``variant`` only selects which one drives the verdict:

``as-stated``
    the bound as printed.
``proof-consistent``
    the bound obtained by carrying the derivation through without dropping
    factors.

Theorem ids::

    E1   classical Hermite-Hadamard, convex f
    e13  Hermite-Hadamard for s-convex f (Dragomir-Fitzpatrick)
    e14  trapezoid bound with |f'|^q s-convex (Kirmaci et al.)
    T1   fractional Hermite-Hadamard, s-convex f
    L1   fractional trapezoid identity
    T2   fractional trapezoid bound, |f'|^q s-convex
    h1   fractional Hermite-Hadamard, m-convex f
    kk   Hermite-Hadamard for m-convex f (h1 at alpha = 1 is twice this chain)
    h2   bound on the symmetrised m-convex functional F(x, y)_(t)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Union

import numpy as np

from .convexity import FuncSpec, parse_funcspec
from .fracint import Interval, rl_left, rl_right
from .quadrature import DEFAULT_TOL, Tolerance, integrate, integrate_singular
from .specfun import DomainError, beta_fn, gamma_fn, inc_beta

__all__ = [
    "AS_STATED",
    "PROOF_CONSISTENT",
    "VARIANTS",
    "CapabilityError",
    "InequalityReport",
    "THEOREMS",
    "abs_kernel_difference_integral",
    "eval_frac_hh_mconvex",
    "eval_frac_hh_sconvex",
    "eval_frac_trapezoid_sconvex",
    "eval_hh_classical",
    "eval_hh_mconvex_classical",
    "eval_hh_sconvex",
    "eval_kirmaci",
    "eval_lemma1_identity",
    "eval_mconvex_F_bound",
    "fractional_mean",
    "trapezoid_sconvex_constant",
]

AS_STATED = "as-stated"
PROOF_CONSISTENT = "proof-consistent"
VARIANTS = (AS_STATED, PROOF_CONSISTENT)

HOLDS = "holds"
VIOLATED = "violated"
EQUALITY = "equality-within-tol"

TOL_FACTOR = 1e-8


class CapabilityError(TypeError):
    """The supplied function lacks something the evaluator needs (e.g. f')."""


@dataclass
class InequalityReport:
    """All terms of one inequality (or identity) evaluation.

    ``chains`` maps each variant to the ordered term names forming the chain
    ``t0 <= t1 [<= t2]``.  Margins are ``later - earlier``; a chain with two
    links has margins ``lower`` and ``upper``, a single link only ``upper``.
    Identities (``kind="identity"``) instead report ``residual``.
    """

    theorem_id: str
    inputs: dict
    terms: dict
    chains: dict
    variant: str = AS_STATED
    kind: str = "chain"
    flags: dict = field(default_factory=dict)

    @property
    def tol_used(self) -> float:
        scale = max([1.0] + [abs(v) for v in self.terms.values()])
        return TOL_FACTOR * scale

    @property
    def residual(self) -> float:
        if self.kind != "identity":
            raise AttributeError("only identity reports carry a residual")
        return abs(self.terms["lhs_identity"] - self.terms["rhs_identity"])

    def margins_for(self, variant: str) -> dict:
        if self.kind == "identity":
            return {"residual": self.residual}
        names = self.chains[variant]
        vals = [self.terms[n] for n in names]
        diffs = [later - earlier for earlier, later in zip(vals, vals[1:])]
        keys = ("upper",) if len(diffs) == 1 else ("lower", "upper")
        return dict(zip(keys, diffs))

    @property
    def margins(self) -> dict:
        return self.margins_for(self.variant)

    @property
    def verdict(self) -> str:
        tol = self.tol_used
        if self.kind == "identity":
            return EQUALITY if self.residual <= tol else VIOLATED
        margins = list(self.margins.values())
        if any(mg < -tol for mg in margins):
            return VIOLATED
        if all(abs(mg) <= tol for mg in margins):
            return EQUALITY
        return HOLDS

    def with_variant(self, variant: str) -> "InequalityReport":
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        return replace(self, variant=variant)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["chains"] = {k: list(v) for k, v in self.chains.items()}
        d["margins"] = {v: self.margins_for(v) for v in self.chains} if self.kind == "chain" else {
            "residual": self.residual
        }
        d["verdict"] = self.verdict
        d["tol_used"] = self.tol_used
        return d


Func = Union[FuncSpec, str, Callable]


def _fn(f: Func):
    return parse_funcspec(f) if isinstance(f, str) else f


def _deriv(f) -> Callable:
    d = getattr(f, "derivative", None)
    if d is None or not getattr(f, "has_derivative", True):
        raise CapabilityError(f"{f!r} has no analytic derivative")
    return d


def _interval(a: float, b: float) -> tuple[float, float]:
    Interval(float(a), float(b))
    return float(a), float(b)


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return variant


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return alpha


def _check_unit(name: str, value: float, closed: bool = True) -> float:
    value = float(value)
    ok = 0.0 < value <= 1.0 if closed else 0.0 < value < 1.0
    if not ok:
        raise DomainError(f"{name} must lie in (0, 1{']' if closed else ')'}, got {value!r}")
    return value


def _check_q(q: float) -> float:
    q = float(q)
    if not q >= 1.0:
        raise DomainError(f"q must be >= 1, got {q!r}")
    return q


def _positive_on(f, lo: float, hi: float) -> bool:
    xs = np.linspace(lo, hi, 257)
    return bool(np.min(np.asarray(f(xs), dtype=float)) > 0)


def _chain(*names: str, proof_rhs: str | None = None) -> dict:
    stated = tuple(names)
    proof = stated if proof_rhs is None else stated[:-1] + (proof_rhs,)
    return {AS_STATED: stated, PROOF_CONSISTENT: proof}


def mean_value(f: Func, a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> float:
    f = _fn(f)
    return integrate(f, a, b, tol).value / (b - a)


def fractional_mean(f: Func, a: float, b: float, alpha: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Gamma(alpha+1)/(b-a)**alpha * [J_{a+} f(b) + J_{b-} f(a)] / 2."""
    f = _fn(f)
    total = rl_left(f, a, alpha, b, tol) + rl_right(f, b, alpha, a, tol)
    return gamma_fn(alpha + 1.0) / (b - a) ** alpha * total / 2.0


def abs_kernel_difference_integral(alpha: float) -> float:
    """Closed form of int_0^1 |(1-t)**alpha - t**alpha| dt."""
    alpha = _check_alpha(alpha)
    return 2.0 / (alpha + 1.0) * (1.0 - 2.0**-alpha)


def trapezoid_sconvex_constant(s: float, alpha: float) -> float:
    """int_0^1 |(1-t)**alpha - t**alpha| t**s dt written through incomplete Betas:

    B(1/2; s+1, alpha+1) - B(1/2; alpha+1, s+1) + (2**(alpha+s) - 1) / ((alpha+s+1) 2**(alpha+s))
    """
    e = alpha + s
    return (
        inc_beta(0.5, s + 1.0, alpha + 1.0)
        - inc_beta(0.5, alpha + 1.0, s + 1.0)
        + (2.0**e - 1.0) / ((e + 1.0) * 2.0**e)
    )


# --- classical inequalities ------------------------------------------------

def eval_hh_classical(f: Func, a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> InequalityReport:
    """f((a+b)/2) <= mean of f on [a, b] <= (f(a) + f(b)) / 2."""
    f = _fn(f)
    a, b = _interval(a, b)
    terms = {
        "lhs": f((a + b) / 2.0),
        "mid": mean_value(f, a, b, tol),
        "rhs": (f(a) + f(b)) / 2.0,
    }
    return InequalityReport("E1", {"f": str(f), "a": a, "b": b}, terms, _chain("lhs", "mid", "rhs"))


def eval_hh_sconvex(f: Func, a: float, b: float, s: float, tol: Tolerance = DEFAULT_TOL) -> InequalityReport:
    """2**(s-1) f((a+b)/2) <= mean <= (f(a) + f(b)) / (s + 1).

    The upper constant 1/(s+1) is attained by f(x) = x**s on [0, 1].
    """
    f = _fn(f)
    a, b = _interval(a, b)
    s = _check_unit("s", s)
    terms = {
        "lhs": 2.0 ** (s - 1.0) * f((a + b) / 2.0),
        "mid": mean_value(f, a, b, tol),
        "rhs": (f(a) + f(b)) / (s + 1.0),
    }
    return InequalityReport("e13", {"f": str(f), "a": a, "b": b, "s": s}, terms, _chain("lhs", "mid", "rhs"))


def eval_kirmaci(
    f: Func, a: float, b: float, s: float, q: float, tol: Tolerance = DEFAULT_TOL
) -> InequalityReport:
    f = _fn(f)
    df = _deriv(f)
    a, b = _interval(a, b)
    s = _check_unit("s", s)
    q = _check_q(q)
    gap = abs((f(a) + f(b)) / 2.0 - mean_value(f, a, b, tol))
    const = (s + 0.5**s) / ((s + 1.0) * (s + 2.0))
    ends = (abs(df(a)) ** q + abs(df(b)) ** q) ** (1.0 / q)
    rhs = (b - a) / 2.0 * 0.5 ** ((q - 1.0) / q) * const ** (1.0 / q) * ends
    return InequalityReport(
        "e14", {"f": str(f), "a": a, "b": b, "s": s, "q": q}, {"lhs": gap, "rhs": rhs}, _chain("lhs", "rhs")
    )


# --- fractional, s-convex ----------------------------------------------------

def eval_frac_hh_sconvex(
    f: Func,
    a: float,
    b: float,
    s: float,
    alpha: float,
    variant: str = AS_STATED,
    tol: Tolerance = DEFAULT_TOL,
) -> InequalityReport:
    """2**(s-1) f((a+b)/2) <= fractional_mean <= K (f(a) + f(b)) / 2 with

    as-stated         K = 1/(alpha+s) + B(alpha, s+1)
    proof-consistent  K = alpha * (1/(alpha+s) + B(alpha, s+1))

    (the second is what integrating t**(alpha-1) [t**s + (1-t)**s] gives
    after normalising by Gamma(alpha+1)).
    """
    f = _fn(f)
    a, b = _interval(a, b)
    s = _check_unit("s", s)
    alpha = _check_alpha(alpha)
    variant = _check_variant(variant)
    k = 1.0 / (alpha + s) + beta_fn(alpha, s + 1.0)
    ends = (f(a) + f(b)) / 2.0
    terms = {
        "lhs": 2.0 ** (s - 1.0) * f((a + b) / 2.0),
        "mid": fractional_mean(f, a, b, alpha, tol),
        "rhs_as_stated": k * ends,
        "rhs_proof_consistent": alpha * k * ends,
    }
    return InequalityReport(
        "T1",
        {"f": str(f), "a": a, "b": b, "s": s, "alpha": alpha},
        terms,
        _chain("lhs", "mid", "rhs_as_stated", proof_rhs="rhs_proof_consistent"),
        variant,
        flags={"positive": _positive_on(f, a, b)},
    )


def eval_lemma1_identity(
    f: Func, a: float, b: float, alpha: float, tol: Tolerance = DEFAULT_TOL
) -> InequalityReport:
    """(f(a)+f(b))/2 - fractional_mean
    == (b-a)/2 * int_0^1 [(1-t)**alpha - t**alpha] f'(t a + (1-t) b) dt."""
    f = _fn(f)
    df = _deriv(f)
    a, b = _interval(a, b)
    alpha = _check_alpha(alpha)
    lhs = (f(a) + f(b)) / 2.0 - fractional_mean(f, a, b, alpha, tol)

    def integrand(t):
        return ((1.0 - t) ** alpha - t**alpha) * df(t * a + (1.0 - t) * b)

    rhs = (b - a) / 2.0 * integrate(integrand, 0.0, 1.0, tol).value
    return InequalityReport(
        "L1",
        {"f": str(f), "a": a, "b": b, "alpha": alpha},
        {"lhs_identity": lhs, "rhs_identity": rhs},
        {AS_STATED: ("lhs_identity", "rhs_identity"), PROOF_CONSISTENT: ("lhs_identity", "rhs_identity")},
        kind="identity",
    )


def eval_frac_trapezoid_sconvex(
    f: Func,
    a: float,
    b: float,
    s: float,
    q: float,
    alpha: float,
    variant: str = AS_STATED,
    tol: Tolerance = DEFAULT_TOL,
) -> InequalityReport:
    """|(f(a)+f(b))/2 - fractional_mean| <= (b-a)/2 C**((q-1)/q) A**e D

    with C = abs_kernel_difference_integral(alpha),
    A = trapezoid_sconvex_constant(s, alpha), D = (|f'(a)|^q + |f'(b)|^q)^(1/q),
    and e = 1 as printed, e = 1/q as produced by the Hoelder step.
    """
    f = _fn(f)
    df = _deriv(f)
    a, b = _interval(a, b)
    s = _check_unit("s", s)
    q = _check_q(q)
    alpha = _check_alpha(alpha)
    variant = _check_variant(variant)
    gap = abs((f(a) + f(b)) / 2.0 - fractional_mean(f, a, b, alpha, tol))
    c = abs_kernel_difference_integral(alpha)
    big_a = trapezoid_sconvex_constant(s, alpha)
    ends = (abs(df(a)) ** q + abs(df(b)) ** q) ** (1.0 / q)
    head = (b - a) / 2.0 * c ** ((q - 1.0) / q)
    terms = {
        "lhs": gap,
        "rhs_as_stated": head * big_a * ends,
        "rhs_proof_consistent": head * big_a ** (1.0 / q) * ends,
    }
    return InequalityReport(
        "T2",
        {"f": str(f), "a": a, "b": b, "s": s, "q": q, "alpha": alpha},
        terms,
        _chain("lhs", "rhs_as_stated", proof_rhs="rhs_proof_consistent"),
        variant,
    )


# --- m-convex ---------------------------------------------------------------

def _check_mconvex_domain(f, a: float, b: float, m: float) -> None:
    if a < 0:
        raise DomainError("m-convex bounds need 0 <= a")
    if isinstance(f, FuncSpec) and not f.covers(0.0, max(b, b / m)):
        raise DomainError(f"{f} is not defined on [0, {max(b, b / m)}]")


def eval_frac_hh_mconvex(
    f: Func,
    a: float,
    b: float,
    m: float,
    alpha: float,
    variant: str = AS_STATED,
    tol: Tolerance = DEFAULT_TOL,
) -> InequalityReport:
    """2/Gamma(alpha+1) f(m(a+b)/2)
        <= J_{(ma)+} f(mb) / (mb-ma)**alpha + m J_{b-} f(a) / (b-a)**alpha
        <= R,   R = [f(ma) + m^2 f(b/m)]/(alpha+1) + m [f(a)+f(b)]/(alpha(alpha+1)).

    The derivation bounds Gamma(alpha) times the middle term by R, so the
    proof-consistent right side is R / Gamma(alpha).
    """
    f = _fn(f)
    a, b = _interval(a, b)
    m = _check_unit("m", m)
    alpha = _check_alpha(alpha)
    variant = _check_variant(variant)
    _check_mconvex_domain(f, a, b, m)
    ma, mb = m * a, m * b
    mid = rl_left(f, ma, alpha, mb, tol) / (mb - ma) ** alpha + m * rl_right(f, b, alpha, a, tol) / (b - a) ** alpha
    r = (f(ma) + m * m * f(b / m)) / (alpha + 1.0) + m * (f(a) + f(b)) / (alpha * (alpha + 1.0))
    terms = {
        "lhs": 2.0 / gamma_fn(alpha + 1.0) * f(m * (a + b) / 2.0),
        "mid": mid,
        "rhs_as_stated": r,
        "rhs_proof_consistent": r / gamma_fn(alpha),
    }
    return InequalityReport(
        "h1",
        {"f": str(f), "a": a, "b": b, "m": m, "alpha": alpha},
        terms,
        _chain("lhs", "mid", "rhs_as_stated", proof_rhs="rhs_proof_consistent"),
        variant,
        flags={"positive": _positive_on(f, ma, max(b, b / m))},
    )


def eval_hh_mconvex_classical(
    f: Func, a: float, b: float, m: float, tol: Tolerance = DEFAULT_TOL
) -> InequalityReport:
    """f(m(a+b)/2) <= mean of (f(mx) + m f(x))/2 on [a, b]
                   <= [(f(ma) + m^2 f(b/m))/2 + m (f(a)+f(b))/2] / 2."""
    f = _fn(f)
    a, b = _interval(a, b)
    m = _check_unit("m", m)
    _check_mconvex_domain(f, a, b, m)

    def sym(x):
        return (f(m * x) + m * f(x)) / 2.0

    terms = {
        "lhs": f(m * (a + b) / 2.0),
        "mid": integrate(sym, a, b, tol).value / (b - a),
        "rhs": 0.5 * ((f(m * a) + m * m * f(b / m)) / 2.0 + m * (f(a) + f(b)) / 2.0),
    }
    return InequalityReport("kk", {"f": str(f), "a": a, "b": b, "m": m}, terms, _chain("lhs", "mid", "rhs"))


def eval_mconvex_F_bound(
    f: Func, a: float, b: float, m: float, alpha: float, tol: Tolerance = DEFAULT_TOL
) -> InequalityReport:
    """With F(x, y)_(t) = [f(t x + m(1-t) y) + f((1-t) x + m t y)] / 2 and
    y = (a+b)/2:

        (b-a)**-alpha int_a^b (b-u)**(alpha-1) F(u, y)_((b-u)/(b-a)) du
            <= Gamma(alpha) J_{a+} f(b) / (2 (b-a)**alpha) + m f(y) / (2 alpha)
    """
    f = _fn(f)
    a, b = _interval(a, b)
    m = _check_unit("m", m)
    alpha = _check_alpha(alpha)
    _check_mconvex_domain(f, a, b, m)
    y = (a + b) / 2.0
    width = b - a

    def functional(u):
        t = (b - u) / width
        return 0.5 * (f(t * u + m * (1.0 - t) * y) + f((1.0 - t) * u + m * t * y))

    lhs = integrate_singular(functional, a, b, alpha, "left-kernel", tol).value / width**alpha
    rhs = gamma_fn(alpha) * rl_left(f, a, alpha, b, tol) / (2.0 * width**alpha) + m * f(y) / (2.0 * alpha)
    return InequalityReport(
        "h2",
        {"f": str(f), "a": a, "b": b, "m": m, "alpha": alpha},
        {"lhs": lhs, "rhs": rhs},
        _chain("lhs", "rhs"),
    )


# theorem id -> (evaluator, parameter names, takes variant)
THEOREMS: dict[str, tuple[Callable, tuple[str, ...], bool]] = {
    "E1": (eval_hh_classical, (), False),
    "e13": (eval_hh_sconvex, ("s",), False),
    "e14": (eval_kirmaci, ("s", "q"), False),
    "T1": (eval_frac_hh_sconvex, ("s", "alpha"), True),
    "L1": (eval_lemma1_identity, ("alpha",), False),
    "T2": (eval_frac_trapezoid_sconvex, ("s", "q", "alpha"), True),
    "h1": (eval_frac_hh_mconvex, ("m", "alpha"), True),
    "kk": (eval_hh_mconvex_classical, ("m",), False),
    "h2": (eval_mconvex_F_bound, ("m", "alpha"), False),
}


def evaluate(theorem_id: str, f: Func, a: float, b: float, params: dict, variant: str = AS_STATED,
             tol: Tolerance = DEFAULT_TOL) -> InequalityReport:
    """Dispatch by theorem id; ``params`` supplies the theorem's parameters."""
    try:
        fn, names, takes_variant = THEOREMS[theorem_id]
    except KeyError:
        raise ValueError(f"unknown theorem id {theorem_id!r}; expected one of {sorted(THEOREMS)}") from None
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"{theorem_id} needs parameters {missing}")
    kwargs = {n: params[n] for n in names}
    if takes_variant:
        kwargs["variant"] = variant
    report = fn(f, a, b, tol=tol, **kwargs)
    return report.with_variant(variant)
