"""Riemann-Liouville fractional integrals and numerical auditing of
Hermite-Hadamard type inequalities for s-convex and m-convex functions."""

from .bounds import (
    AS_STATED,
    PROOF_CONSISTENT,
    InequalityReport,
    eval_frac_hh_mconvex,
    eval_frac_hh_sconvex,
    eval_frac_trapezoid_sconvex,
    eval_hh_classical,
    eval_hh_mconvex_classical,
    eval_hh_sconvex,
    eval_kirmaci,
    eval_lemma1_identity,
    eval_mconvex_F_bound,
    evaluate,
)
from .convexity import FuncSpec, check_convex, check_m_convex, check_s_convex, parse_funcspec
from .fracint import Interval, rl_left, rl_right
from .harness import SweepConfig, SweepReport, run_sweep, sharpness_search
from .quadrature import QuadResult, Tolerance, integrate, integrate_singular, reference_integrate
from .specfun import DomainError, beta_fn, gamma_fn, inc_beta

__version__ = "0.1.0"
