"""Mellin transforms, residue series and the classical special-value identities
they produce, with a verification harness and a command-line front end."""

from .errors import (
    DomainError,
    MellinError,
    NoConvergence,
    NonFiniteIntegrand,
    NonFiniteTerm,
    ParseError,
    PoleError,
    UnboundVariable,
    UnknownIdentity,
)
from .numerics import (
    QuadratureConfig,
    SeriesConfig,
    ValueWithError,
    gamma,
    gamma_line_bound,
    gamma_residue,
    integrate_finite,
    integrate_halfline,
    log_gamma,
    sum_series,
)
from .special import (
    ZetaConfig,
    alt_hurwitz_eta,
    bernoulli_numbers,
    bernoulli_poly,
    euler_L,
    euler_numbers,
    euler_poly,
    exp_poly,
    exp_poly_dobinski,
    hermite,
    hurwitz_zeta,
    hurwitz_zeta_neg_int,
    parabolic_cylinder_int,
    parabolic_cylinder_neg,
    stirling2_row,
)
from .mellin import (
    VerticalLine,
    choose_truncation,
    invert_gamma_kernel,
    master_theorem_check,
    mellin_forward,
    mellin_inverse,
    residue_series,
)
from .dsl import compile_function, evaluate, parse_expr, to_source, tokenize
from .harness import Report, list_identities, run_all, run_identity

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
