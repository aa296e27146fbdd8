"""Robust scalar losses and gradient-sign search for sample centers.

The package provides the classic robust losses (Huber family), a
smoothed-absolute-loss construction over pluggable auxiliary transforms
with the strictly convex log-exp loss as its main instance, and fast
bisection searches for the robust center (M-estimate of location) of a
sample set, plus a CLI front end (``robust-center``).
"""

from .classic import (
    CLASSIC_KINDS,
    ClassicLossSpec,
    classic_curvature,
    classic_grad,
    classic_value,
)
from .generalized import (
    AuxiliaryTransform,
    LogExpParams,
    generalized_grad,
    generalized_value,
    logexp_curvature,
    logexp_grad,
    logexp_value,
    make_exp_aux,
    make_quadratic_aux,
    quadratic_coeffs_near_zero,
    split_coefficient,
    split_value,
    validate_transform,
)
from .minimize import (
    GRAD_ZERO_TOL,
    BracketError,
    CenterResult,
    EpsilonResult,
    LossSpec,
    NonConvexLossError,
    SampleSet,
    cumulative_grad,
    cumulative_value,
    epsilon_minimize,
    find_centralizing_pair,
    loss_grad,
    loss_value,
    mean,
    median,
    require_convex_loss,
    robust_center,
    robust_center_multivariate,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSIC_KINDS",
    "ClassicLossSpec",
    "classic_curvature",
    "classic_grad",
    "classic_value",
    "AuxiliaryTransform",
    "LogExpParams",
    "generalized_grad",
    "generalized_value",
    "logexp_curvature",
    "logexp_grad",
    "logexp_value",
    "make_exp_aux",
    "make_quadratic_aux",
    "quadratic_coeffs_near_zero",
    "split_coefficient",
    "split_value",
    "validate_transform",
    "GRAD_ZERO_TOL",
    "BracketError",
    "CenterResult",
    "EpsilonResult",
    "LossSpec",
    "NonConvexLossError",
    "SampleSet",
    "cumulative_grad",
    "cumulative_value",
    "epsilon_minimize",
    "find_centralizing_pair",
    "loss_grad",
    "loss_value",
    "mean",
    "median",
    "require_convex_loss",
    "robust_center",
    "robust_center_multivariate",
]
