"""Riemannian L^p centers of mass by constant step-size gradient descent."""

from ._geomean import (
    CutLocusError,
    Dataset,
    DomainError,
    Error,
    InvalidPoint,
    Manifold,
    PreconditionError,
    b_lower,
    c_upper,
    circle_example,
    comparison_check,
    cost,
    ct,
    descend,
    exit_time,
    gradient,
    minimal_ball,
    resolve_step,
    secant_euclid,
    secant_sphere,
    sn,
    uniform_hessian_bound,
)

__all__ = [
    "CutLocusError",
    "Dataset",
    "DomainError",
    "Error",
    "InvalidPoint",
    "Manifold",
    "PreconditionError",
    "b_lower",
    "c_upper",
    "circle_example",
    "comparison_check",
    "cost",
    "ct",
    "descend",
    "exit_time",
    "gradient",
    "minimal_ball",
    "resolve_step",
    "secant_euclid",
    "secant_sphere",
    "sn",
    "uniform_hessian_bound",
]
