"""Rearrangement-invariant norms, reduction operators and optimal Sobolev spaces on weighted cones.

Spaces are dicts in the config syntax: {"p": 2, "q": 1, "b": [{"k": 1, "a0": 0, "aInf": 1}], "variant": "star"}.
"""

from ._core import (
    ConfigError,
    DomainError,
    MonomialCone,
    NonExistentError,
    StepFunction,
    associate_space,
    campaign_names,
    domain_condition,
    fubini_check,
    fundamental_function,
    kernel_g_derivative,
    lk_norm,
    optimal_domain,
    optimal_target,
    run_campaign,
    target_condition,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "MonomialCone",
    "NonExistentError",
    "StepFunction",
    "associate_space",
    "campaign_names",
    "domain_condition",
    "fubini_check",
    "fundamental_function",
    "kernel_g_derivative",
    "lk_norm",
    "optimal_domain",
    "optimal_target",
    "run_campaign",
    "target_condition",
]

__version__ = "0.1.0"
