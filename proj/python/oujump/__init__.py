"""First-passage analytics for Ornstein-Uhlenbeck processes driven by
compound-Poisson jumps with two-sided mixed-exponential jump laws.

The heavy lifting lives in the compiled extension ``_oujump``; this package
re-exports its public surface.
"""

from _oujump import (  # noqa: F401
    Model,
    OUJumpError,
    asymptotic_k,
    classify_points,
    estimate_laplace,
    estimate_ruin,
    laplace_undershoot,
    limit_ruin_level,
    make_model,
    psi,
    recurrent_split,
    ruin_probability,
    run_cli,
    undershoot_limit,
)

__all__ = [
    "Model",
    "OUJumpError",
    "asymptotic_k",
    "classify_points",
    "estimate_laplace",
    "estimate_ruin",
    "laplace_undershoot",
    "limit_ruin_level",
    "make_model",
    "psi",
    "recurrent_split",
    "ruin_probability",
    "run_cli",
    "undershoot_limit",
]
