"""Weak distillation of quantum resources: rejection-sampling based weak
simulation from quasi-probability decompositions, the probability-
estimation baseline, analytic sample-cost bounds, and benchmark scenarios.
"""

from .distributions import (
    DiscreteDistribution,
    Outcome,
    Rng,
    SignedDistribution,
    renyi_entropy,
    sample,
    tvd,
)
from .quasiprob import (
    QuasiDecomposition,
    SignedSample,
    combine_factors,
    combine_signed_terms,
    draw_signed,
    draw_signed_counts,
    mixture,
    target,
)
from .rejection import (
    AcceptanceTable,
    RejectionFailure,
    RejectionResult,
    WeakSampler,
    estimate_ratios,
    ideal_ratios,
    output_distribution,
    output_distribution_from_ratios,
    retry_budget,
    run_rejection,
    tvd_error_bound,
)
from .estimation import (
    EmpiricalSignedEstimate,
    estimate_distribution,
    estimate_expectation,
    hoeffding_budget,
    sample_from_estimate,
)
from .bounds import (
    BoundInputs,
    BoundReport,
    SplitBound,
    bound_alternative,
    bound_estimation,
    bound_rejection,
    bound_report,
    optimize_split,
    s_quantity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
