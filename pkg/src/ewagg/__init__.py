"""Exponential-weighting aggregation of ordered smoothers in the Gaussian sequence model."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    DimensionError,
    InvalidParameterError,
    Observation,
    exact_risk,
    generate_observation,
    linear_estimate,
    oracle_risk,
    replication_rng,
    ure,
)
from .families import (  # noqa: E402
    ConditionReport,
    MultiplierFamily,
    PriorWeights,
    Spectrum,
    build_cutoff,
    build_landweber,
    build_pinsker,
    build_tikhonov,
    check_condition,
    check_prior_identity,
    custom_family,
    polynomial_spectrum,
    prior_weights,
    validate_ordered,
)
from .estimators import (  # noqa: E402
    AggregateResult,
    WeightProfile,
    aggregate,
    aggregate_divergence,
    entropy_term,
    exp_weights,
    h_eps_hat,
    kl_divergence,
    ure_minimizer,
)
from .psi import PsiFunction, evaluate_psi  # noqa: E402
