"""Closed-form inequality evaluators: given parameters, each returns the
bound's numeric value in [0, 1] plus validity metadata."""

from .binomial import (
    anti_exceed_mean,
    anti_fair_coin,
    anti_feige,
    anti_general_sqrt,
    anti_point_cap,
    binomial_bounds,
)
from .chernoff import (
    additive,
    martingale,
    max_partial_sums,
    mult_lower,
    mult_upper,
    needle_failure,
    onemax_runtime_lower,
    sbm_quantile,
    sbm_tail,
    solve_delta_superexp,
    variance_bound,
)
from .classic import (
    chebyshev_family,
    conditional_binomial_ub,
    markov,
    reverse_markov,
    second_moment,
    tail_to_expectation,
    union_bonferroni,
)
from .elementary import (
    INEQUALITY_IDS,
    DomainError,
    Violation,
    elementary_suite,
    harmonic,
    weierstrass_bounds,
)
from .geometric import coupon_bound, coupon_bounds, coupon_expectation, geom_sum_bound
from .registry import REGISTRY, all_ids, catalog_index, closest_ids, lookup
from .result import BoundResult, ExpectationBound, LOWER_BOUND, UPPER_BOUND

__all__ = [
    "BoundResult",
    "ExpectationBound",
    "LOWER_BOUND",
    "UPPER_BOUND",
    "markov",
    "reverse_markov",
    "chebyshev_family",
    "second_moment",
    "union_bonferroni",
    "conditional_binomial_ub",
    "tail_to_expectation",
    "mult_upper",
    "mult_lower",
    "additive",
    "variance_bound",
    "martingale",
    "max_partial_sums",
    "solve_delta_superexp",
    "sbm_tail",
    "sbm_quantile",
    "needle_failure",
    "onemax_runtime_lower",
    "geom_sum_bound",
    "coupon_bound",
    "coupon_bounds",
    "coupon_expectation",
    "binomial_bounds",
    "anti_fair_coin",
    "anti_general_sqrt",
    "anti_point_cap",
    "anti_feige",
    "anti_exceed_mean",
    "harmonic",
    "weierstrass_bounds",
    "elementary_suite",
    "Violation",
    "DomainError",
    "INEQUALITY_IDS",
    "REGISTRY",
    "lookup",
    "closest_ids",
    "catalog_index",
    "all_ids",
]
