"""conckit: concentration-inequality toolkit.

Exact evaluators for a catalog of tail bounds, domination results, and
stochastic processes, plus exact-distribution and Monte-Carlo oracles that
certify each bound numerically on desk-scale instances.
"""

from . import bounds, dist, domination, harness, processes, suites
from .dist import (
    FiniteDist,
    GeomSumSpec,
    HypergeomSpec,
    MonteCarloEstimate,
    ParameterError,
    PoissonBinomialSpec,
    convolve,
    geom_sum_dist,
    moments,
    monte_carlo,
    pmf_binomial,
    pmf_geometric_truncated,
    pmf_hypergeom,
    pmf_poisson_binomial,
    tail,
)
from .query import TailQuery

__version__ = "0.1.0"

__all__ = [
    "bounds",
    "dist",
    "domination",
    "harness",
    "processes",
    "suites",
    "TailQuery",
    "FiniteDist",
    "PoissonBinomialSpec",
    "GeomSumSpec",
    "HypergeomSpec",
    "MonteCarloEstimate",
    "ParameterError",
    "pmf_binomial",
    "pmf_poisson_binomial",
    "pmf_hypergeom",
    "pmf_geometric_truncated",
    "convolve",
    "geom_sum_dist",
    "tail",
    "moments",
    "monte_carlo",
]
