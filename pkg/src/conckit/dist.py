"""Exact finite discrete distributions: the oracle side of every check.

Probability mass functions are computed in double precision via log-space
binomial coefficients or dynamic-programming convolution.  Distributions with
infinite support (geometric sums) are truncated against an explicit tail
budget; the discarded mass is carried in ``tail_deficit`` and is added to
every upper-tail query so the oracle never under-reports a tail.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .query import LOWER, UPPER, TailQuery

NORMALIZATION_TOL = 1e-12

# Builders renormalize when the raw mass drifts by less than this; a larger
# drift indicates a bug, not rounding.
_DRIFT_GUARD = 1e-9


class ParameterError(ValueError):
    """Invalid distribution, spec, or estimator parameters."""


# ---------------------------------------------------------------------------
# parameter specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoissonBinomialSpec:
    """Sum of independent binary variables with success probabilities probs."""

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) < 1:
            raise ParameterError("need at least one probability")
        if any(p < 0.0 or p > 1.0 for p in self.probs):
            raise ParameterError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @property
    def n(self) -> int:
        return len(self.probs)

    def mean(self) -> float:
        return math.fsum(self.probs)

    def variance(self) -> float:
        return math.fsum(p * (1.0 - p) for p in self.probs)


@dataclass(frozen=True)
class GeomSumSpec:
    """Sum of independent geometric variables (support {1, 2, ...})."""

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) < 1:
            raise ParameterError("need at least one probability")
        if any(p <= 0.0 or p > 1.0 for p in self.probs):
            raise ParameterError("success probabilities must lie in (0, 1]")
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @property
    def n(self) -> int:
        return len(self.probs)

    def mean(self) -> float:
        return math.fsum(1.0 / p for p in self.probs)

    def p_min(self) -> float:
        return min(self.probs)

    def squared_sum(self) -> float:
        """s = sum over i of (1/p_i)^2."""
        return math.fsum((1.0 / p) ** 2 for p in self.probs)

    def identical_p(self) -> float | None:
        p0 = self.probs[0]
        return p0 if all(p == p0 for p in self.probs) else None


@dataclass(frozen=True)
class HypergeomSpec:
    """Marked-element count in an n-sample without replacement from N items,
    m of which are marked."""

    N: int
    n: int
    m: int

    def __post_init__(self):
        if not (0 <= self.n <= self.N):
            raise ParameterError("need 0 <= n <= N")
        if not (0 <= self.m <= self.N):
            raise ParameterError("need 0 <= m <= N")

    def mean(self) -> float:
        return self.n * self.m / self.N


# ---------------------------------------------------------------------------
# the distribution object
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteDist:
    """Finite discrete distribution: ascending support, matching masses, and
    the probability mass truncated away (0 for exact distributions)."""

    support: np.ndarray
    mass: np.ndarray
    tail_deficit: float = 0.0

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        mass = np.asarray(self.mass, dtype=float)
        if support.ndim != 1 or mass.ndim != 1 or support.size != mass.size:
            raise ParameterError("support and mass must be 1-d and equal length")
        if support.size == 0:
            raise ParameterError("empty support")
        if np.any(np.diff(support) <= 0):
            raise ParameterError("support must be strictly ascending")
        if mass.min(initial=0.0) < -1e-12:
            raise ParameterError("negative mass")
        mass = np.clip(mass, 0.0, None)
        deficit = float(self.tail_deficit)
        if deficit < -1e-15:
            raise ParameterError("negative tail deficit")
        deficit = max(deficit, 0.0)
        total = float(mass.sum()) + deficit
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ParameterError(f"mass + tail_deficit = {total!r}, not 1")
        support.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "tail_deficit", deficit)

    # -- moments -----------------------------------------------------------

    def mean(self) -> float:
        return float(np.dot(self.support, self.mass))

    def variance(self) -> float:
        mu = self.mean()
        return max(0.0, float(np.dot((self.support - mu) ** 2, self.mass)))

    # -- probabilities -----------------------------------------------------

    def point(self, value: float) -> float:
        idx = np.searchsorted(self.support, value)
        if idx < self.support.size and self.support[idx] == value:
            return float(self.mass[idx])
        return 0.0

    def upper_tail(self, t: float) -> float:
        """Pr[X >= t], counting the tail deficit (conservative)."""
        idx = np.searchsorted(self.support, t, side="left")
        return min(1.0, float(self.mass[idx:].sum()) + self.tail_deficit)

    def lower_tail(self, t: float) -> float:
        """Pr[X <= t]; exact, the deficit lies above the retained support."""
        idx = np.searchsorted(self.support, t, side="right")
        return min(1.0, float(self.mass[:idx].sum()))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.mass)

    def max_pmf(self) -> float:
        return float(self.mass.max())

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "support": [float(v) for v in self.support],
                "mass": [float(v) for v in self.mass],
                "tail_deficit": self.tail_deficit,
            }
        )

    @staticmethod
    def from_json(text: str) -> "FiniteDist":
        obj = json.loads(text)
        return FiniteDist(
            np.asarray(obj["support"], dtype=float),
            np.asarray(obj["mass"], dtype=float),
            float(obj.get("tail_deficit", 0.0)),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "mass", "cdf"])
        running = 0.0
        for v, m in zip(self.support, self.mass):
            running += float(m)
            writer.writerow([f"{v:.12g}", f"{m:.12g}", f"{running:.12g}"])
        return buf.getvalue()


def _build(support: np.ndarray, mass: np.ndarray, deficit: float = 0.0) -> FiniteDist:
    """Drop zero-mass edge values, guard against drift, renormalize."""
    mass = np.clip(np.asarray(mass, dtype=float), 0.0, None)
    support = np.asarray(support, dtype=float)
    keep = mass > 0.0
    if not keep.any():
        raise ParameterError("all masses vanished")
    # Keep interior zeros so supports stay contiguous; trim only the edges.
    first = int(np.argmax(keep))
    last = int(len(keep) - np.argmax(keep[::-1]))
    support, mass = support[first:last], mass[first:last]
    total = float(mass.sum()) + deficit
    if abs(total - 1.0) > _DRIFT_GUARD:
        raise ParameterError(f"mass drifted to {total!r}")
    mass = mass * ((1.0 - deficit) / float(mass.sum()))
    return FiniteDist(support, mass, deficit)


def point_mass(value: float) -> FiniteDist:
    return FiniteDist(np.array([float(value)]), np.array([1.0]))


# ---------------------------------------------------------------------------
# pmf builders
# ---------------------------------------------------------------------------


def pmf_binomial(n: int, p: float) -> FiniteDist:
    """Bin(n, p): Pr[X = k] = C(n, k) p^k (1-p)^(n-k) on [0..n].

    Computed in log space, stable for n up to 1e4.
    """
    if n < 0 or int(n) != n:
        raise ParameterError("n must be a non-negative integer")
    if not (0.0 <= p <= 1.0):
        raise ParameterError("p must lie in [0, 1]")
    n = int(n)
    if n == 0 or p == 0.0:
        return point_mass(0.0)
    if p == 1.0:
        return point_mass(float(n))
    k = np.arange(n + 1)
    logpmf = (
        gammaln(n + 1)
        - gammaln(k + 1)
        - gammaln(n - k + 1)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    return _build(k.astype(float), np.exp(logpmf))


def pmf_poisson_binomial(spec: PoissonBinomialSpec) -> FiniteDist:
    """Exact pmf of a sum of independent binaries, by iterative convolution.

    O(n^2); reduces to pmf_binomial when all probabilities are equal.
    """
    mass = np.array([1.0])
    for p in spec.probs:
        nxt = np.zeros(mass.size + 1)
        nxt[:-1] = mass * (1.0 - p)
        nxt[1:] += mass * p
        mass = nxt
    return _build(np.arange(mass.size, dtype=float), mass)


def pmf_hypergeom(spec: HypergeomSpec) -> FiniteDist:
    """Hypergeometric pmf: C(m,k) C(N-m,n-k) / C(N,n) on
    [max(0, n+m-N) .. min(n, m)]."""
    N, n, m = spec.N, spec.n, spec.m
    lo = max(0, n + m - N)
    hi = min(n, m)
    k = np.arange(lo, hi + 1)
    logpmf = (
        _log_binom(m, k)
        + _log_binom(N - m, n - k)
        - _log_binom(N, n)
    )
    return _build(k.astype(float), np.exp(logpmf))


def _log_binom(n, k):
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def pmf_geometric_truncated(p: float, eps: float) -> FiniteDist:
    """Geom(p) on {1, 2, ...} (trials up to and including the first success),
    truncated at the smallest K with (1-p)^K <= eps; deficit (1-p)^K."""
    if not (0.0 < p <= 1.0):
        raise ParameterError("p must lie in (0, 1]")
    if not (0.0 < eps < 1.0):
        raise ParameterError("eps must lie in (0, 1)")
    if p == 1.0:
        return point_mass(1.0)
    q = 1.0 - p
    # smallest K with q^K <= eps
    K = max(1, math.ceil(math.log(eps) / math.log(q)))
    while q**K > eps:
        K += 1
    k = np.arange(1, K + 1)
    mass = np.exp((k - 1) * math.log(q) + math.log(p))
    deficit = q**K
    return _build(k.astype(float), mass, deficit)


def convolve(a: FiniteDist, b: FiniteDist) -> FiniteDist:
    """Distribution of the independent sum; deficits add (conservatively)."""
    deficit = 1.0 - (1.0 - a.tail_deficit) * (1.0 - b.tail_deficit)
    if _unit_stride(a.support) and _unit_stride(b.support):
        mass = np.convolve(a.mass, b.mass)
        start = a.support[0] + b.support[0]
        support = start + np.arange(mass.size)
        return _build(support, mass, deficit)
    sums = np.add.outer(a.support, b.support).ravel()
    weights = np.multiply.outer(a.mass, b.mass).ravel()
    support, inverse = np.unique(sums, return_inverse=True)
    mass = np.bincount(inverse, weights=weights, minlength=support.size)
    return _build(support, mass, deficit)


def _unit_stride(support: np.ndarray) -> bool:
    return support.size == 1 or bool(np.all(np.diff(support) == 1.0))


def geom_sum_dist(spec: GeomSumSpec, eps: float) -> FiniteDist:
    """Truncated exact distribution of a sum of independent geometrics.

    Each summand is truncated against a budget of eps/n, so the total
    deficit stays below eps.
    """
    if not (0.0 < eps < 1.0):
        raise ParameterError("eps must lie in (0, 1)")
    return _geom_sum_cached(spec.probs, eps)


@functools.lru_cache(maxsize=256)
def _geom_sum_cached(probs: tuple[float, ...], eps: float) -> FiniteDist:
    per_step = eps / len(probs)
    acc = pmf_geometric_truncated(probs[0], per_step)
    for p in probs[1:]:
        acc = convolve(acc, pmf_geometric_truncated(p, per_step))
    return acc


# ---------------------------------------------------------------------------
# queries and moments
# ---------------------------------------------------------------------------


def tail(dist: FiniteDist, q: TailQuery) -> float:
    """Exact Pr[X >= t] or Pr[X <= t] for the query's resolved threshold.

    Upper queries include the tail deficit, so a truncated oracle can only
    over-report an upper tail, never accuse a bound falsely.
    """
    t = q.threshold(dist.mean())
    if q.direction == UPPER:
        return dist.upper_tail(t)
    return dist.lower_tail(t)


def moments(dist: FiniteDist) -> tuple[float, float]:
    """(mean, variance), exact weighted sums over the retained support."""
    return dist.mean(), dist.variance()


# ---------------------------------------------------------------------------
# Monte-Carlo estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloEstimate:
    trials: int
    successes: int
    point: float
    ci_low: float
    ci_high: float
    confidence: float
    seed: int

    def __post_init__(self):
        if not (0.0 <= self.ci_low <= self.point <= self.ci_high <= 1.0):
            raise ParameterError("confidence interval out of order")


def wilson_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Two-sided Wilson score interval; well behaved at extreme rates."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if not (0.0 < confidence < 1.0):
        raise ParameterError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


_MC_CHUNK = 1 << 15


def monte_carlo(
    sampler: Callable[[np.random.Generator, int], int],
    trials: int,
    seed: int,
    confidence: float = 0.95,
    jobs: int = 1,
) -> MonteCarloEstimate:
    """Estimate an event probability from `trials` independent draws.

    ``sampler(rng, k)`` must return the number of occurrences among k
    independent trials drawn from ``rng``.  The trial budget is split into
    fixed-size chunks with independently seeded sub-streams derived from the
    master seed, so the estimate is bit-for-bit reproducible at any
    parallelism degree.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    sizes = [_MC_CHUNK] * (trials // _MC_CHUNK)
    if trials % _MC_CHUNK:
        sizes.append(trials % _MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run_chunk(args):
        child, size = args
        return int(sampler(np.random.default_rng(child), size))

    if jobs > 1 and len(sizes) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(run_chunk, zip(children, sizes)))
    else:
        counts = [run_chunk(args) for args in zip(children, sizes)]

    successes = sum(counts)
    lo, hi = wilson_interval(successes, trials, confidence)
    point = successes / trials
    return MonteCarloEstimate(trials, successes, point, min(lo, point), max(hi, point), confidence, seed)
