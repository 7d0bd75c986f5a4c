"""Stochastic-order machinery on finite discrete distributions: domination
tests, the quantile (monotone) coupling, sequential-domination verification,
the fitness-level dominator, and closed-form runtime bounds obtained through
domination arguments.

X is dominated by Y (written X <= Y in distribution) when
Pr[X <= v] >= Pr[Y <= v] for every v.  Verdicts compare deficit-inclusive
upper tails, which recovers the true tails exactly at every point below the
truncation cuts (the discarded mass genuinely lies above them); beyond the
cuts the verdict is correct up to the declared truncation budgets, and the
dominated side is always treated conservatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds.elementary import harmonic
from .bounds.geometric import geom_sum_bound
from .dist import FiniteDist, GeomSumSpec, ParameterError, convolve, pmf_binomial
from .query import TailQuery

DEFAULT_SLACK = 1e-12


def _merged_support(x: FiniteDist, y: FiniteDist) -> np.ndarray:
    return np.union1d(x.support, y.support)


def dominates(x: FiniteDist, y: FiniteDist, slack: float = DEFAULT_SLACK) -> bool:
    """True iff x is stochastically dominated by y: the CDF of x lies above
    the CDF of y at every support point of either.

    Upper tails include each candidate's truncation deficit, so a deficit on
    the dominating side can never produce a false positive.
    """
    for v in _merged_support(x, y):
        # Pr[x > v] <= Pr[y > v], via the deficit-inclusive upper tails.
        if x.upper_tail(v) - x.point(v) > y.upper_tail(v) - y.point(v) + slack:
            return False
    return True


@dataclass(frozen=True)
class Coupling:
    """A joint law over pairs with the two given marginals.

    ``ordered`` is set when the construction guarantees Pr[x <= y] = 1
    (quantile coupling of a dominated pair).
    """

    pairs: tuple[tuple[float, float, float], ...]  # (x value, y value, mass)
    marginal_x: FiniteDist
    marginal_y: FiniteDist
    ordered: bool
    direction: str | None  # "x<=y", "y<=x", or None
    note: str = ""

    def prob_ordered(self) -> float:
        """Pr[x <= y] under the joint law."""
        return math.fsum(m for a, b, m in self.pairs if a <= b)

    def check_marginals(self, tol: float = 1e-12) -> bool:
        for dist, idx in ((self.marginal_x, 0), (self.marginal_y, 1)):
            acc: dict[float, float] = {}
            for pair in self.pairs:
                acc[pair[idx]] = acc.get(pair[idx], 0.0) + pair[2]
            for v, m in zip(dist.support, dist.mass):
                if abs(acc.get(float(v), 0.0) - float(m)) > tol:
                    return False
        return True

    def to_csv(self) -> str:
        lines = ["x,y,mass"]
        lines += [f"{a:.12g},{b:.12g},{m:.12g}" for a, b, m in self.pairs]
        return "\n".join(lines) + "\n"


def monotone_coupling(x: FiniteDist, y: FiniteDist, slack: float = DEFAULT_SLACK) -> Coupling:
    """Quantile coupling: both variables are driven by one shared uniform.

    When one marginal dominates the other, the construction puts all mass on
    ordered pairs; otherwise the coupling is still returned with the ordered
    guarantee unset and a note saying no monotone direction exists.

    Small truncation deficits (at most 1e-6) are renormalized away; the
    coupling then describes the laws conditioned on the retained support.
    """
    if x.tail_deficit > 1e-6 or y.tail_deficit > 1e-6:
        raise ParameterError("monotone coupling needs (essentially) exact marginals")
    if x.tail_deficit > 0.0:
        x = FiniteDist(x.support, x.mass / (1.0 - x.tail_deficit))
    if y.tail_deficit > 0.0:
        y = FiniteDist(y.support, y.mass / (1.0 - y.tail_deficit))
    pairs: list[tuple[float, float, float]] = []
    ix = iy = 0
    rx = float(x.mass[0])
    ry = float(y.mass[0])
    while True:
        m = min(rx, ry)
        if m > 0:
            pairs.append((float(x.support[ix]), float(y.support[iy]), m))
        rx -= m
        ry -= m
        if rx <= 1e-15:
            ix += 1
            if ix >= x.support.size:
                break
            rx = float(x.mass[ix])
        if ry <= 1e-15:
            iy += 1
            if iy >= y.support.size:
                break
            ry = float(y.mass[iy])
    x_dom_y = dominates(x, y, slack)
    y_dom_x = dominates(y, x, slack)
    if x_dom_y:
        direction, ordered, note = "x<=y", True, ""
    elif y_dom_x:
        direction, ordered, note = "y<=x", True, ""
    else:
        direction, ordered, note = None, False, "no monotone coupling direction"
    return Coupling(tuple(pairs), x, y, ordered, direction, note)


# ---------------------------------------------------------------------------
# sequential domination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovChainSpec:
    """A short chain given by explicit history-conditional laws.

    ``supports[i]`` lists step i's values; ``kernels[i]`` maps every
    positive-probability history prefix (a tuple of values of steps < i) to
    the conditional probability vector over ``supports[i]``.
    """

    supports: tuple[tuple[float, ...], ...]
    kernels: tuple[dict[tuple, tuple[float, ...]], ...]

    def __post_init__(self):
        if len(self.supports) != len(self.kernels):
            raise ParameterError("one kernel per step required")
        for support, kernel in zip(self.supports, self.kernels):
            for history, row in kernel.items():
                if len(row) != len(support):
                    raise ParameterError(f"kernel row for {history} has wrong arity")
                if abs(math.fsum(row) - 1.0) > 1e-12:
                    raise ParameterError(f"kernel row for {history} does not sum to 1")

    @property
    def n(self) -> int:
        return len(self.supports)


@dataclass(frozen=True)
class SequentialVerdict:
    conditional_ok: bool  # every conditional law dominated by / dominating its target
    sum_ok: bool  # the exact sum law dominated by / dominating the target convolution
    hard_failure: bool  # premise true but conclusion false: must never happen
    histories_checked: int
    chain_sum: FiniteDist
    target_sum: FiniteDist


def check_sequential_domination(
    chain: MarkovChainSpec,
    targets: Sequence[FiniteDist],
    mode: str = "dominates",
    state_budget: int = 10**6,
    slack: float = DEFAULT_SLACK,
) -> SequentialVerdict:
    """Verify the sequential-domination implication on one instance.

    (1) checks that every history-conditional law of step i is dominated by
    (mode="dominates") or dominates (mode="subdominates") ``targets[i]``;
    (2) builds the exact sum distribution of the chain by exhaustive history
    enumeration and compares it with the convolution of the targets.
    Premise (1) holding while conclusion (2) fails is a hard failure.
    """
    if mode not in ("dominates", "subdominates"):
        raise ParameterError("mode must be dominates or subdominates")
    if len(targets) != chain.n:
        raise ParameterError("need one target per step")

    conditional_ok = True
    for i in range(chain.n):
        support = np.asarray(chain.supports[i], dtype=float)
        for row in chain.kernels[i].values():
            cond = FiniteDist(support, np.asarray(row, dtype=float))
            ok = dominates(cond, targets[i], slack) if mode == "dominates" else dominates(targets[i], cond, slack)
            if not ok:
                conditional_ok = False

    # exact sum law by path enumeration
    acc: dict[tuple, float] = {(): 1.0}
    histories = 0
    for i in range(chain.n):
        nxt: dict[tuple, float] = {}
        support = chain.supports[i]
        kernel = chain.kernels[i]
        for history, w in acc.items():
            if w == 0.0:
                continue
            try:
                row = kernel[history]
            except KeyError:
                raise ParameterError(f"kernel missing history {history!r}") from None
            for value, p in zip(support, row):
                if p > 0.0:
                    nxt[history + (value,)] = nxt.get(history + (value,), 0.0) + w * p
        acc = nxt
        histories += len(acc)
        if histories > state_budget:
            raise ParameterError(
                f"state budget exceeded: {histories} prefix-value pairs > {state_budget}"
            )

    sums: dict[float, float] = {}
    for history, w in acc.items():
        s = math.fsum(history)
        sums[s] = sums.get(s, 0.0) + w
    values = sorted(sums)
    chain_sum = FiniteDist(np.array(values), np.array([sums[v] for v in values]))

    target_sum = targets[0]
    for t in targets[1:]:
        target_sum = convolve(target_sum, t)

    if mode == "dominates":
        sum_ok = dominates(chain_sum, target_sum, slack)
    else:
        sum_ok = dominates(target_sum, chain_sum, slack)
    return SequentialVerdict(
        conditional_ok=conditional_ok,
        sum_ok=sum_ok,
        hard_failure=conditional_ok and not sum_ok,
        histories_checked=histories,
        chain_sum=chain_sum,
        target_sum=target_sum,
    )


# ---------------------------------------------------------------------------
# fitness levels and mutation domination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitnessLevelSpec:
    """m strictly fitness-increasing levels with per-level leave
    probabilities p_1..p_{m-1}, each in (0, 1]."""

    p: tuple[float, ...]

    def __post_init__(self):
        if len(self.p) < 1:
            raise ParameterError("need at least one level transition (m >= 2)")
        if any(v <= 0.0 or v > 1.0 for v in self.p):
            raise ParameterError("leave probabilities must lie in (0, 1]")

    @property
    def m(self) -> int:
        return len(self.p) + 1


@dataclass(frozen=True)
class FitnessLevelDominator:
    """The runtime is dominated by an independent sum of geometrics with the
    per-level leave probabilities, so E[T] <= sum 1/p_i and every
    geometric-sum tail bound applies."""

    spec: GeomSumSpec
    expectation_bound: float

    def tail_bound(self, q: TailQuery, variant: str, C: float | None = None):
        return geom_sum_bound(self.spec, q, variant, C)


def fitness_level_dominator(levels: FitnessLevelSpec) -> FitnessLevelDominator:
    spec = GeomSumSpec(levels.p)
    return FitnessLevelDominator(spec, spec.mean())


def onemax_fitness_levels(n: int) -> FitnessLevelSpec:
    """The classic (1+1) EA levels on a length-n OneMax instance: leaving
    level i (i zeros left) needs one specific bit flip and no other,
    which happens with probability at least i/(en)."""
    if n < 1:
        raise ParameterError("need n >= 1")
    return FitnessLevelSpec(tuple(i / (math.e * n) for i in range(1, n + 1)))


def sbm_onecount_dist(n: int, p: float, ones: int) -> FiniteDist:
    """Exact one-count law of the offspring of standard-bit mutation: kept
    ones ~ Bin(ones, 1-p) plus gained ones ~ Bin(n - ones, p)."""
    if not (0 <= ones <= n):
        raise ParameterError("need 0 <= ones <= n")
    if not (0.0 <= p <= 1.0):
        raise ParameterError("need p in [0, 1]")
    return convolve(pmf_binomial(ones, 1.0 - p), pmf_binomial(n - ones, p))


@dataclass(frozen=True)
class MutationDominationVerdict:
    holds: bool
    within_hypothesis: bool  # p <= 1/2 and x_ones <= y_ones
    x_dist: FiniteDist
    y_dist: FiniteDist


def sbm_onecount_domination(n: int, p: float, x_ones: int, y_ones: int) -> MutationDominationVerdict:
    """Mutation domination: for p <= 1/2 and |x|_1 <= |y|_1, the offspring
    one-counts satisfy |x'|_1 dominated by |y'|_1.  Outside the hypothesis
    the comparison is still evaluated, only flagged."""
    x_dist = sbm_onecount_dist(n, p, x_ones)
    y_dist = sbm_onecount_dist(n, p, y_ones)
    within = p <= 0.5 and x_ones <= y_ones
    return MutationDominationVerdict(dominates(x_dist, y_dist), within, x_dist, y_dist)


# ---------------------------------------------------------------------------
# closed-form runtime bounds via domination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuntimeBoundSet:
    example: str
    expectation_bound: float
    tail: Callable[[float], float]  # deviation parameter -> tail probability
    tail_event: str
    dominating_spec: GeomSumSpec | None = None
    extras: dict = field(default_factory=dict)


def domination_runtime_examples(example: str, n: int | None = None, m: int | None = None, ell: int | None = None) -> RuntimeBoundSet:
    """Closed-form expectation and tail bounds for runtimes dominated by
    independent geometric sums.

      onemax             E <= e n H_n;   Pr[T >= (1+d) e n ln n] <= n^-d
      generic_nn         E <= n^n;       Pr[T >= g n^n] <= e^-g
      eulerian           E <= 2 e m H_(m/3);
                         Pr[T >= 2(1+d) e m ln(m/3)] <= (m/3)^-d
      sorting_inversions E <= (4e/3) C(n,2) H_C(n,2);
                         Pr[T >= (1+d)(4e/3) n^2 ln n] <= C(n,2)^-d
      sorting_tree       E = 2 e C(n,2); Pr[T >= (1+d) E] <= exp(-d^2 n/(2+2d))
      sssp               T0 = (1+d*) e n^2 ell with the stated d*;
                         E <= (1 + 1/ln(n-1)) T0; Pr[T >= (1+e) T0] <= (n-1)^-e
    """
    if example == "onemax":
        if n is None or n < 2:
            raise ParameterError("onemax needs n >= 2")
        spec = GeomSumSpec(tuple(i / (math.e * n) for i in range(1, n + 1)))
        return RuntimeBoundSet(
            example,
            math.e * n * harmonic(n),
            lambda d: float(n) ** (-d),
            "Pr[T >= (1+d) e n ln n]",
            spec,
        )
    if example == "generic_nn":
        if n is None or n < 1:
            raise ParameterError("generic_nn needs n >= 1")
        p = float(n) ** (-float(n))
        return RuntimeBoundSet(
            example,
            1.0 / p,
            lambda g: math.exp(-g),
            "Pr[T >= g n^n]",
            GeomSumSpec((p,)),
            extras={"exact_tail": "(1 - n^-n)^(g n^n)"},
        )
    if example == "eulerian":
        if m is None or m < 3:
            raise ParameterError("eulerian needs the edge count m >= 3")
        levels = m // 3
        spec = GeomSumSpec(tuple(i / (2.0 * math.e * m) for i in range(1, levels + 1)))
        return RuntimeBoundSet(
            example,
            2.0 * math.e * m * harmonic(levels),
            lambda d: float(levels) ** (-d),
            "Pr[T >= 2(1+d) e m ln(m/3)]",
            spec,
        )
    if example == "sorting_inversions":
        if n is None or n < 2:
            raise ParameterError("sorting_inversions needs n >= 2")
        pairs = math.comb(n, 2)
        spec = GeomSumSpec(tuple(3.0 * i / (4.0 * math.e * pairs) for i in range(1, pairs + 1)))
        return RuntimeBoundSet(
            example,
            (4.0 * math.e / 3.0) * pairs * harmonic(pairs),
            lambda d: float(pairs) ** (-d),
            "Pr[T >= (1+d)(4e/3) n^2 ln n]",
            spec,
            extras={"weak_expectation": (2.0 * math.e / 3.0) * n * n * (1.0 + 2.0 * math.log(n))},
        )
    if example == "sorting_tree":
        if n is None or n < 2:
            raise ParameterError("sorting_tree needs n >= 2")
        pairs = math.comb(n, 2)
        spec = GeomSumSpec((1.0 / (2.0 * math.e),) * pairs)
        return RuntimeBoundSet(
            example,
            2.0 * math.e * pairs,
            lambda d: math.exp(-d * d * n / (2.0 + 2.0 * d)),
            "Pr[T >= (1+d) 2 e C(n,2)]",
            spec,
        )
    if example == "sssp":
        if n is None or n < 3 or ell is None or ell < 2:
            raise ParameterError("sssp needs n >= 3 and ell >= 2")
        p = 1.0 / (math.e * n * n)
        ratio = 4.0 * math.log(n - 1) / (ell - 1)
        d_star = max(ratio, math.sqrt(ratio))
        t0 = (1.0 + d_star) * ell / p
        return RuntimeBoundSet(
            example,
            (1.0 + 1.0 / math.log(n - 1)) * t0,
            lambda e: float(n - 1) ** (-e),
            "Pr[T >= (1+e) T0]",
            None,
            extras={"T0": t0, "delta_star": d_star},
        )
    raise ParameterError(f"unknown example {example!r}")
