"""Seeded simulators for the stochastic processes the verification harness
drives: coupon collecting, randomized local search, the (1+1) EA family,
blind/unbiased search, the neutral-bit frequency walk of the cGA, and
sampling without (or with partial) replacement.

Bit strings are packed machine words (Python integers); the optimum is fixed
at the all-ones string, which is no loss of generality for unbiased
operators.  Every run derives its RNG stream from (master seed, run index),
so results are identical at any parallelism degree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .dist import ParameterError, wilson_interval

OBJECTIVES = ("onemax", "needle", "binval", "random_weights")
STRICTLY_MONOTONE = ("onemax", "binval", "random_weights")
PROCESS_KINDS = ("coupon", "rls", "oea", "oea_mu", "blind", "unbiased_search", "cga_neutral")


@dataclass(frozen=True)
class ProcessSpec:
    kind: str
    n: int
    objective: str = "onemax"
    rate: float | None = None  # standard-bit mutation rate, default 1/n
    mu: int = 1  # initial population size for oea_mu
    K: int = 10  # cGA hypothetical population size (even)
    horizon: int = 10**6
    seed: int = 0
    initial_stake: str = "none"  # coupon: none | binomial_half
    checkpoint_every: int = 0  # 0: only endpoints

    def __post_init__(self):
        if self.kind not in PROCESS_KINDS:
            raise ParameterError(f"unknown process kind {self.kind!r}")
        if self.n < 1:
            raise ParameterError("need n >= 1")
        if self.objective not in OBJECTIVES:
            raise ParameterError(f"unknown objective {self.objective!r}")
        if self.rate is not None and not (0.0 < self.rate <= 1.0):
            raise ParameterError("mutation rate must lie in (0, 1]")
        if self.kind == "oea_mu" and self.mu < 1:
            raise ParameterError("need mu >= 1")
        if self.kind == "cga_neutral" and (self.K < 2 or self.K % 2 != 0):
            raise ParameterError("cGA population size K must be even and >= 2")
        if self.horizon < 1:
            raise ParameterError("need horizon >= 1")
        if self.initial_stake not in ("none", "binomial_half"):
            raise ParameterError("initial_stake must be none or binomial_half")

    def effective_rate(self) -> float:
        return self.rate if self.rate is not None else 1.0 / self.n


@dataclass(frozen=True)
class Trace:
    runtime: int  # generated search points (or coupon draws) until success
    censored: bool
    checkpoints: tuple[tuple[int, float, int], ...]  # (evaluations, best fitness, hamming to optimum)
    seed: int
    run_index: int = 0


# ---------------------------------------------------------------------------
# packed-bit-string helpers and variation operators
# ---------------------------------------------------------------------------


def random_bits(n: int, rng: np.random.Generator) -> int:
    """Uniform n-bit string as a packed integer."""
    raw = int.from_bytes(rng.bytes((n + 7) // 8), "big")
    return raw & ((1 << n) - 1)


def mutate_standard(x: int, n: int, rate: float, rng: np.random.Generator) -> int:
    """Flip each of the n bits independently with probability rate.

    Sampled as a binomial flip count plus a uniform position subset, which
    has exactly the independent-flips law.
    """
    if not (0.0 <= rate <= 1.0):
        raise ParameterError("rate must lie in [0, 1]")
    if rate == 0.0:
        return x
    if rate == 1.0:
        return x ^ ((1 << n) - 1)
    k = int(rng.binomial(n, rate))
    if k == 0:
        return x
    mask = 0
    for pos in rng.choice(n, size=k, replace=False):
        mask |= 1 << int(pos)
    return x ^ mask


def crossover(x: int, y: int, n: int, kind: str, rng: np.random.Generator) -> int:
    """Uniform crossover (each position from x or y with probability 1/2) or
    one-point crossover (uniform cut, sides swapped with probability 1/2)."""
    if x >> n or y >> n:
        raise ParameterError("operands longer than n bits")
    if kind == "uniform":
        mask = random_bits(n, rng)
        return (x & mask) | (y & ~mask)
    if kind == "one_point":
        r = int(rng.integers(0, n + 1))
        low = (1 << r) - 1
        if rng.random() < 0.5:
            return (x & low) | (y & ~low & ((1 << n) - 1))
        return (y & low) | (x & ~low & ((1 << n) - 1))
    raise ParameterError(f"unknown crossover kind {kind!r}")


def hamming(x: int, y: int) -> int:
    return (x ^ y).bit_count()


def make_objective(spec: ProcessSpec) -> Callable[[int], float]:
    """Fitness function with its unique optimum at the all-ones string."""
    n = spec.n
    if spec.objective == "onemax":
        return lambda x: float(x.bit_count())
    if spec.objective == "needle":
        full = (1 << n) - 1
        return lambda x: 1.0 if x == full else 0.0
    if spec.objective == "binval":
        return float
    # random positive weights, derived deterministically from the seed
    w_rng = np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(0x77,)))
    weights = w_rng.random(n) + 0.5
    def f(x: int) -> float:
        total = 0.0
        i = 0
        while x:
            if x & 1:
                total += weights[i]
            x >>= 1
            i += 1
        return total
    return f


# ---------------------------------------------------------------------------
# simulators
# ---------------------------------------------------------------------------


def _run_seeds(seed: int, runs: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(runs)


def simulate_coupon(
    n: int,
    seed: int,
    initial_stake: str = "none",
    horizon: int = 10**8,
    run_index: int = 0,
    _seed_seq: np.random.SeedSequence | None = None,
) -> Trace:
    """Draw uniform coupon types until all n are collected.

    In binomial_half mode a uniformly random subset (each type independently
    with probability 1/2) is pre-collected as the initial stake; the stake
    counts as one generated solution, mirroring the random initial point of
    a search heuristic.
    """
    rng = np.random.default_rng(_seed_seq if _seed_seq is not None else seed)
    collected = 0
    draws = 0
    base = 0
    if initial_stake == "binomial_half":
        collected = random_bits(n, rng)
        base = 1
    full = (1 << n) - 1
    missing = n - collected.bit_count()
    while collected != full and draws < horizon:
        chunk = max(16, 4 * missing)
        for t in rng.integers(0, n, size=chunk):
            draws += 1
            collected |= 1 << int(t)
            if collected == full or draws >= horizon:
                break
        missing = n - collected.bit_count()
    censored = collected != full
    return Trace(base + draws, censored, ((base + draws, float(n - missing), missing),), seed, run_index)


def simulate_search(spec: ProcessSpec, run_index: int = 0, _seed_seq=None) -> Trace:
    """Run one seeded trajectory of the configured heuristic.

    rls flips exactly one uniformly chosen bit per step; oea uses
    standard-bit mutation; oea_mu draws mu initial points and continues from
    the last one with maximal fitness; blind and unbiased_search draw fresh
    uniform points (the canonical unbiased sampler for needle experiments).
    The runtime counts generated search points, initial individuals
    included.
    """
    if spec.kind == "coupon":
        return simulate_coupon(spec.n, spec.seed, spec.initial_stake, spec.horizon, run_index, _seed_seq)
    if spec.kind == "cga_neutral":
        raise ParameterError("use simulate_cga_neutral for the frequency walk")
    rng = np.random.default_rng(_seed_seq if _seed_seq is not None else spec.seed)
    n = spec.n
    f = make_objective(spec)
    optimum = (1 << n) - 1
    rate = spec.effective_rate()
    checkpoints: list[tuple[int, float, int]] = []

    def note(evals: int, generated: int, best_fit: float, force: bool = False):
        # each record carries the best fitness so far and the Hamming
        # distance of the point generated at this evaluation
        if force or (spec.checkpoint_every and evals % spec.checkpoint_every == 0):
            checkpoints.append((evals, best_fit, hamming(generated, optimum)))

    evals = 0
    # initial individuals
    if spec.kind == "oea_mu":
        best, best_fit = 0, -math.inf
        for _ in range(spec.mu):
            x = random_bits(n, rng)
            evals += 1
            fx = f(x)
            if fx >= best_fit:
                best, best_fit = x, fx
            note(evals, x, best_fit)
            if x == optimum:
                note(evals, x, best_fit, force=True)
                return Trace(evals, False, tuple(checkpoints), spec.seed, run_index)
        x, fx = best, best_fit
    else:
        x = random_bits(n, rng)
        evals = 1
        fx = f(x)
        note(evals, x, fx)
        if x == optimum:
            note(evals, x, fx, force=True)
            return Trace(evals, False, tuple(checkpoints), spec.seed, run_index)

    while evals < spec.horizon:
        if spec.kind == "rls":
            y = x ^ (1 << int(rng.integers(0, n)))
        elif spec.kind in ("oea", "oea_mu"):
            y = mutate_standard(x, n, rate, rng)
        else:  # blind / unbiased_search
            y = random_bits(n, rng)
        evals += 1
        fy = f(y)
        if spec.kind in ("blind", "unbiased_search"):
            if fy > fx:
                x, fx = y, fy
        elif fy >= fx:
            x, fx = y, fy
        note(evals, y, fx)
        if y == optimum:
            note(evals, y, fx, force=True)
            return Trace(evals, False, tuple(checkpoints), spec.seed, run_index)
    note(evals, x, fx, force=True)
    return Trace(evals, True, tuple(checkpoints), spec.seed, run_index)


def simulate_runs(spec: ProcessSpec, runs: int, jobs: int = 1) -> list[Trace]:
    """Independent seeded runs; deterministic for any jobs value."""
    seeds = _run_seeds(spec.seed, runs)

    def one(i: int) -> Trace:
        return simulate_search(spec, run_index=i, _seed_seq=seeds[i])

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, range(runs)))
    return [one(i) for i in range(runs)]


@dataclass(frozen=True)
class CgaPath:
    converged: bool
    absorbed_at: int | None  # 0 or K, in frequency units of 1/K
    steps: int
    path: tuple[int, ...]  # frequency numerators, in units of 1/K


def simulate_cga_neutral(K: int, T: int, seed: int, keep_path: bool = False, _seed_seq=None) -> CgaPath:
    """Neutral-bit frequency walk of the cGA: from 1/2, move +-1/K each with
    probability X(1-X), else hold; report absorption at {0, 1} within T
    steps.  State is kept as an integer numerator, so absorption is exact.
    """
    if K < 2 or K % 2 != 0:
        raise ParameterError("K must be even and >= 2")
    if T < 0:
        raise ParameterError("need T >= 0")
    rng = np.random.default_rng(_seed_seq if _seed_seq is not None else seed)
    state = K // 2
    path = [state] if keep_path else []
    draws = rng.random(T)
    for t in range(T):
        q = state * (K - state) / (K * K)
        u = draws[t]
        if u >= 1.0 - q:
            state += 1
        elif u <= q:
            state -= 1
        if keep_path:
            path.append(state)
        if state in (0, K):
            return CgaPath(True, state, t + 1, tuple(path))
    return CgaPath(False, None, T, tuple(path))


# ---------------------------------------------------------------------------
# sampling without / with partial replacement
# ---------------------------------------------------------------------------


def sample_partial_replacement(N: int, sizes: Sequence[int], seed: int) -> np.ndarray:
    """Draw independent uniform subsets U_j of the given sizes from [0..N-1];
    return the 0/1 vector of elements hit by at least one U_j."""
    if any(not (1 <= s <= N) for s in sizes):
        raise ParameterError("every subset size must lie in [1..N]")
    rng = np.random.default_rng(seed)
    hit = np.zeros(N, dtype=np.int64)
    for s in sizes:
        hit[rng.choice(N, size=int(s), replace=False)] = 1
    return hit


@dataclass(frozen=True)
class NegativeCorrelationVerdict:
    holds_one: bool  # Pr[all of I hit] <= prod Pr[hit] for all tested I
    holds_zero: bool  # Pr[none of I hit] <= prod Pr[miss] for all tested I
    sets_checked: int
    worst_one_margin: float
    worst_zero_margin: float


def check_negative_correlation(
    N: int,
    sizes: Sequence[int],
    subsets_cap: int | None = None,
    enumeration_budget: int = 10**7,
) -> NegativeCorrelationVerdict:
    """Exhaustively enumerate the joint sample space of independent uniform
    fixed-size subsets and check 1- and 0-negative correlation of the hit
    indicators for every index set I (up to size subsets_cap)."""
    sizes = [int(s) for s in sizes]
    if any(not (1 <= s <= N) for s in sizes):
        raise ParameterError("every subset size must lie in [1..N]")
    if N > 20:
        raise ParameterError("exhaustive check is limited to N <= 20")
    counts = [math.comb(N, s) for s in sizes]
    total = math.prod(counts)
    if total > enumeration_budget:
        raise ParameterError(
            f"enumeration budget exceeded: product of C(N, n_j) = {total} > {enumeration_budget}"
        )

    def family_masks(s: int) -> np.ndarray:
        masks = np.fromiter(
            (sum(1 << i for i in combo) for combo in itertools.combinations(range(N), s)),
            dtype=np.int64,
            count=math.comb(N, s),
        )
        return masks

    union = np.zeros(1, dtype=np.int64)
    for s in sizes:
        masks = family_masks(s)
        union = np.bitwise_or.outer(union, masks).ravel()
    tallies = np.bincount(union, minlength=1 << N).astype(float) / total

    # zeta transforms: sup[I] = Pr[hit-mask is a superset of I] (all of I
    # hit); sub[I] = Pr[hit-mask is a subset of I], so the probability that
    # no element of I is hit is sub[complement of I].
    sup = tallies.copy()
    sub = tallies.copy()
    for bit in range(N):
        step = 1 << bit
        for base in range(0, 1 << N, step << 1):
            lo = slice(base, base + step)
            hi = slice(base + step, base + (step << 1))
            sup[lo] += sup[hi]
            sub[hi] += sub[lo]
    all_hit = sup

    p_hit = all_hit[1 << np.arange(N)]  # marginal per element
    full = (1 << N) - 1

    cap = subsets_cap if subsets_cap is not None else N
    holds_one = holds_zero = True
    worst_one = worst_zero = -math.inf
    checked = 0
    for size in range(1, cap + 1):
        for combo in itertools.combinations(range(N), size):
            mask = sum(1 << i for i in combo)
            prod_hit = float(np.prod(p_hit[list(combo)]))
            prod_miss = float(np.prod(1.0 - p_hit[list(combo)]))
            margin_one = all_hit[mask] - prod_hit
            margin_zero = sub[full ^ mask] - prod_miss
            worst_one = max(worst_one, margin_one)
            worst_zero = max(worst_zero, margin_zero)
            if margin_one > 1e-12:
                holds_one = False
            if margin_zero > 1e-12:
                holds_zero = False
            checked += 1
    return NegativeCorrelationVerdict(holds_one, holds_zero, checked, worst_one, worst_zero)


def initial_distance_check(n: int, trials: int, seed: int) -> list[dict]:
    """Tabulate |H(x, x*) - n/2| exceedance frequencies of uniform points
    against the two-sided additive bound 2 exp(-2 lam^2/n) for
    lam in {sqrt(n), 2 sqrt(n), 3 sqrt(n)}."""
    if n < 1 or trials < 1:
        raise ParameterError("need n >= 1 and trials >= 1")
    rng = np.random.default_rng(seed)
    h = rng.binomial(n, 0.5, size=trials)
    out = []
    for mult in (1.0, 2.0, 3.0):
        lam = mult * math.sqrt(n)
        freq = float(np.mean(np.abs(h - n / 2.0) >= lam))
        bound = 2.0 * math.exp(-2.0 * lam * lam / n)
        out.append({"lambda": lam, "frequency": freq, "bound": bound})
    return out


# ---------------------------------------------------------------------------
# trace export
# ---------------------------------------------------------------------------


def traces_to_csv(traces: Iterable[Trace]) -> str:
    lines = ["run_id,runtime,censored"]
    lines += [f"{t.run_index},{t.runtime},{int(t.censored)}" for t in traces]
    return "\n".join(lines) + "\n"


def trace_to_json(trace: Trace) -> dict:
    return {
        "run_id": trace.run_index,
        "runtime": trace.runtime,
        "censored": trace.censored,
        "seed": trace.seed,
        "checkpoints": [
            {"evaluations": e, "best_fitness": bf, "hamming_to_optimum": hd}
            for e, bf, hd in trace.checkpoints
        ],
    }


def summarize_runtimes(traces: Sequence[Trace], confidence: float = 0.95) -> dict:
    """Mean over uncensored runs plus simple quantiles; censored runs are
    excluded from the mean but reported."""
    runtimes = np.array([t.runtime for t in traces if not t.censored], dtype=float)
    censored = sum(1 for t in traces if t.censored)
    if runtimes.size == 0:
        return {"runs": len(traces), "censored": censored}
    qs = np.quantile(runtimes, [0.5, 0.9, 0.99])
    return {
        "runs": len(traces),
        "censored": censored,
        "mean": float(runtimes.mean()),
        "stderr": float(runtimes.std(ddof=1) / math.sqrt(runtimes.size)) if runtimes.size > 1 else 0.0,
        "median": float(qs[0]),
        "q90": float(qs[1]),
        "q99": float(qs[2]),
    }


def tail_frequency(
    traces: Sequence[Trace], threshold: float, direction: str = "upper", confidence: float = 0.999
) -> dict:
    """Empirical Pr[runtime >= threshold] (or <=) with a Wilson interval.

    Censored runs count toward upper-tail numerators (conservative).
    """
    total = len(traces)
    if direction == "upper":
        hits = sum(1 for t in traces if t.censored or t.runtime >= threshold)
    else:
        hits = sum(1 for t in traces if not t.censored and t.runtime <= threshold)
    lo, hi = wilson_interval(hits, total, confidence)
    return {"point": hits / total, "lo": lo, "hi": hi, "hits": hits, "runs": total}
