"""Chernoff-Hoeffding bounds for sums of independent (or negatively
correlated) bounded random variables, martingale-style bounds, and the
elementary solvers built on top of them.

Boundary closures follow the usual reading conventions: 0 beyond the support
edge, (mu/n)^n at the edge, 0^0 := 1.  Every value is clamped to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .result import BoundResult, LOWER_BOUND, UPPER_BOUND, finish

SECTION_MULT = "chernoff/multiplicative"
SECTION_ADD = "chernoff/additive"
SECTION_VAR = "chernoff/variance"
SECTION_MART = "chernoff/bounded-differences"
SECTION_SOLVE = "chernoff/solvers"
SECTION_RUNTIME = "runtime-lower-bounds"

# relative tolerance for "threshold exactly at the support edge"
_EDGE_RTOL = 1e-12

MULT_UPPER_VARIANTS = ("strongest", "strong", "lin1", "lin2", "easy", "eA", "eB", "two_pow")
MULT_LOWER_VARIANTS = ("strongest", "strong", "easy")
VARIANCE_VARIANTS = ("strongest", "strong", "lin1", "lin2", "mult_lin")


def mult_upper(mu: float, delta: float, variant: str, n: int | None = None) -> BoundResult:
    """Multiplicative upper-tail bounds on Pr[X >= (1+delta) mu] for a sum of
    n independent [0,1] variables with mean mu (or an upper estimate of it).

    Variants, strongest first (Hoeffding 1963 for the first two):
      strongest  (1/(1+d))^((1+d)mu) ((n-mu)/(n-(1+d)mu))^(n-(1+d)mu)
      strong     exp(-((1+d)ln(1+d) - d) mu)
      lin1       exp(-d^2 mu / (2 + 2d/3))
      lin2       exp(-min(d^2, d) mu / 3)
      easy       exp(-d^2 mu / 3), for d <= 1
      eA         (e/(1+d))^((1+d)mu)
      eB         (e/d)^(d mu)
      two_pow    2^-k with k = (1+d)mu, for k >= 2e mu
    """
    bound_id = f"chernoff.mult.upper.{variant}"
    event = f"Pr[X >= (1+{delta:g})*{mu:g}]"
    pre = []
    if variant not in MULT_UPPER_VARIANTS:
        pre.append(f"unknown variant {variant!r}")
    if delta < 0:
        pre.append("need delta >= 0")
    if mu < 0:
        pre.append("need mu >= 0")
    if pre:
        return finish(bound_id, SECTION_MULT, 1.0, pre, event)

    if variant == "strongest":
        if n is None:
            pre.append("strongest form needs the variable count n")
            return finish(bound_id, SECTION_MULT, 1.0, pre, event)
        # mu above n can only be an upper estimate; the event is then empty
        raw = _mult_upper_strongest(mu, delta, n)
    elif variant == "strong":
        raw = math.exp(-((1.0 + delta) * math.log1p(delta) - delta) * mu)
    elif variant == "lin1":
        raw = math.exp(-(delta * delta) * mu / (2.0 + 2.0 * delta / 3.0))
    elif variant == "lin2":
        raw = math.exp(-min(delta * delta, delta) * mu / 3.0)
    elif variant == "easy":
        if delta > 1.0:
            pre.append("easy form needs delta <= 1")
            return finish(bound_id, SECTION_MULT, 1.0, pre, event)
        raw = math.exp(-(delta * delta) * mu / 3.0)
    elif variant == "eA":
        raw = math.exp((1.0 + delta) * mu * (1.0 - math.log1p(delta)))
    elif variant == "eB":
        raw = 1.0 if delta == 0.0 else math.exp(delta * mu * (1.0 - math.log(delta)))
    else:  # two_pow
        k = (1.0 + delta) * mu
        if k < 2.0 * math.e * mu:
            pre.append("two_pow needs k >= 2e*mu")
            return finish(bound_id, SECTION_MULT, 1.0, pre, event)
        raw = 2.0 ** (-k)
    return finish(bound_id, SECTION_MULT, raw, pre, event)


def _mult_upper_strongest(mu: float, delta: float, n: float) -> float:
    x = (1.0 + delta) * mu
    if mu == 0.0:
        return 1.0
    if x > n * (1.0 + _EDGE_RTOL):
        return 0.0
    if x >= n * (1.0 - _EDGE_RTOL):
        return (mu / n) ** n
    log_v = -x * math.log1p(delta) + (n - x) * (math.log(n - mu) - math.log(n - x))
    return math.exp(log_v)


def mult_lower(mu: float, delta: float, variant: str, n: int | None = None) -> BoundResult:
    """Multiplicative lower-tail bounds on Pr[X <= (1-delta) mu], delta in
    [0,1], for a sum of n independent [0,1] variables with mean mu (or a
    lower estimate of it).

    Variants: strongest (reads (1 - mu/n)^n at delta = 1), strong
    (e^-d/(1-d)^(1-d))^mu, and easy exp(-d^2 mu / 2).
    """
    bound_id = f"chernoff.mult.lower.{variant}"
    event = f"Pr[X <= (1-{delta:g})*{mu:g}]"
    pre = []
    if variant not in MULT_LOWER_VARIANTS:
        pre.append(f"unknown variant {variant!r}")
    if not (0.0 <= delta <= 1.0):
        pre.append("need delta in [0, 1]")
    if mu < 0:
        pre.append("need mu >= 0")
    if pre:
        return finish(bound_id, SECTION_MULT, 1.0, pre, event)

    if variant == "strongest":
        if n is None:
            pre.append("strongest form needs the variable count n")
            return finish(bound_id, SECTION_MULT, 1.0, pre, event)
        if mu > n:
            pre.append("mean cannot exceed n for [0,1] variables")
            return finish(bound_id, SECTION_MULT, 1.0, pre, event)
        raw = _mult_lower_strongest(mu, delta, n)
    elif variant == "strong":
        if delta == 1.0:
            raw = math.exp(-mu)
        else:
            raw = math.exp(mu * (-delta - (1.0 - delta) * math.log1p(-delta)))
    else:  # easy
        raw = math.exp(-(delta * delta) * mu / 2.0)
    return finish(bound_id, SECTION_MULT, raw, pre, event)


def _mult_lower_strongest(mu: float, delta: float, n: float) -> float:
    x = (1.0 - delta) * mu
    if mu == 0.0:
        return 1.0
    if x == 0.0:
        return (1.0 - mu / n) ** n
    if mu == n:
        return 1.0 if delta == 0.0 else 0.0
    log_v = -x * math.log1p(-delta) + (n - x) * (math.log(n - mu) - math.log(n - x))
    return math.exp(log_v)


def additive(lam: float, n: int | None = None, ranges=None, direction: str = "upper") -> BoundResult:
    """Hoeffding's additive bound: Pr[X >= E[X] + lam] <= exp(-2 lam^2 / S)
    with S = n for [0,1] summands or S = sum of squared range lengths;
    identical for the lower tail."""
    pre = []
    if lam < 0:
        pre.append("need lambda >= 0")
    if ranges is not None:
        ranges = [float(c) for c in ranges]
        if any(c <= 0 for c in ranges):
            pre.append("range lengths must be positive")
        S = math.fsum(c * c for c in ranges)
    elif n is not None:
        if n < 1:
            pre.append("need n >= 1")
        S = float(n)
    else:
        pre.append("need either n or the range lengths")
        S = 1.0
    sign = "+" if direction == "upper" else "-"
    event = f"Pr[X {'>=' if direction == 'upper' else '<='} E[X] {sign} {lam:g}]"
    raw = 1.0 if pre or S == 0 else math.exp(-2.0 * lam * lam / S)
    return finish(
        "chernoff.additive", SECTION_ADD, raw, pre, event,
        extras={"additive_family": True, "sum_sq_ranges": None if pre else S},
    )


def variance_bound(
    sigma2: float,
    b: float,
    lam: float,
    variant: str,
    n: int | None = None,
    direction: str = "upper",
    range_side: str = "both",
    mu: float | None = None,
    delta: float | None = None,
) -> BoundResult:
    """Bernstein-type bounds using the summed variance sigma2 and a one-sided
    range bound b (X_i <= E[X_i] + b for upper tails, X_i >= E[X_i] - b for
    lower tails).

    Variants: strongest (Bennett-Hoeffding form, needs n), strong, lin1
    exp(-lam^2/(2 sigma2 + 2b lam/3)), lin2 exp(-min(lam^2/sigma2, lam/b)/3),
    and the multiplicative mult_lin exp(-d^2 mu^2/(2 sigma2 + 2 d mu/3)).
    """
    bound_id = f"chernoff.var.{variant}"
    pre = []
    if variant not in VARIANCE_VARIANTS:
        pre.append(f"unknown variant {variant!r}")
    if sigma2 < 0:
        pre.append("need sigma2 >= 0")
    if b <= 0:
        pre.append("need b > 0")
    if direction == "upper" and range_side not in ("upper", "both"):
        pre.append("upper tail needs X_i <= E[X_i] + b declared")
    if direction == "lower" and range_side not in ("lower", "both"):
        pre.append("lower tail needs X_i >= E[X_i] - b declared")
    if variant == "mult_lin":
        if mu is None or delta is None:
            pre.append("mult_lin needs mu and delta")
        else:
            lam = delta * mu
    if lam < 0:
        pre.append("need lambda >= 0")
    sign = "+" if direction == "upper" else "-"
    event = f"Pr[X {'>=' if direction == 'upper' else '<='} E[X] {sign} {lam:g}]"
    if pre:
        return finish(bound_id, SECTION_VAR, 1.0, pre, event)

    if variant == "strongest":
        if n is None:
            pre.append("strongest form needs the variable count n")
            return finish(bound_id, SECTION_VAR, 1.0, pre, event)
        raw = _variance_strongest(sigma2, b, lam, n)
    elif variant == "strong":
        if lam == 0.0:
            raw = 1.0
        elif sigma2 == 0.0:
            raw = 0.0
        else:
            r = b * lam / sigma2
            raw = math.exp(-(lam / b) * ((1.0 + 1.0 / r) * math.log1p(r) - 1.0))
    elif variant in ("lin1", "mult_lin"):
        denom = 2.0 * sigma2 + 2.0 * b * lam / 3.0 if variant == "lin1" else 2.0 * sigma2 + 2.0 * delta * mu / 3.0
        raw = 1.0 if lam == 0.0 else (0.0 if denom == 0.0 else math.exp(-lam * lam / denom))
    else:  # lin2
        if lam == 0.0:
            raw = 1.0
        else:
            ratio = math.inf if sigma2 == 0.0 else lam * lam / sigma2
            raw = math.exp(-min(ratio, lam / b) / 3.0)
    extras = {"additive_family": variant != "mult_lin"}
    return finish(bound_id, SECTION_VAR, raw, pre, event, extras=extras)


def _variance_strongest(sigma2: float, b: float, lam: float, n: float) -> float:
    nb = n * b
    if lam > nb * (1.0 + _EDGE_RTOL):
        return 0.0
    if sigma2 == 0.0:
        return 1.0 if lam == 0.0 else 0.0
    if lam >= nb * (1.0 - _EDGE_RTOL):
        return (sigma2 / (nb * b + sigma2)) ** n
    w = nb * b + sigma2
    a_term = -(1.0 + b * lam / sigma2) * (sigma2 / w) * math.log1p(b * lam / sigma2)
    b_term = -(1.0 - lam / nb) * (nb * b / w) * math.log1p(-lam / nb)
    return math.exp(n * (a_term + b_term))


def martingale(c, lam: float, variant: str, two_sided: bool = False) -> BoundResult:
    """Bounded differences / bounded conditional expectations:
    exp(-2 lam^2 / sum c_i^2) (McDiarmid 1998); Azuma-Hoeffding:
    exp(-lam^2 / (2 sum c_i^2)) -- the step bounds there are half as large,
    hence the factor-4 gap."""
    bound_id = f"martingale.{variant}"
    pre = []
    if variant not in ("bounded_diff", "bounded_cond_exp", "azuma"):
        pre.append(f"unknown variant {variant!r}")
    c = [float(v) for v in c]
    if any(v <= 0 for v in c):
        pre.append("influence bounds must be positive")
    if lam < 0:
        pre.append("need lambda >= 0")
    if pre:
        return finish(bound_id, SECTION_MART, 1.0, pre)
    S = math.fsum(v * v for v in c)
    if variant == "azuma":
        raw = math.exp(-lam * lam / (2.0 * S))
    else:
        raw = math.exp(-2.0 * lam * lam / S)
    if two_sided:
        raw *= 2.0
    event = f"Pr[{'|X - E[X]|' if two_sided else 'X - E[X]'} >= {lam:g}]"
    return finish(bound_id, SECTION_MART, raw, pre, event, extras={"additive_family": True})


def max_partial_sums(base: BoundResult) -> BoundResult:
    """Re-scope an additive tail bound to the running maximum (or minimum) of
    the partial sums: same numeric value, strictly wider event.

    Multiplicative base bounds cannot be strengthened this way and are
    rejected.
    """
    pre = []
    if not base.extras.get("additive_family"):
        pre.append("base bound must be an additive-deviation bound")
    if not base.valid:
        pre.append("base bound is itself invalid")
    value = 1.0 if pre else base.value
    event = f"exists i <= n: partial sum deviates ({base.event})"
    return finish(
        "chernoff.maxsum",
        SECTION_ADD,
        value,
        pre,
        event,
        extras={"base_bound": base.bound_id},
    )


# ---------------------------------------------------------------------------
# solvers and specialisations
# ---------------------------------------------------------------------------

SUPEREXP_THRESHOLD = 4.24044349  # e^(e^(1/e)), truncated


@dataclass(frozen=True)
class SuperexpDelta:
    delta: float
    tail_value: float  # (e/delta)^delta
    target: float  # 1/t
    valid: bool
    violated_preconditions: tuple[str, ...] = ()


def solve_delta_superexp(t: float) -> SuperexpDelta:
    """Smallest handy delta with (e/delta)^delta <= 1/t:
    delta = ln t / ln(ln t / (e ln ln t)), valid for t >= e^(e^(1/e))."""
    if t < SUPEREXP_THRESHOLD:
        return SuperexpDelta(float("nan"), float("nan"), float("nan"), False, ("need t >= 4.24044349",))
    log_t = math.log(t)
    delta = log_t / math.log(log_t / (math.e * math.log(log_t)))
    tail = math.exp(delta * (1.0 - math.log(delta)))
    return SuperexpDelta(delta, tail, 1.0 / t, True)


def sbm_tail(alpha: float, k: float) -> BoundResult:
    """Flip-count tail for standard-bit mutation with rate alpha/n:
    Pr[H(x, y) >= k] <= (e alpha / k)^k, independent of n."""
    pre = []
    if alpha <= 0:
        pre.append("need alpha > 0")
    if k <= 0:
        pre.append("need k > 0")
    raw = 1.0 if pre else math.exp(k * (1.0 + math.log(alpha) - math.log(k)))
    return finish("sbm.tail_k", SECTION_SOLVE, raw, pre, f"Pr[flips >= {k:g}]")


@dataclass(frozen=True)
class SbmQuantile:
    k: int
    k_real: float
    guarantee: float  # Pr[flips >= k] <= guarantee
    valid: bool
    violated_preconditions: tuple[str, ...] = ()


def sbm_quantile(alpha: float, p: float, T: int = 1) -> SbmQuantile:
    """Smallest flip count k with Pr[H(x,y) >= k] <= p for standard-bit
    mutation with rate alpha/n; with T > 1 the guarantee is union-bounded
    over T mutations (needs p <= (1/T} exp(-alpha e^(1/e)))."""
    pre = []
    if alpha <= 0:
        pre.append("need alpha > 0")
    if T < 1:
        pre.append("need T >= 1")
    limit = math.exp(-alpha * math.exp(1.0 / math.e)) / T
    if not (0.0 < p <= limit):
        pre.append(f"need 0 < p <= {limit:.6g}")
    if pre:
        return SbmQuantile(0, float("nan"), p, False, tuple(pre))
    log_inv = math.log(T / p)
    r = log_inv / alpha  # = ln(1/(p/T)^(1/alpha))
    k_real = log_inv / math.log(r / (math.e * math.log(r)))
    return SbmQuantile(math.ceil(k_real), k_real, p, True)


def needle_failure(n: int, c: float, eta: float) -> BoundResult:
    """Probability that any of the first 2^(cn) uniformly-distributed search
    points comes within Hamming distance (1/2 - eta) n of a fixed point:
    at most 2^((c - 2 ln(2) eta^2) n)."""
    pre = []
    if n < 1:
        pre.append("need n >= 1")
    if eta <= 0 or c <= 0:
        pre.append("need eta, c > 0")
    exponent = (c - 2.0 * math.log(2.0) * eta * eta) * n if not pre else 0.0
    raw = 1.0 if pre else 2.0**exponent
    event = f"some of the first 2^({c:g}n) points within ({0.5 - eta:g})n of the optimum"
    return finish("runtime.needle", SECTION_RUNTIME, raw, pre, event)


def onemax_runtime_lower(n: int, eps: float) -> BoundResult:
    """For any objective with a unique optimum, the (1+1) EA needs more than
    (1-eps)(n-1) ln(n/2) steps except with probability exp(-n^eps)."""
    pre = []
    if n < 1:
        pre.append("need n >= 1")
    if eps <= 0:
        pre.append("need eps > 0")
    raw = 1.0 if pre else math.exp(-(n**eps))
    t = 0.0 if pre else (1.0 - eps) * (n - 1) * math.log(max(n, 2) / 2.0)
    return finish(
        "runtime.onemax_eps",
        SECTION_RUNTIME,
        raw,
        pre,
        f"Pr[T <= {t:g}]",
    )
