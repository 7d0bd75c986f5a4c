"""Binomial-specific tail and point-probability estimates, plus
anti-concentration guarantees (lower bounds on deviation probabilities and
caps on point probabilities).
"""

from __future__ import annotations

import math

from .result import BoundResult, LOWER_BOUND, UPPER_BOUND, finish

SECTION_TAIL = "binomial-tails"
SECTION_ANTI = "anti-concentration"

BINOMIAL_VARIANTS = (
    "union_coeff",
    "klar",
    "feller",
    "bollobas_up",
    "bollobas_low",
    "max_pmf",
    "max_pmf_sharp",
)


def _log_pmf(n: int, p: float, k: int) -> float:
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if p == 1.0:
        return 0.0 if k == n else -math.inf
    log_comb = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return log_comb + k * math.log(p) + (n - k) * math.log1p(-p)


def binomial_bounds(n: int, p: float, k: int, variant: str) -> BoundResult:
    """Estimates for X ~ Bin(n, p) at the integer threshold k.

      union_coeff    Pr[X >= k] <= C(n, k) p^k          (union over k-sets)
      klar           Pr[X >= k] <= (k+1)(1-p)/(k+1-(n+1)p) Pr[X = k]
                     for k in [np..n]                    (Klar 2000)
      feller         Pr[X >= k] <= (k - kp)/(k - np) Pr[X = k], k > np
                     (Feller form)
      bollobas_up    upper estimate of Pr[X = k]         (Bollobas 2001)
      bollobas_low   lower estimate of Pr[X = k]
      max_pmf        Pr[X = k] <= Pr[Bin(n, k/n) = k]
      max_pmf_sharp  Pr[X = k] <= sqrt(n/(2 pi k (n-k)))
    """
    bound_id = f"binom.{variant}"
    pre = []
    if variant not in BINOMIAL_VARIANTS:
        pre.append(f"unknown variant {variant!r}")
        return finish(bound_id, SECTION_TAIL, 1.0, pre)
    if not (0 <= k <= n):
        pre.append("need k in [0..n]")
    if not (0.0 <= p <= 1.0):
        pre.append("need p in [0, 1]")
    if pre:
        return finish(bound_id, SECTION_TAIL, 1.0, pre)
    tail_event = f"Pr[Bin({n},{p:g}) >= {k}]"
    point_event = f"Pr[Bin({n},{p:g}) = {k}]"

    if variant == "union_coeff":
        if p == 0.0:
            raw = 1.0 if k == 0 else 0.0
        else:
            log_comb = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
            raw = math.exp(log_comb + k * math.log(p))
        return finish(bound_id, SECTION_TAIL, raw, pre, tail_event)

    if variant == "klar":
        if k < n * p:
            pre.append("need k >= np")
        if p >= 1.0:
            pre.append("need p < 1")
        if pre:
            return finish(bound_id, SECTION_TAIL, 1.0, pre, tail_event)
        factor = (k + 1) * (1.0 - p) / (k + 1 - (n + 1) * p)
        raw = factor * math.exp(_log_pmf(n, p, k))
        return finish(bound_id, SECTION_TAIL, raw, pre, tail_event, extras={"factor": factor})

    if variant == "feller":
        if k <= n * p:
            pre.append("need k > np")
        if pre:
            return finish(bound_id, SECTION_TAIL, 1.0, pre, tail_event)
        factor = (k - k * p) / (k - n * p)
        raw = factor * math.exp(_log_pmf(n, p, k))
        return finish(bound_id, SECTION_TAIL, raw, pre, tail_event, extras={"factor": factor})

    if variant in ("bollobas_up", "bollobas_low"):
        q = 1.0 - p
        h = k - n * p
        if n * p < 1.0:
            pre.append("need np >= 1")
        if h <= 0:
            pre.append("need k > np")
        if variant == "bollobas_up" and not pre and h * q * n / 3.0 < 1.0:
            pre.append("need h*q*n/3 >= 1")
        if variant == "bollobas_low" and k >= n:
            pre.append("need k < n")
        if pre:
            vac = 1.0 if variant == "bollobas_up" else 0.0
            kind = UPPER_BOUND if variant == "bollobas_up" else LOWER_BOUND
            return finish(bound_id, SECTION_TAIL, vac, pre, point_event, kind)
        lead = 1.0 / math.sqrt(2.0 * math.pi * p * q * n)
        if variant == "bollobas_up":
            expo = -h * h / (2 * p * q * n) + h / (q * n) + h**3 / (p * p * n * n)
            return finish(bound_id, SECTION_TAIL, lead * math.exp(expo), pre, point_event)
        expo = (
            -h * h / (2 * p * q * n)
            - h**3 / (2 * q * q * n * n)
            - h**4 / (3 * p**3 * n**3)
            - h / (2 * p * n)
            - 1.0 / (12.0 * k)
            - 1.0 / (12.0 * (n - k))
        )
        return finish(bound_id, SECTION_TAIL, lead * math.exp(expo), pre, point_event, LOWER_BOUND)

    if variant == "max_pmf":
        raw = math.exp(_log_pmf(n, k / n, k)) if n > 0 else 1.0
        return finish(bound_id, SECTION_TAIL, raw, pre, point_event)

    # max_pmf_sharp
    if not (1 <= k <= n - 1):
        pre.append("need k in [1..n-1]")
        return finish(bound_id, SECTION_TAIL, 1.0, pre, point_event)
    raw = math.sqrt(n / (2.0 * math.pi * k * (n - k)))
    return finish(bound_id, SECTION_TAIL, raw, pre, point_event)


# ---------------------------------------------------------------------------
# anti-concentration
# ---------------------------------------------------------------------------


def anti_fair_coin(n: int, side: str = "upper") -> BoundResult:
    """For X ~ Bin(n, 1/2): Pr[X >= E[X] + sqrt(E[X])/2] >= 1/8, and the
    mirrored lower-side guarantee."""
    pre = []
    if n < 1:
        pre.append("need n >= 1")
    if side not in ("upper", "lower"):
        pre.append("side must be upper or lower")
    mu = n / 2.0
    dev = 0.5 * math.sqrt(mu)
    cmp = ">=" if side == "upper" else "<="
    sgn = "+" if side == "upper" else "-"
    event = f"Pr[Bin({n},1/2) {cmp} {mu:g} {sgn} {dev:g}]"
    return finish("anticonc.sqrtn12", SECTION_ANTI, 0.0 if pre else 0.125, pre, event, LOWER_BOUND)


def anti_general_sqrt(v0: float, c: float | None = None) -> BoundResult:
    """Explicit constants for the general exceedance guarantee: for any sum X
    of independent binaries with Var[X] >= v0,
    Pr[X >= E[X] + (c/(4 sqrt 2)) sqrt(Var[X])] >= C (and the lower side).

    The two-stage rounding argument gives
    C = (1/8) (c^2/(2+c^2)) (c^2/(16+c^2)) for any c <= 1/2 with
    4c^2 + c/sqrt(2 v0) <= 1; the default c is the largest such value.
    """
    pre = []
    if v0 <= 0:
        pre.append("need v0 > 0")
        return finish("anticonc.general_sqrt", SECTION_ANTI, 0.0, pre, "", LOWER_BOUND)
    a = 1.0 / math.sqrt(2.0 * v0)
    c_max = min(0.5, (-a + math.sqrt(a * a + 16.0)) / 8.0)
    if c is None:
        c = c_max
    if c <= 0 or 4 * c * c + c * a > 1.0 + 1e-12 or c > 0.5:
        pre.append(f"c must lie in (0, {c_max:.6g}]")
        return finish("anticonc.general_sqrt", SECTION_ANTI, 0.0, pre, "", LOWER_BOUND)
    coeff = c / (4.0 * math.sqrt(2.0))
    guarantee = (1.0 / 8.0) * (c * c / (2.0 + c * c)) * (c * c / (16.0 + c * c))
    event = f"Pr[X >=< E[X] +- {coeff:.6g} sqrt(Var[X])], Var[X] >= {v0:g}"
    return finish(
        "anticonc.general_sqrt",
        SECTION_ANTI,
        guarantee,
        pre,
        event,
        LOWER_BOUND,
        extras={"deviation_coefficient": coeff, "c": c},
    )


def anti_point_cap(var: float) -> BoundResult:
    """For a sum of independent binaries with Var[X] >= 1, every point
    probability satisfies Pr[X = k] <= 2/sqrt(Var[X])."""
    pre = []
    if var < 1.0:
        pre.append("need Var[X] >= 1")
    raw = 1.0 if pre else 2.0 / math.sqrt(var)
    return finish("anticonc.point_cap", SECTION_ANTI, raw, pre, "max_k Pr[X = k]")


def anti_feige(delta: float) -> BoundResult:
    """Feige 2006: independent non-negative X_i with E[X_i] <= 1 satisfy
    Pr[X <= E[X] + delta] >= min(1/13, delta/(delta+1))."""
    pre = []
    if delta < 0:
        pre.append("need delta >= 0")
    raw = 0.0 if pre else min(1.0 / 13.0, delta / (delta + 1.0))
    return finish(
        "anticonc.feige", SECTION_ANTI, raw, pre, f"Pr[X <= E[X] + {delta:g}]", LOWER_BOUND
    )


_EXCEED_IDS = ("a", "b", "c", "d", "e")


def anti_exceed_mean(n: int, p: float, variant: str) -> BoundResult:
    """Lower bounds on the probability that Bin(n, p) reaches or exceeds its
    expectation:

      a: p > 1/n            Pr[X >= E[X]] > 1/4
      b: 0.29/n <= p < 1    Pr[X >  E[X]] >= 1/4
      c: 1/n <= p <= 1-1/n  Pr[X >= E[X]] >= v/(2 sqrt 2 (sqrt(v+1)+1)),
                            v = sqrt(np(1-p))
      d: 1/n <= p < 1       Pr[X >  E[X]] > 1/2 - sqrt(n/(2 pi k (n-k))),
                            k = floor(np)
      e: 1/n <= p < 1-1/n   Pr[X >  E[X] + 1] >= 0.037
    """
    bound_id = f"anticonc.exceed_{variant}"
    pre = []
    if variant not in _EXCEED_IDS:
        pre.append(f"unknown variant {variant!r}")
        return finish(bound_id, SECTION_ANTI, 0.0, pre, "", LOWER_BOUND)
    if n < 1:
        pre.append("need n >= 1")
    if not (0.0 <= p <= 1.0):
        pre.append("need p in [0, 1]")
    if not pre:
        if variant == "a" and not (p > 1.0 / n):
            pre.append("need p > 1/n")
        elif variant == "b" and not (0.29 / n <= p < 1.0):
            pre.append("need 0.29/n <= p < 1")
        elif variant == "c" and not (1.0 / n <= p <= 1.0 - 1.0 / n):
            pre.append("need 1/n <= p <= 1 - 1/n")
        elif variant == "d" and not (1.0 / n <= p < 1.0):
            pre.append("need 1/n <= p < 1")
        elif variant == "e" and not (1.0 / n <= p < 1.0 - 1.0 / n):
            pre.append("need 1/n <= p < 1 - 1/n")
    if pre:
        return finish(bound_id, SECTION_ANTI, 0.0, pre, "", LOWER_BOUND)

    mu = n * p
    if variant == "a":
        raw, event = 0.25, f"Pr[X >= {mu:g}]"
    elif variant == "b":
        raw, event = 0.25, f"Pr[X > {mu:g}]"
    elif variant == "c":
        v = math.sqrt(n * p * (1.0 - p))
        raw = v / (2.0 * math.sqrt(2.0) * (math.sqrt(v * v + 1.0) + 1.0))
        event = f"Pr[X >= {mu:g}]"
    elif variant == "d":
        k = math.floor(mu)
        raw = 0.5 - math.sqrt(n / (2.0 * math.pi * k * (n - k)))
        event = f"Pr[X > {mu:g}]"
    else:
        raw, event = 0.037, f"Pr[X > {mu + 1:g}]"
    return finish(bound_id, SECTION_ANTI, raw, pre, event, LOWER_BOUND)
