"""First- and second-moment tail bounds, union/Bonferroni estimates, and
expectation translations.

Source attributions follow the classical literature; each evaluator returns
the plain formula value clamped to [0, 1] plus validity metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..query import ABSOLUTE, ADDITIVE, EXACT, LOWER, MULTIPLICATIVE, UPPER, TailQuery
from .result import BoundResult, ExpectationBound, LOWER_BOUND, UPPER_BOUND, finish

SECTION = "moment-methods"


def markov(mu: float, q: TailQuery, nonnegative: bool = True) -> BoundResult:
    """Markov: Pr[X >= t] <= E[X]/t for non-negative X.

    Only informative above the expectation; lower-tail queries are flagged
    invalid rather than answered.
    """
    pre = []
    if mu < 0:
        pre.append("mean must be non-negative")
    if not nonnegative:
        pre.append("variable not declared non-negative")
    if q.direction != UPPER:
        pre.append("markov bounds upper tails only")
        return finish("markov", SECTION, 1.0, pre, q.describe(), UPPER_BOUND)
    t = q.threshold(mu)
    if t <= 0:
        pre.append("threshold must be positive")
        return finish("markov", SECTION, 1.0, pre, q.describe(), UPPER_BOUND)
    return finish("markov", SECTION, mu / t, pre, q.describe(), UPPER_BOUND)


def reverse_markov(mu: float, u: float, t: float) -> BoundResult:
    """Reverse Markov: for X <= u a.s., Pr[X <= t] <= (u - mu)/(u - t).

    The companion lower bound Pr[X > t] >= (mu - t)/(u - t) is reported in
    the extras.
    """
    pre = []
    if t >= u:
        pre.append("need threshold t < range bound u")
        return finish("markov.reverse", SECTION, 1.0, pre, f"Pr[X <= {t:g}]")
    raw = (u - mu) / (u - t)
    companion = max(0.0, min(1.0, (mu - t) / (u - t)))
    return finish(
        "markov.reverse",
        SECTION,
        raw,
        pre,
        f"Pr[X <= {t:g}] given X <= {u:g}",
        UPPER_BOUND,
        extras={"exceed_lower_bound": companion},
    )


def chebyshev_family(
    var: float,
    q: TailQuery,
    variant: str = "chebyshev",
    mu: float | None = None,
) -> BoundResult:
    """Chebyshev: Pr[|X - mu| >= lam] <= Var/lam^2 (two-sided).
    Cantelli: Pr[X >= mu + lam] <= Var/(Var + lam^2) (one-sided).

    The query's deviation is the additive lam; multiplicative or absolute
    queries need the mean to resolve it.
    """
    bound_id = f"moment.{variant}"
    pre = []
    if var < 0:
        pre.append("variance must be non-negative")
        return finish(bound_id, SECTION, 1.0, pre, q.describe())
    lam = _additive_deviation(q, mu, pre)
    if pre:
        return finish(bound_id, SECTION, 1.0, pre, q.describe())
    if variant == "chebyshev":
        event = f"Pr[|X - mu| >= {lam:g}] (covers {q.describe()})"
        raw = 1.0 if lam <= 0 else var / lam**2
        return finish(bound_id, SECTION, raw, pre, event)
    if variant == "cantelli":
        raw = 1.0 if lam <= 0 else var / (var + lam**2)
        return finish(bound_id, SECTION, raw, pre, q.describe())
    pre.append(f"unknown variant {variant!r}")
    return finish(bound_id, SECTION, 1.0, pre, q.describe())


def _additive_deviation(q: TailQuery, mu: float | None, pre: list[str]) -> float:
    if q.deviation == ADDITIVE:
        return q.amount
    if mu is None:
        pre.append("absolute or multiplicative query needs the mean")
        return 0.0
    t = q.threshold(mu)
    return t - mu if q.direction == UPPER else mu - t


def second_moment(
    mu: float, var: float, ex2: float | None = None
) -> tuple[BoundResult, BoundResult]:
    """Second moment method: Pr[X <= 0] <= Var/mu^2 and, with the second
    moment available, the sharper Pr[X = 0] <= Var/E[X^2]."""
    pre = []
    if mu == 0:
        pre.append("mean must be nonzero")
    first = finish(
        "moment.second",
        SECTION,
        1.0 if pre else var / mu**2,
        list(pre),
        "Pr[X <= 0]",
    )
    if ex2 is None:
        ex2 = var + mu * mu
    pre2 = list(pre)
    if ex2 <= 0:
        pre2.append("second moment must be positive")
    second = finish(
        "moment.second.ex2",
        SECTION,
        1.0 if pre2 else var / ex2,
        pre2,
        "Pr[X = 0]",
    )
    return first, second


@dataclass(frozen=True)
class UnionBounds:
    upper: float
    lower: float | None
    valid: bool
    violated_preconditions: tuple[str, ...] = ()


def union_bonferroni(
    probs, pair_probs=None, k: int = 1
) -> UnionBounds:
    """Union bound and second Bonferroni inequality for Pr[union of events].

    k = 1 gives the upper bound sum(Pr[E_i]); k = 2 additionally gives the
    lower bound sum(Pr[E_i]) - sum(Pr[E_i and E_j]).
    """
    probs = [float(p) for p in probs]
    upper = min(1.0, math.fsum(probs))
    if k == 1:
        return UnionBounds(upper, None, True)
    if k == 2:
        if pair_probs is None:
            return UnionBounds(upper, None, False, ("k=2 needs pairwise intersection probabilities",))
        lower = max(0.0, math.fsum(probs) - math.fsum(float(p) for p in pair_probs))
        return UnionBounds(upper, lower, True)
    return UnionBounds(upper, None, False, (f"truncation order {k} not supported (terms beyond pairs unavailable)",))


def conditional_binomial_ub(n: int, p: float, k: int) -> ExpectationBound:
    """E[X | X >= k] <= k + (n - k) p for X ~ Bin(n, p)."""
    pre = []
    if not (0 <= k <= n):
        pre.append("need k in [0..n]")
    if not (0.0 <= p <= 1.0):
        pre.append("need p in [0, 1]")
    value = float("nan") if pre else k + (n - k) * p
    return ExpectationBound(
        "condbinom.upper",
        value,
        not pre,
        tuple(pre),
        SECTION,
        UPPER_BOUND,
        extras={"weak_form": k + n * p} if not pre else {},
    )


def tail_to_expectation(alpha: float, beta: float, T: float, form: str) -> ExpectationBound:
    """Expectation from an exponential tail bound.

    If Pr[X >= T + lam] <= alpha exp(-lam/beta) for all integer lam >= 1,
    then E[X] <= T + alpha beta; the other three forms are the lower-tail
    and multiplicative analogues.
    """
    pre = []
    if alpha <= 0 or beta <= 0:
        pre.append("need alpha, beta > 0")
    if T < 0:
        pre.append("need T >= 0")
    ab = alpha * beta
    forms = {
        "additive_up": (T + ab, UPPER_BOUND),
        "additive_low": (T - ab, LOWER_BOUND),
        "mult_up": ((1.0 + ab) * T, UPPER_BOUND),
        "mult_low": ((1.0 - ab) * T, LOWER_BOUND),
    }
    if form not in forms:
        pre.append(f"unknown form {form!r}")
        return ExpectationBound("taile." + form, float("nan"), False, tuple(pre), SECTION)
    value, kind = forms[form]
    vacuous = form in ("additive_low", "mult_low") and value <= 0
    return ExpectationBound(
        f"taile.{form}", value, not pre, tuple(pre), SECTION, kind, vacuous=vacuous
    )
