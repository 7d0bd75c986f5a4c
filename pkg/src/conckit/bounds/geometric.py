"""Tail bounds for sums of independent geometric random variables
(support {1, 2, ...}) and the coupon collector process built from them.

Upper-tail variants are parameterized by the multiplicative deviation delta
relative to mu = sum 1/p_i (additive and absolute queries are converted
through the exact mu); the Witt bounds take the additive lambda and use
s = sum (1/p_i)^2.
"""

from __future__ import annotations

import math

from ..dist import GeomSumSpec
from ..query import EXACT, LOWER, UPPER, TailQuery
from .elementary import harmonic
from .result import BoundResult, finish

SECTION = "geometric-sums"
SECTION_COUPON = "coupon-collector"

UPPER_VARIANTS = ("ident_upper", "janson1", "janson2", "scheideler", "weak", "witt_upper", "harmonic")
LOWER_VARIANTS = (
    "ident_lower_strongest",
    "ident_lower_exp",
    "ident_lower_simple",
    "ident_lower_add1",
    "ident_lower_add2",
    "jlower",
    "jlower_mid",
    "jlower_simple",
    "witt_lower",
)
VARIANTS = UPPER_VARIANTS + LOWER_VARIANTS


def geom_sum_bound(spec: GeomSumSpec, q: TailQuery, variant: str, C: float | None = None) -> BoundResult:
    bound_id = f"geom.sum.{variant}"
    pre = []
    if variant not in VARIANTS:
        pre.append(f"unknown variant {variant!r}")
        return finish(bound_id, SECTION, 1.0, pre)
    want = UPPER if variant in UPPER_VARIANTS else LOWER
    if q.direction != want:
        pre.append(f"{variant} bounds the {want} tail")
    if q.reference != EXACT:
        pre.append("geometric-sum bounds use the exact mean")
    ident_p = spec.identical_p()
    if variant.startswith("ident") and ident_p is None:
        pre.append("identical-p variant needs equal success probabilities")
    if pre:
        return finish(bound_id, SECTION, 1.0, pre, q.describe())

    n = spec.n
    mu = spec.mean()
    t = q.threshold(mu)

    if variant == "harmonic":
        return _harmonic_variant(spec, t, C, q)
    if variant in ("witt_upper", "witt_lower"):
        lam = max(0.0, t - mu if want == UPPER else mu - t)
        s = spec.squared_sum()
        if variant == "witt_upper":
            raw = math.exp(-0.25 * min(lam * lam / s, lam * spec.p_min()))
        else:
            raw = math.exp(-lam * lam / (2.0 * s))
        return finish(bound_id, SECTION, raw, pre, q.describe())

    if want == UPPER:
        delta = max(0.0, t / mu - 1.0)
        raw = _upper_delta(variant, spec, delta)
    else:
        delta = min(1.0, max(0.0, 1.0 - t / mu))
        raw = _lower_delta(variant, spec, delta, mu - t)
    return finish(bound_id, SECTION, raw, pre, q.describe())


def _upper_delta(variant: str, spec: GeomSumSpec, delta: float) -> float:
    n, mu, p_min = spec.n, spec.mean(), spec.p_min()
    if variant == "ident_upper":
        return math.exp(-(delta * delta / 2.0) * (n - 1) / (1.0 + delta))
    gap = delta - math.log1p(delta)  # >= 0
    if variant == "janson1":
        if p_min == 1.0:
            return 1.0 / (1.0 + delta) if gap == 0.0 else 0.0
        return math.exp(mu * gap * math.log1p(-p_min)) / (1.0 + delta)
    if variant == "janson2":
        return math.exp(-p_min * mu * gap)
    x = delta * mu * p_min
    if variant == "scheideler":
        return math.exp(n * math.log1p(x / n) - x)
    # weak
    return math.exp(-x * x / (2.0 * n * (1.0 + x / n)))


def _lower_delta(variant: str, spec: GeomSumSpec, delta: float, lam: float) -> float:
    n, mu, p_min = spec.n, spec.mean(), spec.p_min()
    if variant == "ident_lower_strongest":
        return _ident_lower_strongest(spec, delta)
    if variant == "ident_lower_exp":
        return (1.0 - delta) ** n * math.exp(delta * n)
    if variant == "ident_lower_simple":
        return math.exp(-(delta * delta) * n / (2.0 - 4.0 * delta / 3.0))
    if variant == "ident_lower_add1":
        p = spec.probs[0]
        if delta >= 1.0:
            return 0.0
        return math.exp(-2.0 * delta * delta * p * n / (1.0 - delta))
    if variant == "ident_lower_add2":
        p = spec.probs[0]
        return math.exp(-2.0 * p**3 * max(0.0, lam) ** 2 / n)
    if variant == "jlower":
        # (1-d)^(p_min mu) e^(d p_min mu): reduces to the identical-p form
        # (1-d)^n e^(d n), and tightens to the d^2/2 exponent below
        if delta == 1.0:
            return 0.0
        return math.exp(p_min * mu * (math.log1p(-delta) + delta))
    if variant == "jlower_mid":
        return math.exp(-(delta * delta) * mu * p_min / (2.0 - 4.0 * delta / 3.0))
    # jlower_simple
    return math.exp(-0.5 * delta * delta * mu * p_min)


def _ident_lower_strongest(spec: GeomSumSpec, delta: float) -> float:
    n, mu = spec.n, spec.mean()
    p = spec.probs[0]
    x = (1.0 - delta) * mu
    if x < n * (1.0 - 1e-12):
        return 0.0
    if x <= n * (1.0 + 1e-12):
        return p**n
    if delta == 0.0:
        return 1.0
    log_v = n * math.log1p(-delta) + (x - n) * (
        math.log1p(-delta) + math.log(mu - n) - math.log(x - n)
    )
    return math.exp(log_v)


def _harmonic_variant(spec: GeomSumSpec, t: float, C: float | None, q: TailQuery) -> BoundResult:
    """Harmonic success probabilities p_i >= C i/n with C <= 1:
    Pr[X >= (1+delta) n ln(n)/C] <= n^-delta."""
    bound_id = "geom.sum.harmonic"
    pre = []
    n = spec.n
    if C is None:
        C = min(1.0, min(p * n / (i + 1) for i, p in enumerate(spec.probs)))
    if C > 1.0:
        pre.append("need C <= 1")
    if C <= 0.0:
        pre.append("need C > 0")
    if not pre and any(p < C * (i + 1) / n - 1e-12 for i, p in enumerate(spec.probs)):
        pre.append("need p_i >= C i/n for all i")
    if n < 2:
        pre.append("needs n >= 2 (ln n must be positive)")
    if pre:
        return finish(bound_id, SECTION, 1.0, pre, q.describe())
    scale = n * math.log(n) / C
    delta = max(0.0, t / scale - 1.0)
    raw = float(n) ** (-delta)
    extras = {"C": C, "expectation_bound": n * harmonic(n) / C}
    return finish(bound_id, SECTION, raw, pre, q.describe(), extras=extras)


# ---------------------------------------------------------------------------
# coupon collector
# ---------------------------------------------------------------------------

COUPON_FORMS = ("upper", "upper_mult", "lower", "lower_mult", "witt_upper", "witt_lower")


def coupon_expectation(n: int) -> float:
    """E[T_n] = n H_n."""
    if n < 1:
        raise ValueError("need n >= 1")
    return n * harmonic(n)


def coupon_bound(n: int, eps: float, form: str) -> BoundResult:
    """Coupon collector tails for n types, deviation eps >= 0.

      upper       Pr[T >= n ln n + eps n]            <= exp(-eps)
      upper_mult  Pr[T >= (1+eps) n ln n]            <= n^-eps
      lower       Pr[T <= (n-1) ln n - eps (n-1)]    <= exp(-e^eps)
      lower_mult  Pr[T <= (1-eps)(n-1) ln n]         <= exp(-n^eps)
      witt_upper  Pr[T >= n H_n + eps n]  <= exp(-3 eps^2/pi^2) for
                  eps <= pi^2/6, else exp(-eps/4)   (Witt 2014)
      witt_lower  Pr[T <= n H_n - eps n]  <= exp(-3 eps^2/pi^2)
    """
    bound_id = f"coupon.{form}"
    pre = []
    if form not in COUPON_FORMS:
        pre.append(f"unknown form {form!r}")
    if n < 1:
        pre.append("need n >= 1")
    if eps < 0:
        pre.append("need eps >= 0")
    if pre:
        return finish(bound_id, SECTION_COUPON, 1.0, pre)
    log_n = math.log(n)
    if form == "upper":
        raw, event = math.exp(-eps), f"Pr[T >= {n * log_n + eps * n:g}]"
    elif form == "upper_mult":
        raw, event = float(n) ** (-eps) if n > 1 else 1.0, f"Pr[T >= {(1 + eps) * n * log_n:g}]"
    elif form == "lower":
        raw, event = math.exp(-math.exp(eps)), f"Pr[T <= {(n - 1) * log_n - eps * (n - 1):g}]"
    elif form == "lower_mult":
        raw, event = math.exp(-(float(n) ** eps)), f"Pr[T <= {(1 - eps) * (n - 1) * log_n:g}]"
    else:
        mean = coupon_expectation(n)
        if form == "witt_upper":
            if eps <= math.pi**2 / 6.0:
                raw = math.exp(-3.0 * eps * eps / math.pi**2)
            else:
                raw = math.exp(-eps / 4.0)
            event = f"Pr[T >= {mean + eps * n:g}]"
        else:
            raw = math.exp(-3.0 * eps * eps / math.pi**2)
            event = f"Pr[T <= {mean - eps * n:g}]"
    return finish(bound_id, SECTION_COUPON, raw, pre, event)


def coupon_bounds(n: int, q: TailQuery, form: str | None = None) -> tuple[float, BoundResult]:
    """Exact expectation n H_n plus the requested tail bound.

    The query's threshold is mapped onto the matching form's deviation; a
    negative deviation for the non-vacuous lower forms is a precondition
    violation rather than a clamp.
    """
    expectation = coupon_expectation(n)
    if form is None:
        form = "upper" if q.direction == UPPER else "lower"
    log_n = math.log(n) if n > 1 else 0.0
    t = q.threshold(expectation)
    if form == "upper":
        eps = (t - n * log_n) / n
        eps = max(0.0, eps)  # vacuous-safe: exp(0) = 1
    elif form == "upper_mult":
        eps = max(0.0, t / (n * log_n) - 1.0) if n > 1 else 0.0
    elif form == "lower":
        eps = ((n - 1) * log_n - t) / (n - 1) if n > 1 else -1.0
    elif form == "lower_mult":
        eps = 1.0 - t / ((n - 1) * log_n) if n > 1 else -1.0
    elif form in ("witt_upper", "witt_lower"):
        eps = max(0.0, (t - expectation) / n if form == "witt_upper" else (expectation - t) / n)
    else:
        return expectation, coupon_bound(n, 0.0, form)
    if eps < 0:
        result = finish(
            f"coupon.{form}",
            SECTION_COUPON,
            1.0,
            [f"threshold {t:g} outside the form's deviation range"],
            q.describe(),
        )
        return expectation, result
    return expectation, coupon_bound(n, eps, form)
