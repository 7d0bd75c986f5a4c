"""Elementary inequalities: exp/polynomial switches, Bernoulli and
Weierstrass products, harmonic numbers, binomial-coefficient estimates, and
the Robbins factorial bracket.

`elementary_suite` evaluates one named inequality on a grid and reports the
points where it is violated by more than the slack.  Large-number
inequalities (factorials, binomial coefficients) are compared in log space;
the Robbins bracket is evaluated in 40-digit arithmetic because its upper
edge is sharper than double precision for large n.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import mpmath

SECTION = "elementary-inequalities"

ROBBINS_CONST = 1.08690405


class DomainError(ValueError):
    """A grid point lies outside an inequality's stated domain."""


@dataclass(frozen=True)
class Violation:
    inequality: str
    point: tuple
    margin: float  # how far above the slack the violated side lies


def harmonic(n: int) -> float:
    """H_n = sum_{k=1..n} 1/k, compensated summation."""
    if n < 1 or int(n) != n:
        raise ValueError("need integer n >= 1")
    return math.fsum(1.0 / k for k in range(1, int(n) + 1))


@dataclass(frozen=True)
class WeierstrassBounds:
    lower: float  # 1 - P  <= prod(1 - p_i)
    upper_pairwise: float  # prod(1 - p_i) <= 1 - P + sum_{i<j} p_i p_j
    upper_quad: float  # ... <= 1 - P + P^2/2
    upper_plusform: float  # prod(1 + p_i) <= 1/(1 - P), needs P < 1
    plus_lower: float  # 1 + P <= prod(1 + p_i)
    plusform_valid: bool
    minus_product: float
    plus_product: float


def weierstrass_bounds(p: Sequence[float]) -> WeierstrassBounds:
    """Weierstrass product brackets for prod(1 - p_i) and prod(1 + p_i)."""
    p = [float(v) for v in p]
    if any(v < 0.0 or v > 1.0 for v in p):
        raise ValueError("probabilities must lie in [0, 1]")
    P = math.fsum(p)
    pair_sum = (P * P - math.fsum(v * v for v in p)) / 2.0
    minus_product = math.prod(1.0 - v for v in p)
    plus_product = math.prod(1.0 + v for v in p)
    plus_valid = P < 1.0
    return WeierstrassBounds(
        lower=1.0 - P,
        upper_pairwise=1.0 - P + pair_sum,
        upper_quad=1.0 - P + P * P / 2.0,
        upper_plusform=1.0 / (1.0 - P) if plus_valid else math.inf,
        plus_lower=1.0 + P,
        plusform_valid=plus_valid,
        minus_product=minus_product,
        plus_product=plus_product,
    )


# ---------------------------------------------------------------------------
# the named-inequality suite
# ---------------------------------------------------------------------------
#
# Each entry maps an id to (domain check, margin function).  The margin
# function returns an iterable of (lhs - rhs) values, one per <= link in the
# chain; a link is violated when its margin exceeds the slack.


def _margins_one_plus_x(x):
    return (1.0 + x - math.exp(x),)


def _margins_exp_upper_frac(x):
    return (math.exp(x) - 1.0 / (1.0 - x),)


def _margins_exp_half(x):
    return (math.exp(-x) - (1.0 - x / 2.0),)


def _margins_exp_upper_quad(x):
    return (math.exp(x) - (1.0 + x + x * x),)


def _margins_one_minus_pow(point):
    x, y = point
    return ((1.0 - x) ** y - 1.0 / (1.0 + x * y),)


def _margins_exp_frac_lower(x):
    return (math.exp(x / (1.0 + x)) - (1.0 + x), (1.0 + x) - math.exp(x))


def _margins_exp_ratio_pow(point):
    x, y = point
    mid = (1.0 + x / y) ** y
    return (math.exp(x * y / (x + y)) - mid, mid - math.exp(x))


def _margins_exp_minus_x_x2(x):
    return (math.exp(-x - x * x) - (1.0 - x),)


def _pow_0_0_is_1(base: float, exponent: float) -> float:
    if base == 0.0 and exponent == 0.0:
        return 1.0
    return base**exponent


def _margins_sbm_one_over_e(r):
    inv_e = 1.0 / math.e
    lo = _pow_0_0_is_1(1.0 - 1.0 / r, r)
    hi = _pow_0_0_is_1(1.0 - 1.0 / r, r - 1.0)
    return (lo - inv_e, inv_e - hi)


def _margins_sbm_general(point):
    r, s = point
    lo = _pow_0_0_is_1(1.0 - s / r, r)
    hi = _pow_0_0_is_1(1.0 - s / r, r - s)
    e_s = math.exp(-s)
    return (lo - e_s, e_s - hi)


def _margins_sbm_monotone(point):
    s, r = point
    a = _pow_0_0_is_1(1.0 - 1.0 / s, s)
    b = _pow_0_0_is_1(1.0 - 1.0 / r, r)
    c = _pow_0_0_is_1(1.0 - 1.0 / s, s - 1.0)
    d = _pow_0_0_is_1(1.0 - 1.0 / r, r - 1.0)
    return (a - b, d - c)


def _margins_bernoulli(point):
    x, r = point
    return (1.0 + r * x - _pow_0_0_is_1(1.0 + x, r),)


def _margins_weierstrass_minus(p):
    w = weierstrass_bounds(p)
    return (
        w.lower - w.minus_product,
        w.minus_product - w.upper_pairwise,
        w.upper_pairwise - w.upper_quad,
    )


def _margins_weierstrass_plus(p):
    w = weierstrass_bounds(p)
    return (w.plus_lower - w.plus_product, w.plus_product - w.upper_plusform)


def _margins_harmonic_bracket(n):
    h = harmonic(n)
    return (math.log(n) - h, h - (1.0 + math.log(n)))


def _margins_harmonic_monotone(n):
    n = int(n)
    return ((harmonic(n + 1) - math.log(n + 1)) - (harmonic(n) - math.log(n)),)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_fact(n: int) -> float:
    return math.lgamma(n + 1)


def _margins_binom_basics(point):
    n, k = (int(v) for v in point)
    lc = _log_comb(n, k)
    return (
        lc - n * math.log(2.0),
        k * (math.log(n) - math.log(k)) - lc,
        lc - k * math.log(n),
        lc - (k * math.log(n) - _log_fact(k)),
        (k * math.log(n) - _log_fact(k)) - k * (1.0 + math.log(n) - math.log(k)),
    )


def _margins_binom_middle(point):
    n, k = (int(v) for v in point)
    mid = _log_comb(n, n // 2)
    cap = n * math.log(2.0) + 0.5 * (math.log(2.0) - math.log(n))
    return (_log_comb(n, k) - mid, mid - cap)


def _margins_binom_middle_sharp(n):
    n = int(n)
    mid = _log_comb(n, n // 2)
    cap = n * math.log(2.0) + 0.5 * (math.log(2.0) - math.log(math.pi * n))
    return (mid - cap,)


def _margins_factorial_bracket(k):
    k = int(k)
    lf = _log_fact(k)
    return (k * (math.log(k) - 1.0) - lf, lf - k * math.log(k))


@functools.lru_cache(maxsize=None)
def _log_robbins_ratio(n: int) -> float:
    """ln(n!) - ln(sqrt(2 pi n) (n/e)^n) at 40 digits."""
    with mpmath.workdps(40):
        stirling = 0.5 * mpmath.log(2 * mpmath.pi * n) + n * mpmath.log(n) - n
        return float(mpmath.loggamma(n + 1) - stirling)


def _margins_robbins(n):
    n = int(n)
    r = _log_robbins_ratio(n)
    lo = 1.0 / (12.0 * n + 1.0)
    hi = 1.0 / (12.0 * n)
    return (0.0 - lo, lo - r, r - hi, hi - math.log(ROBBINS_CONST))


def _margins_robbins_const(_):
    return (1.0 / 12.0 - math.log(ROBBINS_CONST),)


def _is_int(v) -> bool:
    return float(v) == int(v)


_SUITE: dict[str, tuple[Callable, Callable]] = {
    "one_plus_x": (lambda x: True, _margins_one_plus_x),
    "exp_upper_frac": (lambda x: x < 1.0, _margins_exp_upper_frac),
    "exp_half": (lambda x: 0.0 <= x <= 1.0, _margins_exp_half),
    "exp_upper_quad": (lambda x: x < 1.79, _margins_exp_upper_quad),
    "one_minus_pow": (lambda p: 0.0 <= p[0] <= 1.0 and p[1] > 0.0, _margins_one_minus_pow),
    "exp_frac_lower": (lambda x: x > -1.0, _margins_exp_frac_lower),
    "exp_ratio_pow": (lambda p: p[0] > 0.0 and p[1] > 0.0, _margins_exp_ratio_pow),
    "exp_minus_x_x2": (lambda x: 0.0 <= x <= 2.0 / 3.0, _margins_exp_minus_x_x2),
    "sbm_one_over_e": (lambda r: r >= 1.0, _margins_sbm_one_over_e),
    "sbm_general": (lambda p: p[0] >= 1.0 and 0.0 <= p[1] <= p[0], _margins_sbm_general),
    "sbm_monotone": (lambda p: 1.0 <= p[0] <= p[1], _margins_sbm_monotone),
    "bernoulli": (lambda p: p[0] >= -1.0 and (p[1] == 0.0 or p[1] >= 1.0), _margins_bernoulli),
    "weierstrass_minus": (lambda p: all(0.0 <= v <= 1.0 for v in p), _margins_weierstrass_minus),
    "weierstrass_plus": (
        lambda p: all(0.0 <= v <= 1.0 for v in p) and math.fsum(p) < 1.0,
        _margins_weierstrass_plus,
    ),
    "harmonic_bracket": (lambda n: _is_int(n) and n >= 1, _margins_harmonic_bracket),
    "harmonic_monotone": (lambda n: _is_int(n) and n >= 1, _margins_harmonic_monotone),
    "binom_basics": (
        lambda p: _is_int(p[0]) and _is_int(p[1]) and 1 <= p[1] <= p[0],
        _margins_binom_basics,
    ),
    "binom_middle": (
        lambda p: _is_int(p[0]) and _is_int(p[1]) and 1 <= p[1] <= p[0],
        _margins_binom_middle,
    ),
    "binom_middle_sharp": (lambda n: _is_int(n) and n >= 1, _margins_binom_middle_sharp),
    "factorial_bracket": (lambda k: _is_int(k) and k >= 1, _margins_factorial_bracket),
    "robbins": (lambda n: _is_int(n) and n >= 1, _margins_robbins),
    "robbins_const": (lambda _: True, _margins_robbins_const),
}

INEQUALITY_IDS = tuple(sorted(_SUITE))

# Inequalities whose margins are computed in log space (their raw values
# overflow doubles long before the stated domains end).
LOG_SPACE_IDS = frozenset(
    {"binom_basics", "binom_middle", "binom_middle_sharp", "factorial_bracket", "robbins", "robbins_const"}
)


def elementary_suite(inequality: str, grid: Iterable, slack: float = 1e-12) -> list[Violation]:
    """Check one inequality on every grid point; return the violations.

    Points outside the stated domain are rejected with DomainError, not
    silently skipped.
    """
    if inequality not in _SUITE:
        raise KeyError(f"unknown inequality {inequality!r}; known: {', '.join(INEQUALITY_IDS)}")
    domain, margins = _SUITE[inequality]
    out: list[Violation] = []
    for point in grid:
        if not domain(point):
            raise DomainError(f"{inequality}: point {point!r} outside the stated domain")
        for margin in margins(point):
            if margin > slack:
                key = tuple(point) if isinstance(point, (tuple, list)) else (point,)
                out.append(Violation(inequality, key, margin - slack))
    return out
