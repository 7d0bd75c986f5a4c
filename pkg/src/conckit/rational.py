"""Exact-rational pmf computations for cross-checking the float pipeline.

Only intended for small instances (n <= 64 or so); everything is a
``fractions.Fraction`` so equality checks are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def binomial_pmf(n: int, p: Fraction) -> dict[int, Fraction]:
    if not (0 <= p <= 1):
        raise ValueError("p must lie in [0, 1]")
    q = 1 - p
    return {k: Fraction(math.comb(n, k)) * p**k * q ** (n - k) for k in range(n + 1)}


def poisson_binomial_pmf(probs: Sequence[Fraction]) -> dict[int, Fraction]:
    mass = {0: Fraction(1)}
    for p in probs:
        nxt: dict[int, Fraction] = {}
        for k, w in mass.items():
            nxt[k] = nxt.get(k, Fraction(0)) + w * (1 - p)
            nxt[k + 1] = nxt.get(k + 1, Fraction(0)) + w * p
        mass = nxt
    return mass


def hypergeom_pmf(N: int, n: int, m: int) -> dict[int, Fraction]:
    total = math.comb(N, n)
    lo = max(0, n + m - N)
    hi = min(n, m)
    return {
        k: Fraction(math.comb(m, k) * math.comb(N - m, n - k), total)
        for k in range(lo, hi + 1)
    }


def upper_tail(pmf: dict[int, Fraction], t: Fraction | int) -> Fraction:
    return sum((w for k, w in pmf.items() if k >= t), Fraction(0))


def lower_tail(pmf: dict[int, Fraction], t: Fraction | int) -> Fraction:
    return sum((w for k, w in pmf.items() if k <= t), Fraction(0))
