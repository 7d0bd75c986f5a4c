"""Tail queries: which deviation event a bound or an oracle is asked about.

A query fixes a direction (upper or lower tail), a deviation form (additive
lambda, multiplicative delta, or an absolute threshold) and a reference point
(the exact expectation, or a declared upper/lower estimate of it).
"""

from __future__ import annotations

from dataclasses import dataclass

UPPER = "upper"
LOWER = "lower"

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
ABSOLUTE = "absolute"

EXACT = "exact"
UPPER_ESTIMATE = "upper_estimate"
LOWER_ESTIMATE = "lower_estimate"


@dataclass(frozen=True)
class TailQuery:
    direction: str
    deviation: str
    amount: float
    reference: str = EXACT
    ref_value: float | None = None

    def __post_init__(self):
        if self.direction not in (UPPER, LOWER):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.deviation not in (ADDITIVE, MULTIPLICATIVE, ABSOLUTE):
            raise ValueError(f"unknown deviation form {self.deviation!r}")
        if self.reference not in (EXACT, UPPER_ESTIMATE, LOWER_ESTIMATE):
            raise ValueError(f"unknown reference kind {self.reference!r}")
        if self.deviation in (ADDITIVE, MULTIPLICATIVE) and self.amount < 0:
            raise ValueError("deviation amount must be >= 0")
        if self.reference != EXACT and self.ref_value is None:
            raise ValueError("estimated reference needs an explicit value")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def upper_additive(lam: float, **kw) -> "TailQuery":
        return TailQuery(UPPER, ADDITIVE, lam, **kw)

    @staticmethod
    def lower_additive(lam: float, **kw) -> "TailQuery":
        return TailQuery(LOWER, ADDITIVE, lam, **kw)

    @staticmethod
    def upper_multiplicative(delta: float, **kw) -> "TailQuery":
        return TailQuery(UPPER, MULTIPLICATIVE, delta, **kw)

    @staticmethod
    def lower_multiplicative(delta: float, **kw) -> "TailQuery":
        return TailQuery(LOWER, MULTIPLICATIVE, delta, **kw)

    @staticmethod
    def upper_at(t: float) -> "TailQuery":
        return TailQuery(UPPER, ABSOLUTE, t)

    @staticmethod
    def lower_at(t: float) -> "TailQuery":
        return TailQuery(LOWER, ABSOLUTE, t)

    # -- resolution --------------------------------------------------------

    def reference_point(self, mean: float) -> float:
        """The mu the query is anchored at: the exact mean or the estimate."""
        if self.reference == EXACT:
            return mean
        return float(self.ref_value)

    def threshold(self, mean: float) -> float:
        """Absolute event threshold t such that the query asks Pr[X >= t]
        (upper) or Pr[X <= t] (lower)."""
        if self.deviation == ABSOLUTE:
            return self.amount
        mu = self.reference_point(mean)
        if self.deviation == ADDITIVE:
            return mu + self.amount if self.direction == UPPER else mu - self.amount
        if self.direction == UPPER:
            return (1.0 + self.amount) * mu
        return (1.0 - self.amount) * mu

    def describe(self) -> str:
        ref = {EXACT: "mu", UPPER_ESTIMATE: "mu+", LOWER_ESTIMATE: "mu-"}[self.reference]
        sign = "+" if self.direction == UPPER else "-"
        cmp = ">=" if self.direction == UPPER else "<="
        if self.deviation == ABSOLUTE:
            return f"Pr[X {cmp} {self.amount:g}]"
        if self.deviation == ADDITIVE:
            return f"Pr[X {cmp} {ref} {sign} {self.amount:g}]"
        return f"Pr[X {cmp} (1{sign}{self.amount:g}){ref}]"
