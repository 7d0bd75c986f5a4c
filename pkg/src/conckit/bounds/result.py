"""Result types shared by every bound evaluator.

A bound never raises on a violated side condition; it returns a result with
``valid=False`` and the list of violated preconditions, so grid sweeps can
tabulate applicability ("bound inapplicable" is not "bound violated").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

UPPER_BOUND = "upper"  # value upper-bounds the stated probability
LOWER_BOUND = "lower"  # value lower-bounds the stated probability


@dataclass(frozen=True)
class BoundResult:
    bound_id: str
    value: float
    valid: bool
    violated_preconditions: tuple[str, ...]
    section: str
    event: str = ""
    kind: str = UPPER_BOUND
    clamped: bool = False
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError("bound value must be clamped to [0, 1]")
        if self.valid != (len(self.violated_preconditions) == 0):
            raise ValueError("valid flag must mirror the precondition list")


@dataclass(frozen=True)
class ExpectationBound:
    bound_id: str
    value: float
    valid: bool
    violated_preconditions: tuple[str, ...]
    section: str
    kind: str = UPPER_BOUND  # bound direction on the expectation
    vacuous: bool = False
    extras: dict = field(default_factory=dict)


def finish(
    bound_id: str,
    section: str,
    raw: float,
    pre: list[str],
    event: str = "",
    kind: str = UPPER_BOUND,
    extras: dict | None = None,
) -> BoundResult:
    """Clamp a raw formula value into [0, 1] and package it."""
    if raw != raw:  # NaN from a degenerate formula: fall back to the vacuous bound
        raw = 1.0 if kind == UPPER_BOUND else 0.0
    clamped = raw > 1.0 or raw < 0.0
    value = min(1.0, max(0.0, raw))
    if math.isinf(raw):
        value = 1.0 if raw > 0 else 0.0
    return BoundResult(
        bound_id=bound_id,
        value=value,
        valid=not pre,
        violated_preconditions=tuple(pre),
        section=section,
        event=event,
        kind=kind,
        clamped=clamped,
        extras=extras or {},
    )
