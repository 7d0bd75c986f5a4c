"""Machine-readable catalog: every bound has a stable string identifier
mapping to a parameter schema, a topical section label, and an evaluator
callable.  The CLI and the verification reports use these ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from ..dist import GeomSumSpec
from ..query import TailQuery
from . import binomial, chernoff, classic, geometric
from .result import BoundResult, ExpectationBound


@dataclass(frozen=True)
class CatalogEntry:
    bound_id: str
    section: str
    params: dict[str, str]  # flag name -> type label
    fn: Callable
    summary: str


def _query_from_kwargs(direction: str, kw) -> TailQuery:
    ref_kw = {}
    if kw.get("mu_plus") is not None:
        ref_kw = {"reference": "upper_estimate", "ref_value": float(kw["mu_plus"])}
    elif kw.get("mu_minus") is not None:
        ref_kw = {"reference": "lower_estimate", "ref_value": float(kw["mu_minus"])}
    if kw.get("t") is not None:
        if ref_kw:
            raise ValueError("absolute threshold ignores reference estimates")
        return TailQuery(direction, "absolute", float(kw["t"]))
    if kw.get("lam") is not None:
        return TailQuery(direction, "additive", float(kw["lam"]), **ref_kw)
    if kw.get("delta") is not None:
        return TailQuery(direction, "multiplicative", float(kw["delta"]), **ref_kw)
    raise ValueError("need one of --t, --lam, --delta")


_QUERY_PARAMS = {"t": "float?", "lam": "float?", "delta": "float?"}

REGISTRY: dict[str, CatalogEntry] = {}


def _register(bound_id, section, params, fn, summary):
    REGISTRY[bound_id] = CatalogEntry(bound_id, section, params, fn, summary)


# -- moment methods ---------------------------------------------------------

_register(
    "markov",
    classic.SECTION,
    {"mu": "float", **_QUERY_PARAMS},
    lambda **kw: classic.markov(kw["mu"], _query_from_kwargs("upper", kw)),
    "Markov: Pr[X >= t] <= mu/t for non-negative X",
)
_register(
    "markov.reverse",
    classic.SECTION,
    {"mu": "float", "u": "float", "t": "float"},
    lambda **kw: classic.reverse_markov(kw["mu"], kw["u"], kw["t"]),
    "Reverse Markov: Pr[X <= t] <= (u - mu)/(u - t) for X <= u",
)
for _variant in ("chebyshev", "cantelli"):
    _register(
        f"moment.{_variant}",
        classic.SECTION,
        {"var": "float", "mu": "float?", **_QUERY_PARAMS, "direction": "str?"},
        (lambda v: lambda **kw: classic.chebyshev_family(
            kw["var"], _query_from_kwargs(kw.get("direction", "upper"), kw), v, kw.get("mu")
        ))(_variant),
        f"{_variant} deviation bound from the variance",
    )
_register(
    "moment.second",
    classic.SECTION,
    {"mu": "float", "var": "float"},
    lambda **kw: classic.second_moment(kw["mu"], kw["var"])[0],
    "Second moment method: Pr[X <= 0] <= Var/mu^2",
)
_register(
    "moment.second.ex2",
    classic.SECTION,
    {"mu": "float", "var": "float", "ex2": "float?"},
    lambda **kw: classic.second_moment(kw["mu"], kw["var"], kw.get("ex2"))[1],
    "Second moment method: Pr[X = 0] <= Var/E[X^2]",
)
_register(
    "union.bonferroni",
    classic.SECTION,
    {"probs": "list[float]", "pair_probs": "list[float]?", "k": "int?"},
    lambda **kw: classic.union_bonferroni(kw["probs"], kw.get("pair_probs"), int(kw.get("k", 1))),
    "Union bound (k=1) and second Bonferroni lower bound (k=2)",
)
_register(
    "condbinom.upper",
    classic.SECTION,
    {"n": "int", "p": "float", "k": "int"},
    lambda **kw: classic.conditional_binomial_ub(int(kw["n"]), kw["p"], int(kw["k"])),
    "E[X | X >= k] <= k + (n-k)p for X ~ Bin(n, p)",
)
for _form in ("additive_up", "additive_low", "mult_up", "mult_low"):
    _register(
        f"taile.{_form}",
        classic.SECTION,
        {"alpha": "float", "beta": "float", "T": "float"},
        (lambda f: lambda **kw: classic.tail_to_expectation(kw["alpha"], kw["beta"], kw["T"], f))(_form),
        "expectation bound from an exponential tail bound",
    )

# -- Chernoff family --------------------------------------------------------

for _variant in chernoff.MULT_UPPER_VARIANTS:
    _register(
        f"chernoff.mult.upper.{_variant}",
        chernoff.SECTION_MULT,
        {"mu": "float", "delta": "float", "n": "int?"},
        (lambda v: lambda **kw: chernoff.mult_upper(kw["mu"], kw["delta"], v, kw.get("n")))(_variant),
        "multiplicative upper-tail Chernoff bound",
    )
for _variant in chernoff.MULT_LOWER_VARIANTS:
    _register(
        f"chernoff.mult.lower.{_variant}",
        chernoff.SECTION_MULT,
        {"mu": "float", "delta": "float", "n": "int?"},
        (lambda v: lambda **kw: chernoff.mult_lower(kw["mu"], kw["delta"], v, kw.get("n")))(_variant),
        "multiplicative lower-tail Chernoff bound",
    )
_register(
    "chernoff.additive",
    chernoff.SECTION_ADD,
    {"lam": "float", "n": "int?", "ranges": "list[float]?", "direction": "str?"},
    lambda **kw: chernoff.additive(
        kw["lam"], kw.get("n"), kw.get("ranges"), kw.get("direction", "upper")
    ),
    "additive Hoeffding bound exp(-2 lam^2 / sum c_i^2)",
)
for _variant in chernoff.VARIANCE_VARIANTS:
    _register(
        f"chernoff.var.{_variant}",
        chernoff.SECTION_VAR,
        {
            "sigma2": "float",
            "b": "float",
            "lam": "float?",
            "n": "int?",
            "direction": "str?",
            "range_side": "str?",
            "mu": "float?",
            "delta": "float?",
        },
        (lambda v: lambda **kw: chernoff.variance_bound(
            kw["sigma2"],
            kw["b"],
            kw.get("lam", 0.0),
            v,
            kw.get("n"),
            kw.get("direction", "upper"),
            kw.get("range_side", "both"),
            kw.get("mu"),
            kw.get("delta"),
        ))(_variant),
        "variance-based (Bernstein-type) Chernoff bound",
    )
for _variant in ("bounded_diff", "bounded_cond_exp", "azuma"):
    _register(
        f"martingale.{_variant}",
        chernoff.SECTION_MART,
        {"c": "list[float]", "lam": "float", "two_sided": "bool?"},
        (lambda v: lambda **kw: chernoff.martingale(
            kw["c"], kw["lam"], v, bool(kw.get("two_sided", False))
        ))(_variant),
        "bounded-influence concentration bound",
    )
_register(
    "superexp.solve",
    chernoff.SECTION_SOLVE,
    {"t": "float"},
    lambda **kw: chernoff.solve_delta_superexp(kw["t"]),
    "delta with (e/delta)^delta <= 1/t",
)
_register(
    "sbm.tail_k",
    chernoff.SECTION_SOLVE,
    {"alpha": "float", "k": "float"},
    lambda **kw: chernoff.sbm_tail(kw["alpha"], kw["k"]),
    "standard-bit-mutation flip tail (e alpha/k)^k",
)
_register(
    "sbm.quantile_p",
    chernoff.SECTION_SOLVE,
    {"alpha": "float", "p": "float"},
    lambda **kw: chernoff.sbm_quantile(kw["alpha"], kw["p"]),
    "smallest k with Pr[flips >= k] <= p",
)
_register(
    "sbm.quantile_pT",
    chernoff.SECTION_SOLVE,
    {"alpha": "float", "p": "float", "T": "int"},
    lambda **kw: chernoff.sbm_quantile(kw["alpha"], kw["p"], int(kw["T"])),
    "flip quantile union-bounded over T mutations",
)
_register(
    "runtime.needle",
    chernoff.SECTION_RUNTIME,
    {"n": "int", "c": "float", "eta": "float"},
    lambda **kw: chernoff.needle_failure(int(kw["n"]), kw["c"], kw["eta"]),
    "early-approach probability for unbiased search on a needle objective",
)
_register(
    "runtime.onemax_eps",
    chernoff.SECTION_RUNTIME,
    {"n": "int", "eps": "float"},
    lambda **kw: chernoff.onemax_runtime_lower(int(kw["n"]), kw["eps"]),
    "(1+1) EA lower-tail runtime bound exp(-n^eps)",
)

# -- geometric sums and coupon collector ------------------------------------

for _variant in geometric.VARIANTS:
    _direction = "upper" if _variant in geometric.UPPER_VARIANTS else "lower"
    _register(
        f"geom.sum.{_variant}",
        geometric.SECTION,
        {"probs": "list[float]", **_QUERY_PARAMS, "C": "float?"},
        (lambda v, d: lambda **kw: geometric.geom_sum_bound(
            GeomSumSpec(tuple(kw["probs"])), _query_from_kwargs(d, kw), v, kw.get("C")
        ))(_variant, _direction),
        "geometric-sum tail bound",
    )
for _form in geometric.COUPON_FORMS:
    _register(
        f"coupon.{_form}",
        geometric.SECTION_COUPON,
        {"n": "int", "eps": "float"},
        (lambda f: lambda **kw: geometric.coupon_bound(int(kw["n"]), kw["eps"], f))(_form),
        "coupon collector tail bound",
    )
_register(
    "coupon.expectation",
    geometric.SECTION_COUPON,
    {"n": "int"},
    lambda **kw: geometric.coupon_expectation(int(kw["n"])),
    "E[T_n] = n H_n",
)

# -- binomial specials and anti-concentration --------------------------------

for _variant in binomial.BINOMIAL_VARIANTS:
    _register(
        f"binom.{_variant}",
        binomial.SECTION_TAIL,
        {"n": "int", "p": "float", "k": "int"},
        (lambda v: lambda **kw: binomial.binomial_bounds(int(kw["n"]), kw["p"], int(kw["k"]), v))(_variant),
        "binomial-specific estimate",
    )
_register(
    "anticonc.sqrtn12",
    binomial.SECTION_ANTI,
    {"n": "int", "side": "str?"},
    lambda **kw: binomial.anti_fair_coin(int(kw["n"]), kw.get("side", "upper")),
    "fair-coin exceedance guarantee >= 1/8",
)
_register(
    "anticonc.general_sqrt",
    binomial.SECTION_ANTI,
    {"v0": "float", "c": "float?"},
    lambda **kw: binomial.anti_general_sqrt(kw["v0"], kw.get("c")),
    "explicit-constant sqrt(Var) exceedance guarantee",
)
_register(
    "anticonc.point_cap",
    binomial.SECTION_ANTI,
    {"var": "float"},
    lambda **kw: binomial.anti_point_cap(kw["var"]),
    "point-probability cap 2/sqrt(Var)",
)
_register(
    "anticonc.feige",
    binomial.SECTION_ANTI,
    {"delta": "float"},
    lambda **kw: binomial.anti_feige(kw["delta"]),
    "Feige's inequality",
)
for _variant in ("a", "b", "c", "d", "e"):
    _register(
        f"anticonc.exceed_{_variant}",
        binomial.SECTION_ANTI,
        {"n": "int", "p": "float"},
        (lambda v: lambda **kw: binomial.anti_exceed_mean(int(kw["n"]), kw["p"], v))(_variant),
        "exceed-the-expectation guarantee",
    )


def lookup(bound_id: str) -> CatalogEntry:
    try:
        return REGISTRY[bound_id]
    except KeyError:
        raise KeyError(bound_id) from None


def closest_ids(bound_id: str, limit: int = 5) -> list[str]:
    import difflib

    return difflib.get_close_matches(bound_id, REGISTRY.keys(), n=limit, cutoff=0.3)


def catalog_index() -> str:
    """JSON index: identifier -> parameter schema -> section label."""
    entries = {
        e.bound_id: {"section": e.section, "params": e.params, "summary": e.summary}
        for e in sorted(REGISTRY.values(), key=lambda e: e.bound_id)
    }
    return json.dumps({"schema": "conckit.catalog/1", "bounds": entries}, indent=2)


def all_ids() -> list[str]:
    return sorted(REGISTRY)
