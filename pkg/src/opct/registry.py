"""Named whole-poset checks shared by the command line and witness replay."""

from __future__ import annotations

from typing import Callable

from .poset import TruncatedPoset, default_depth, lookahead
from .predicates import PROPERTY_CHECKS
from .spectrum import check_tangled_poset, connectivity_report
from .stars import check_edge_witnessing, check_regular, check_star_refining, is_snake
from .verdict import Verdict, conjoin


def check_snakes(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Every level up to depth is a snake."""
    d = default_depth(p) if depth is None else depth
    v = lookahead(p, d)
    return conjoin((is_snake(p, v.level(n), d) for n in range(min(d, v.depth) + 1)), d,
                   kind="level_snakes")


CHECKS: dict[str, Callable[..., Verdict]] = dict(PROPERTY_CHECKS)
CHECKS.update({
    "regular": check_regular,
    "edge-witnessing": check_edge_witnessing,
    "star-refining": check_star_refining,
    "snake": check_snakes,
    "connectivity": connectivity_report,
    "tangled": check_tangled_poset,
})


def run_check(name: str, p: TruncatedPoset, depth: int | None = None) -> Verdict:
    try:
        fn = CHECKS[name]
    except KeyError:
        raise KeyError(f"unknown predicate {name!r}") from None
    return fn(p, depth)
