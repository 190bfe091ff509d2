"""Structural properties of omega-posets as three-valued checks.

Each check inspects levels up to `depth` (default: what the truncation can
answer with one level of lookahead).  Fails is always backed by a witness
that stays a violation in every extension; Holds covers the inspected prefix
unless `complete` is set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .combinatorics import oracle
from .errors import DepthExceeded, SizeBound
from .poset import ElementId, TruncatedPoset, default_depth, lookahead
from .stars import check_regular, star_below
from .verdict import Verdict, conjoin, fails, holds, unknown


@dataclass(frozen=True)
class PredicateReport:
    name: str
    verdict: Verdict
    details: tuple[Any, ...] = ()


def _depth(p: TruncatedPoset, depth: int | None) -> int:
    return default_depth(p) if depth is None else depth


def _upto(p: TruncatedPoset, d: int):
    """Elements whose home level is at most d."""
    for n in range(min(d, p.depth) + 1):
        for e in p.level(n):
            if e.level == n:
                yield e


def check_graded(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Covers drop rank by exactly one; covers are exact since up-sets are complete."""
    d = min(_depth(p, depth), p.depth)
    for x in _upto(p, d):
        for u in sorted(p.upper_covers(x)):
            if p.rank(x) != p.rank(u) + 1:
                return fails((x, u), "rank_gap", exhausted_depth=d, complete=True,
                             note=f"{p.name(x)} is covered by {p.name(u)} but ranks are "
                                  f"{p.rank(x)} and {p.rank(u)}")
    complete = p.finite or ("graded" in p.flags and "graded" not in p.assumed)
    return holds(None, "cover_scan", exhausted_depth=d, complete=complete,
                 assumptions=p.used("graded"))


def check_weakly_graded(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Consecutive levels share only atoms."""
    d = min(_depth(p, depth), p.depth)
    pending = None
    for n in range(d):
        shared = sorted(p.level_set(n) & p.level_set(n + 1))
        for x in shared:
            if x in p.known_atoms():
                continue
            if p.down(x):
                return fails(x, "shared_non_atom", exhausted_depth=d, complete=True,
                             note=f"{p.name(x)} lies in levels {n} and {n + 1} but has lower bounds")
            if p.is_atom(x) is False:
                return fails(x, "shared_non_atom", exhausted_depth=d, complete=True)
            pending = pending or x
    if pending is not None:
        return unknown(d, f"atomhood of {p.name(pending)} is not decided by the truncation")
    return holds(None, "level_scan", exhausted_depth=d, complete=p.finite)


def _private_lower(v: TruncatedPoset, x: ElementId) -> ElementId | None:
    target = v.up(x) | {x}
    for q in sorted(v.down(x)):
        if v.up(q) == target:
            return q
    return None


def check_predetermined(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Every non-atom x has some q < x whose strict up-set is exactly the up-set of x."""
    d = _depth(p, depth)
    v = lookahead(p, d)
    exact = v.finite or "graded" in v.flags
    witness: dict[ElementId, ElementId] = {}
    pending = None
    for x in _upto(v, d):
        atom = v.is_atom(x)
        if atom:
            continue
        q = _private_lower(v, x)
        if q is not None:
            witness[x] = q
            continue
        if atom is None or x.level >= v.depth or not exact:
            pending = pending or x
            continue
        return fails(x, "no_private_lower", exhausted_depth=d, complete=True,
                     note=f"no q < {v.name(x)} has exactly its up-set above it",
                     assumptions=p.used("graded"))
    if pending is not None:
        return unknown(d, f"no private lower bound of {v.name(pending)} within the truncation")
    return holds(witness, "private_lower", exhausted_depth=d, complete=p.finite,
                 assumptions=p.used("graded", "atomless"))


def check_level_injective(p: TruncatedPoset, m: int, n: int) -> Verdict:
    """Each x in level m has some y in level n whose upper bounds in level m are just x."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    v = p.deepen(n)
    lm = v.level_set(m)
    owner: dict[ElementId, ElementId] = {}
    for y in v.level(n):
        hits = (v.up(y) | {y}) & lm
        if len(hits) == 1:
            (x,) = hits
            owner.setdefault(x, y)
    for x in v.level(m):
        if x not in owner:
            return fails((m, n, x), "no_private_element", exhausted_depth=n, complete=True,
                         note=f"every element of level {n} below {v.name(x)} is below another "
                              f"element of level {m}")
    return holds((m, n, owner), "private_map", exhausted_depth=n, complete=True)


def check_level_injective_all(p: TruncatedPoset, depth: int | None = None) -> PredicateReport:
    # same reach as check_predetermined: one level past depth
    want = _depth(p, depth) + 1
    d = want if p.growable else min(want, p.depth)
    details = []
    for n in range(d + 1):
        for m in range(n + 1):
            v = check_level_injective(p, m, n)
            details.append((m, n, v.outcome))
            if v.fails:
                return PredicateReport("level-injective", v, tuple(details))
    verdict = holds(None, "level_pairs", exhausted_depth=d, complete=p.finite)
    return PredicateReport("level-injective", verdict, tuple(details))


def check_branching(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """No element has exactly one lower cover."""
    d = _depth(p, depth)
    v = lookahead(p, d)
    graded = "graded" in v.flags
    pending = None
    for x in _upto(v, d):
        if v.finite:
            preds = sorted(v.lower_covers(x))
        elif graded:
            if x.level + 1 > v.depth:
                pending = pending or x
                continue
            nxt = v.level_set(x.level + 1)
            preds = sorted(q for q in v.down(x) if q in nxt)
        else:
            preds = sorted(v.lower_covers(x))
            if len(preds) < 2:
                pending = pending or x
                continue
        if len(preds) == 1:
            return fails((x, preds[0]), "unique_predecessor", exhausted_depth=d, complete=True,
                         note=f"{v.name(x)} has the single predecessor {v.name(preds[0])}",
                         assumptions=p.used("graded"))
    if pending is not None:
        return unknown(d, f"predecessors of {v.name(pending)} may appear deeper")
    return holds(None, "predecessor_scan", exhausted_depth=d, complete=p.finite,
                 assumptions=p.used("graded"))


def _view_depth(p: TruncatedPoset, want: int) -> int:
    return want if p.growable else min(want, default_depth(p))


def check_prime_element(p: TruncatedPoset, x: ElementId, depth: int | None = None,
                        margin: int = 2, *, regular: Verdict | None = None) -> Verdict:
    """x lies in some minimal selector.

    Outside the finite case: if x is star-above some s <= x, any thread through
    s star-closes to a minimal selector containing x, provided the poset is
    regular.  That proviso is recorded in the assumptions.
    """
    d = _depth(p, depth)
    if p.finite:
        orc = oracle(p)
        if any(x in s for s in orc.minimal_selectors):
            return holds(x, "oracle_member", exhausted_depth=p.depth, complete=True)
        return fails(x, "oracle_empty", exhausted_depth=p.depth, complete=True,
                     note="no minimal selector contains the element")
    reg = regular if regular is not None else check_regular(p, d)
    if not reg.holds:
        return unknown(d, "regularity is not established, so star-closure gives no point")
    wd = _view_depth(p, max(d, x.level) + margin)
    v = lookahead(p, wd)
    for s in sorted(v.down(x) | {x}):
        if s.level > wd:
            break
        if star_below(p, s, x, wd).holds:
            return holds((s, x), "star_thread", exhausted_depth=wd,
                         assumptions=("regular",) + reg.assumptions,
                         note="a thread through the first element star-closes onto the second")
    return unknown(wd, "no element below is star-below it within the depth")


def check_prime(p: TruncatedPoset, depth: int | None = None, margin: int = 2) -> Verdict:
    d = _depth(p, depth)
    if p.finite:
        orc = oracle(p)
        union = frozenset().union(*orc.minimal_selectors)
        for x in p.elements():
            if x not in union:
                return fails(x, "oracle_empty", exhausted_depth=p.depth, complete=True)
        return holds(None, "oracle_union", exhausted_depth=p.depth, complete=True)
    reg = check_regular(p, d)
    out = []
    for x in _upto(p, d):
        v = check_prime_element(p, x, d, margin, regular=reg)
        if not v.holds:
            return v
        out.append(v)
    return conjoin(out, d, kind="star_thread_scan")


def _cap_order_counter(p: TruncatedPoset):
    orc = oracle(p)
    for a in p.elements():
        for b in p.elements():
            if not p.leq(a, b) and orc.cap_order_leq({a}, {b}):
                return a, b
    return None


def check_cap_determined_sufficient(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Branching and predetermined suffice; branching is necessary."""
    d = _depth(p, depth)
    if p.finite:
        bad = _cap_order_counter(p)
        if bad is not None:
            return fails(bad, "cap_below_not_below", exhausted_depth=p.depth, complete=True,
                         note="the first element is cap-below the second without being below it")
        return holds(None, "exhaustive", exhausted_depth=p.depth, complete=True)
    branching = check_branching(p, d)
    if branching.fails:
        return branching
    pred = check_predetermined(p, d)
    if branching.holds and pred.holds:
        return holds(None, "branching_predetermined", exhausted_depth=d,
                     assumptions=tuple(sorted(set(branching.assumptions) | set(pred.assumptions))))
    return unknown(d, "neither the sufficient nor the necessary condition is decided")


# implication diagram between the properties above

IMPLICATIONS: tuple[tuple[tuple[str, ...], str], ...] = (
    (("predetermined", "branching"), "cap-determined"),
    (("predetermined", "branching"), "predetermined"),
    (("level-injective", "graded"), "predetermined"),
    (("level-injective", "graded"), "graded"),
    (("predetermined",), "level-injective"),
    (("level-injective",), "prime"),
    (("level-injective",), "weakly-graded"),
    (("graded",), "weakly-graded"),
    (("cap-determined",), "branching"),
    (("cap-determined",), "prime"),
)

PROPERTY_CHECKS: dict[str, Callable[..., Verdict]] = {
    "graded": check_graded,
    "weakly-graded": check_weakly_graded,
    "predetermined": check_predetermined,
    "level-injective": lambda p, d=None: check_level_injective_all(p, d).verdict,
    "branching": check_branching,
    "prime": check_prime,
    "cap-determined": check_cap_determined_sufficient,
}


def property_profile(p: TruncatedPoset, depth: int | None = None) -> dict[str, Verdict]:
    out = {}
    for name, fn in PROPERTY_CHECKS.items():
        try:
            out[name] = fn(p, depth)
        except (DepthExceeded, SizeBound) as exc:
            out[name] = unknown(_depth(p, depth), str(exc))
    return out


def implication_violations(profile: dict[str, Verdict]) -> list[tuple[tuple[str, ...], str]]:
    """Arrows whose premises all Hold while the conclusion Fails."""
    bad = []
    for premises, conclusion in IMPLICATIONS:
        if all(profile[a].holds for a in premises) and profile[conclusion].fails:
            bad.append((premises, conclusion))
    return bad
