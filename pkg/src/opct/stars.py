"""Wedges, stars, the star-below relation, regularity and snakes.

Two elements wedge when they share a lower bound.  Inside a truncation a
common lower bound shows up as a common descendant in the deepest stored
level, so proving a wedge is a bitmask test.  Refuting one needs extra
knowledge: a finite_complete poset, a known atom, or graded plus
edge_witnessing (then same-level wedges are witnessed one level down).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .poset import ElementId, TruncatedPoset, default_depth, lookahead
from .verdict import FAILS, HOLDS, UNKNOWN, Outcome, Verdict, conjoin, fails, holds, unknown


class WedgeView:
    """Wedge decisions for questions about levels <= depth.

    Decisions are read off `view`, which is the poset itself or, for generated
    posets, the poset grown one level past `depth`.
    """

    def __init__(self, p: TruncatedPoset, depth: int | None = None, *, use_flags: bool = True):
        self.base = p
        self.depth = default_depth(p) if depth is None else depth
        self.view = lookahead(p, self.depth)
        self.masks = self.view.below_masks(self.view.depth)
        flags = self.view.flags
        self.flag_rule = use_flags and "graded" in flags and "edge_witnessing" in flags
        self.finite = self.view.finite
        self.atoms = self.view.known_atoms()
        self.assumptions = p.used("graded", "edge_witnessing", "finite_complete", "atomless")

    @classmethod
    def of(cls, p: TruncatedPoset, depth: int | None = None, *, use_flags: bool = True) -> "WedgeView":
        d = default_depth(p) if depth is None else depth
        key = ("wedgeview", d, use_flags)
        got = p._cache.get(key)
        if got is None:
            got = p._cache[key] = cls(p, d, use_flags=use_flags)
        return got

    def state(self, x: ElementId, y: ElementId) -> Outcome:
        v = self.view
        if v.leq(x, y) or v.leq(y, x) or self.masks[x] & self.masks[y]:
            return HOLDS
        if self.finite or x in self.atoms or y in self.atoms:
            return FAILS
        if self.flag_rule and max(x.level, y.level) + 1 <= v.depth:
            return FAILS
        return UNKNOWN

    def witness(self, x: ElementId, y: ElementId) -> ElementId | None:
        """Shallowest common lower bound, lowest index first."""
        v = self.view
        if v.leq(x, y):
            return x
        if v.leq(y, x):
            return y
        for n in range(max(x.level, y.level), v.depth + 1):
            m = v.below_masks(n)
            common = m[x] & m[y]
            if common:
                return v.level(n)[(common & -common).bit_length() - 1]
        return None

    def verdict(self, x: ElementId, y: ElementId) -> Verdict:
        s = self.state(x, y)
        if s is HOLDS:
            return holds((x, y, self.witness(x, y)), "common_lower", exhausted_depth=self.depth)
        if s is FAILS:
            return fails((x, y), "no_common_lower", exhausted_depth=self.depth,
                         assumptions=self.assumptions if self.flag_rule else ())
        return unknown(self.depth, "a common lower bound may appear below the truncation")

    def wedges(self, x: ElementId, members: Iterable[ElementId]) -> tuple[frozenset, frozenset]:
        """(proved, undecided) members wedging x."""
        proved, undecided = [], []
        for c in members:
            s = self.state(c, x)
            if s is HOLDS:
                proved.append(c)
            elif s is UNKNOWN:
                undecided.append(c)
        return frozenset(proved), frozenset(undecided)


def wedge(p: TruncatedPoset, x: ElementId, y: ElementId, depth: int | None = None) -> Verdict:
    return WedgeView.of(p, depth).verdict(x, y)


@dataclass(frozen=True)
class Star:
    """Members of a cap wedging an element; `undecided` lists open queries."""

    element: ElementId
    proved: frozenset[ElementId]
    undecided: frozenset[ElementId]

    @property
    def exact(self) -> bool:
        return not self.undecided

    @property
    def upper(self) -> frozenset[ElementId]:
        return self.proved | self.undecided


def star(p: TruncatedPoset, x: ElementId, cap: Iterable[ElementId], depth: int | None = None) -> Star:
    proved, undecided = WedgeView.of(p, depth).wedges(x, cap)
    return Star(x, proved, undecided)


def _all_below(p: TruncatedPoset, s: Iterable[ElementId], q: ElementId) -> bool:
    return all(p.leq(x, q) for x in s)


def star_below(p: TruncatedPoset, x: ElementId, y: ElementId, depth: int | None = None) -> Verdict:
    """x is star-below y: the star of x in some cap lies below y."""
    wv = WedgeView.of(p, depth)
    v = wv.view
    for n in range(wv.depth + 1):
        proved, undecided = wv.wedges(x, v.level(n))
        if not undecided and _all_below(v, proved, y):
            return holds((x, y, n), "star_level", exhausted_depth=wv.depth, complete=True,
                         assumptions=wv.assumptions)
    if wv.finite:
        return fails((x, y), "star_escapes", exhausted_depth=wv.depth, complete=True,
                     note="the deepest level gives the smallest stars")
    return unknown(wv.depth, "no level within depth has its star below the target")


def _levels_above(v: TruncatedPoset, x: ElementId, n: int) -> frozenset[ElementId]:
    key = ("levels_above", x, n)
    got = v._cache.get(key)
    if got is None:
        lv = v.level_set(n)
        got = v._cache[key] = frozenset(u for u in (v.up(x) | {x}) if u in lv)
    return got


def bound_in_level(v: TruncatedPoset, s: Iterable[ElementId], n: int) -> ElementId | None:
    """First element of level n above every member of s."""
    cand: frozenset[ElementId] | None = None
    for x in s:
        above = _levels_above(v, x, n)
        cand = above if cand is None else cand & above
        if not cand:
            return None
    if cand is None:
        return v.level(n)[0]
    return min(cand)


def star_refines(p: TruncatedPoset, m: int, n: int, depth: int | None = None) -> Verdict:
    """Level m star-refines level n: each star in level m lies below one element of level n."""
    wv = WedgeView.of(p, max(m, depth if depth is not None else default_depth(p)))
    v = wv.view
    if not n <= m <= v.depth:
        raise ValueError(f"need n <= m <= depth, got n={n}, m={m}")
    lv = v.level(m)
    assignment: dict[ElementId, ElementId] = {}
    open_items = []
    for x in lv:
        proved, undecided = wv.wedges(x, lv)
        q = bound_in_level(v, proved | undecided, n)
        if q is not None:
            assignment[x] = q
            continue
        if bound_in_level(v, proved, n) is None:
            return fails((m, n, x), "star_straddles", exhausted_depth=wv.depth,
                         note=f"the star of {v.name(x)} in level {m} is below no element of level {n}")
        open_items.append(x)
    if open_items:
        return unknown(wv.depth, f"undecided wedges in level {m}")
    return holds((m, n, assignment), "star_refinement", exhausted_depth=wv.depth, complete=True,
                 assumptions=wv.assumptions)


def check_regular(p: TruncatedPoset, depth: int | None = None, skip_bound: int = 3) -> Verdict:
    """Every level up to depth - skip_bound is star-refined by a level at most skip_bound deeper."""
    d = default_depth(p) if depth is None else depth
    if p.finite:
        deepest = p.depth
        for n in range(deepest):
            v = star_refines(p, deepest, n, deepest)
            if not v.holds:
                return fails(n, "irregular_level", exhausted_depth=deepest, complete=True,
                             note=f"the atoms' stars do not refine level {n}")
        return holds({n: deepest - n for n in range(deepest)}, "regular_scan",
                     exhausted_depth=deepest, complete=True)
    found: dict[int, int] = {}
    for n in range(0, d - skip_bound + 1):
        for k in range(1, skip_bound + 1):
            if star_refines(p, n + k, n, d).holds:
                found[n] = k
                break
        else:
            return unknown(d, f"level {n} is not star-refined within {skip_bound} levels")
    return holds(found, "regular_scan", exhausted_depth=d,
                 note="levels up to depth - skip_bound are star-refined within the bound",
                 assumptions=p.used("graded", "edge_witnessing"))


def check_edge_witnessing(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Every proved same-level wedge has a common lower bound in the next level."""
    wv = WedgeView.of(p, depth, use_flags=False)
    v = wv.view
    top = min(wv.depth, v.depth - 1)
    for n in range(top + 1):
        lv = v.level(n)
        nxt = v.below_masks(n + 1)
        for i, x in enumerate(lv):
            for y in lv[i + 1:]:
                if wv.state(x, y) is HOLDS and not nxt[x] & nxt[y]:
                    return fails((x, y), "late_wedge", exhausted_depth=wv.depth,
                                 note=f"wedge in level {n} not witnessed in level {n + 1}")
    return holds(None, "edge_witness_scan", exhausted_depth=wv.depth,
                 complete=v.finite)


def check_star_refining(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    d = default_depth(p) if depth is None else depth
    out = []
    for n in range(d):
        v = star_refines(p, n + 1, n, d)
        if v.fails:
            return v
        out.append(v)
    return conjoin(out, d, kind="star_refining_scan")


def is_round(p: TruncatedPoset, s: Iterable[ElementId], depth: int | None = None) -> Verdict:
    """Each member is star-above some member."""
    s = sorted(set(s))
    wv = WedgeView.of(p, depth)
    witness: dict[ElementId, ElementId] = {}
    undecided = []
    for y in s:
        verdicts = [(x, star_below(p, x, y, wv.depth)) for x in s]
        hit = next((x for x, v in verdicts if v.holds), None)
        if hit is not None:
            witness[y] = hit
        elif all(v.fails for _, v in verdicts):
            return fails(y, "not_star_above", exhausted_depth=wv.depth, complete=True)
        else:
            undecided.append(y)
    if undecided:
        return unknown(wv.depth, "some members are not yet star-above another member")
    return holds(witness, "round_map", exhausted_depth=wv.depth)


def wedge_graph(p: TruncatedPoset, c: Iterable[ElementId], depth: int | None = None):
    """(vertices, proved edges, undecided edges) of the wedge graph on c."""
    wv = WedgeView.of(p, depth)
    vs = sorted(set(c))
    proved, open_ = set(), set()
    for i, x in enumerate(vs):
        for y in vs[i + 1:]:
            s = wv.state(x, y)
            if s is HOLDS:
                proved.add((x, y))
            elif s is UNKNOWN:
                open_.add((x, y))
    return vs, proved, open_


def _components(vs, edges) -> list[set]:
    adj = {v: set() for v in vs}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), []
    for v in vs:
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            x = stack.pop()
            if x not in comp:
                comp.add(x)
                stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(comp)
    return comps


def path_order(vs, edges) -> list | None:
    """The vertices in path order when the graph is a path, else None."""
    if not vs:
        return None
    adj = {v: [] for v in vs}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if len(edges) != len(vs) - 1 or any(len(n) > 2 for n in adj.values()):
        return None
    ends = sorted(v for v in vs if len(adj[v]) <= 1)
    if not ends:
        return None
    order, prev = [ends[0]], None
    while len(order) < len(vs):
        nxt = [w for w in adj[order[-1]] if w != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def is_snake(p: TruncatedPoset, c: Iterable[ElementId], depth: int | None = None) -> Verdict:
    """The wedge graph on c is a path; Holds carries the path order."""
    vs, proved, open_ = wedge_graph(p, c, depth)
    d = default_depth(p) if depth is None else depth
    if not vs:
        return fails(frozenset(), "empty", exhausted_depth=d, note="a path needs a vertex")
    order = path_order(vs, proved)
    if not open_:
        if order is not None:
            return holds(tuple(order), "path_order", exhausted_depth=d, complete=True)
        return fails(frozenset(vs), "not_a_path", exhausted_depth=d, complete=True)
    degree: dict = {v: 0 for v in vs}
    for a, b in proved:
        degree[a] += 1
        degree[b] += 1
    if max(degree.values()) >= 3 or len(_components(vs, proved)) > len(vs) - len(proved):
        return fails(frozenset(vs), "not_a_path", exhausted_depth=d, complete=True,
                     note="a proved branch or cycle cannot be undone")
    if len(_components(vs, proved | open_)) > 1:
        return fails(frozenset(vs), "not_a_path", exhausted_depth=d, complete=True,
                     note="disconnected even with every open wedge")
    return unknown(d, "undecided wedges")


def star_above(p: TruncatedPoset, x: ElementId, depth: int | None = None) -> tuple[frozenset, frozenset]:
    """(proved, possible): elements y with x star-below y proved, or not yet refuted.

    Same level scan as star_below, done once for all targets.
    """
    wv = WedgeView.of(p, depth)
    key = ("star_above", x)
    cache = wv.__dict__.setdefault("_star_above", {})
    if key in cache:
        return cache[key]
    v = wv.view
    proved: set[ElementId] = set()
    possible: set[ElementId] = set()
    for n in range(wv.depth + 1):
        got, undecided = wv.wedges(x, v.level(n))
        above = _common_upper(v, got)
        if not undecided:
            proved |= above
        else:
            possible |= above
    if wv.finite:
        possible = set()
    out = (frozenset(proved), frozenset(possible - proved))
    cache[key] = out
    return out


def _common_upper(v: TruncatedPoset, s: Iterable[ElementId]) -> set[ElementId]:
    out: set[ElementId] | None = None
    for x in s:
        ups = v.up(x) | {x}
        out = set(ups) if out is None else out & ups
        if not out:
            return set()
    return out or set()
