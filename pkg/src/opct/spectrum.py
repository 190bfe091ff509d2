"""Points of the spectrum seen through finite prefixes, clusters and tangled refinements.

A point is represented by a thread t_0 >= t_1 >= ... (one element per level).
In a regular poset the star-closure of a thread is a minimal selector, so
a prefix of that closure is the depth-d picture of the point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .combinatorics import oracle
from .errors import InvalidThread, NotAPath, NotARefinement, NotLinked, NotUpClosed, OpctError, SizeBound
from .poset import ElementId, TruncatedPoset, default_depth, lookahead
from .stars import (
    WedgeView,
    _components,
    check_regular,
    is_snake,
    star_above,
    star_below,
    wedge_graph,
)
from .verdict import FAILS, HOLDS, Verdict, fails, holds, unknown


@dataclass(frozen=True)
class Thread:
    """A descending chain with t_n in level n."""

    poset: TruncatedPoset = field(repr=False, compare=False)
    elements: tuple[ElementId, ...]

    def __post_init__(self) -> None:
        p = self.poset
        if not self.elements:
            raise InvalidThread("a thread needs at least one element")
        for n, e in enumerate(self.elements):
            if e not in p or e not in p.level_set(n):
                raise InvalidThread(f"thread entry {n} is not in level {n}", element=e)
            if n and not p.leq(e, self.elements[n - 1]):
                raise InvalidThread(f"thread entry {n} is not below entry {n - 1}", element=e)

    @property
    def depth(self) -> int:
        return len(self.elements) - 1

    @classmethod
    def from_names(cls, p: TruncatedPoset, names: Sequence[str]) -> "Thread":
        return cls(p, tuple(p.element(n) for n in names))

    @classmethod
    def leftmost(cls, p: TruncatedPoset, depth: int, end: str = "first") -> "Thread":
        """Thread that always picks the first (or last) lower bound in each level."""
        p = p.deepen(depth)
        pick = min if end == "first" else max
        cur = [pick(p.level(0))]
        for n in range(1, depth + 1):
            below = [x for x in p.level(n) if p.leq(x, cur[-1])]
            cur.append(pick(below))
        return cls(p, tuple(cur))


@dataclass(frozen=True)
class SelectorPrefix:
    """An up-closed piece of the cone of depth `depth`.

    `pending` lists elements that may still belong (undecided star-below
    queries); `certified` is set when regularity was established, so the
    prefix approximates an actual point.
    """

    poset: TruncatedPoset = field(repr=False, compare=False)
    depth: int
    elements: frozenset[ElementId]
    pending: frozenset[ElementId] = frozenset()
    certified: bool = False
    note: str = ""

    def names(self) -> list[str]:
        return self.poset.names(self.elements)


def _regular(p: TruncatedPoset, depth: int) -> Verdict:
    key = ("regular", depth)
    got = p._cache.get(key)
    if got is None:
        got = p._cache[key] = check_regular(p, depth)
    return got


def thread_prefix(t: Thread, depth: int | None = None) -> SelectorPrefix:
    p = t.poset
    d = t.depth if depth is None else min(depth, t.depth)
    elems = p.up_closure(t.elements[: d + 1])
    certified = p.finite or _regular(p, default_depth(p)).holds
    note = "regularity holds on the inspected levels" if certified else "regularity not established"
    return SelectorPrefix(p, d, elems, frozenset(), certified, note)


def _linked(p: TruncatedPoset, s: Iterable[ElementId], depth: int) -> ElementId | None:
    wv = WedgeView.of(p, depth)
    s = sorted(s)
    for i, x in enumerate(s):
        for y in s[i + 1:]:
            if wv.state(x, y) is not HOLDS:
                return x
    return None


def star_closure_prefix(s: SelectorPrefix, depth: int | None = None) -> SelectorPrefix:
    """Elements of the cone star-above some member; `pending` holds the undecided ones."""
    p = s.poset
    d = s.depth if depth is None else depth
    bad = _linked(p, s.elements, max(d, s.depth))
    if bad is not None:
        raise NotLinked(f"{p.name(bad)} has no proved common lower bound with another member",
                        element=bad)
    proved: set[ElementId] = set()
    possible: set[ElementId] = set()
    for x in s.elements:
        got, maybe = star_above(p, x, max(d, s.depth))
        proved |= {y for y in got if y.level <= d}
        possible |= {y for y in maybe if y.level <= d}
    return SelectorPrefix(p, d, frozenset(proved), frozenset(possible - proved),
                          s.certified, "star-closure of the prefix")


def points_equal(t: Thread, u: Thread, depth: int | None = None) -> Verdict:
    """Same point?  Holds only for identical threads or by exhaustion; Fails on a wedge-free level."""
    if not t.poset.same_lineage(u.poset):
        raise OpctError("threads on different posets")
    p = t.poset if t.poset.depth >= u.poset.depth else u.poset
    d = min(t.depth, u.depth) if depth is None else min(depth, t.depth, u.depth)
    if t.elements[: d + 1] == u.elements[: d + 1] and t.depth == u.depth:
        return holds((t.elements, u.elements), "identical", exhausted_depth=d, complete=True)
    if p.finite:
        orc = oracle(p)
        mt = [s for s in orc.minimal_selectors if set(t.elements) <= s]
        mu = [s for s in orc.minimal_selectors if set(u.elements) <= s]
        if mt and mt == mu and len(mt) == 1:
            return holds(mt[0], "same_selector", exhausted_depth=p.depth, complete=True)
        if not set(map(frozenset, mt)) & set(map(frozenset, mu)):
            return fails(None, "separated", exhausted_depth=p.depth, complete=True)
        return unknown(p.depth, "the threads fit several minimal selectors")
    wv = WedgeView.of(p, min(d, default_depth(p)) if not p.growable else d)
    for n in range(min(d, wv.depth) + 1):
        if wv.state(t.elements[n], u.elements[n]) is FAILS:
            return fails((n, t.elements[n], u.elements[n]), "wedge_free_level",
                         exhausted_depth=d, note=f"level {n} entries share no lower bound",
                         assumptions=wv.assumptions + ("regular",), complete=True)
    return unknown(d, "the threads overlap on every inspected level")


def check_t1(selectors: Sequence[frozenset]) -> Verdict:
    """Distinct minimal selectors separate each other in both directions."""
    for i, s in enumerate(selectors):
        for t in selectors[i + 1:]:
            if not (s - t) or not (t - s):
                return fails((s, t), "not_separated", complete=True)
    return holds(None, "t1_pairs", complete=True)


def enumerate_minimal_selectors(p: TruncatedPoset, bound: int = 16) -> list[SelectorPrefix]:
    orc = oracle(p, bound)
    sels = list(orc.minimal_selectors)
    v = check_t1(sels)
    if not v.holds:
        raise OpctError("minimal selectors are not T1-separated; the oracle is inconsistent")
    return [SelectorPrefix(p, p.depth, s, frozenset(), True, "exhaustive") for s in sels]


def _resolve(p: TruncatedPoset, q) -> tuple[frozenset[ElementId] | None, bool]:
    if q is None or q == "all":
        return None, True
    return frozenset(q), False


def is_prime_subset(p: TruncatedPoset, q=None, depth: int | None = None,
                    margin: int = 2) -> Verdict:
    """Q is a union of minimal selectors.

    Q is read as the depth-d prefix of an up-set; None or "all" means the
    whole poset.  Outside the finite case Holds uses the sufficient condition
    "round up-set whose minimal members are atoms", checked on the prefix.
    """
    d = default_depth(p) if depth is None else depth
    members, whole = _resolve(p, q)
    if members is not None and p.up_closure(members) != members:
        missing = sorted(p.up_closure(members) - members)[0]
        raise NotUpClosed(f"{p.name(missing)} lies above a member but is missing",
                          element=missing)
    if p.finite:
        orc = oracle(p)
        target = frozenset(p.elements()) if whole else members
        if orc.is_prime_subset(target):
            parts = [s for s in orc.minimal_selectors if s <= target]
            return holds(tuple(parts), "selector_union", exhausted_depth=p.depth, complete=True)
        rest = target - frozenset().union(*[s for s in orc.minimal_selectors if s <= target])
        return fails(min(rest), "outside_selectors", exhausted_depth=p.depth, complete=True,
                     note="this member lies in no minimal selector inside the set")
    if whole:
        wd = d + margin if p.growable else min(d + margin, default_depth(p))
        v = lookahead(p, wd)
        scope = [x for x in v.elements() if x.level <= d]
        pool = None
    else:
        wd = d
        v = lookahead(p, d)
        scope = sorted(x for x in members if x.level <= max(0, d - margin))
        pool = members
    for x in scope:
        cands = (v.down(x) | {x}) if pool is None else (pool & (v.down(x) | {x}))
        if not any(star_below(p, s, x, wd).holds for s in sorted(cands) if s.level <= wd):
            return unknown(wd, f"no star-below witness for {v.name(x)} within the depth")
        if v.is_atom(x) is not True and not (v.down(x) & (cands - {x})):
            return unknown(wd, f"{v.name(x)} has no lower member within the depth")
    return holds(None, "round_upset", exhausted_depth=wd,
                 assumptions=p.used("graded", "edge_witnessing"),
                 note="round up-set whose minimal members are atoms, on the inspected prefix")


# clusters


def is_cluster(p: TruncatedPoset, c: Iterable[ElementId], depth: int | None = None) -> Verdict:
    """The wedge graph on C is connected (proved edges vs proved plus open edges)."""
    vs, proved, open_ = wedge_graph(p, c, depth)
    d = default_depth(p) if depth is None else depth
    if not vs:
        return holds(frozenset(), "empty", exhausted_depth=d, complete=True,
                     note="the empty family is connected")
    if len(_components(vs, proved)) == 1:
        return holds(tuple(sorted(proved)), "spanning_wedges", exhausted_depth=d, complete=True)
    comps = _components(vs, proved | open_)
    if len(comps) > 1:
        part = min(comps, key=lambda s: min(s))
        return fails(frozenset(part), "split", exhausted_depth=d, complete=True,
                     note="no member of this part wedges a member outside it")
    return unknown(d, "connected only through undecided wedges")


def connectivity_report(p: TruncatedPoset, depth: int | None = None) -> Verdict:
    """Every level up to depth is a cluster (evidence for a connected spectrum)."""
    d = default_depth(p) if depth is None else depth
    details = []
    first_unknown = None
    for n in range(d + 1):
        v = is_cluster(p, lookahead(p, d).level(n), d)
        details.append((n, v.outcome))
        if v.fails:
            return fails((n, v.witness), "level_split", exhausted_depth=d, complete=True,
                         details=tuple(details), note=f"level {n} is not a cluster")
        if v.unknown and first_unknown is None:
            first_unknown = n
    if first_unknown is not None:
        return unknown(d, f"level {first_unknown} is undecided", details=tuple(details))
    return holds(None, "level_clusters", exhausted_depth=d, details=tuple(details),
                 note="certifies connectedness when the poset is regular and prime")


# tangled refinements


def _upper_masks(p: TruncatedPoset, a: Sequence[ElementId], b: Sequence[ElementId]) -> list[int]:
    return [sum(1 << j for j, y in enumerate(b) if p.leq(x, y)) for x in a]


def _check_refines(p: TruncatedPoset, a, b, masks) -> None:
    for x, m in zip(a, masks):
        if not m:
            raise NotARefinement(f"{p.name(x)} lies below no member of the coarser family",
                                 element=x)


def _path(p: TruncatedPoset, s, depth: int, role: str) -> Verdict:
    v = is_snake(p, s, depth)
    if v.fails:
        raise NotAPath(f"the {role} family is not a path", element=v.witness)
    return v


def is_path_crooked(p: TruncatedPoset, a: Iterable[ElementId], b: Iterable[ElementId],
                    depth: int | None = None) -> Verdict:
    """For all a, d in the finer path: some b in [a,d] and c in [b,d] with a,c under one link and b,d under one link."""
    d = default_depth(p) if depth is None else depth
    va = _path(p, a, d, "finer")
    vb = _path(p, b, d, "coarser")
    if va.unknown or vb.unknown:
        return unknown(d, "path structure depends on undecided wedges")
    order: tuple[ElementId, ...] = va.witness
    coarse: tuple[ElementId, ...] = vb.witness
    ups = _upper_masks(p, order, coarse)
    _check_refines(p, order, coarse, ups)
    n = len(order)
    share = [[bool(ups[i] & ups[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            step = 1 if j >= i else -1
            span = list(range(i, j + step, step))
            s_star = next(k for k, x in enumerate(span) if share[x][j])
            t_star = max(k for k, x in enumerate(span) if share[x][i])
            if t_star < s_star:
                return fails((order[i], order[j]), "straight_pair", exhausted_depth=d,
                             complete=True,
                             note=f"no fold between {p.name(order[i])} and {p.name(order[j])}")
    return holds((order, coarse), "crooked_paths", exhausted_depth=d, complete=True)


def _cluster_masks(n: int, adj: list[int]) -> list[int]:
    out = []
    for m in range(1, 1 << n):
        low = m & -m
        seen, frontier = low, low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                lb = f & -f
                nxt |= adj[lb.bit_length() - 1]
                f ^= lb
            nxt &= m & ~seen
            seen |= nxt
            frontier = nxt
        if seen == m:
            out.append(m)
    return out


def is_tangled_refinement(p: TruncatedPoset, a: Iterable[ElementId], b: Iterable[ElementId],
                          depth: int | None = None, size_bound: int = 12) -> Verdict:
    """For overlapping clusters C, D of A: C or D lies in the B-neighbourhood of the other."""
    d = default_depth(p) if depth is None else depth
    a = sorted(set(a))
    b = sorted(set(b))
    if len(a) > size_bound:
        raise SizeBound(f"{len(a)} elements exceed the cluster enumeration bound {size_bound}")
    ups = _upper_masks(p, a, b)
    _check_refines(p, a, b, ups)
    vs, proved, open_ = wedge_graph(p, a, d)
    if open_:
        return unknown(d, "undecided wedges inside the finer family")
    n = len(a)
    idx = {x: i for i, x in enumerate(a)}
    adj = [0] * n
    for x, y in proved:
        adj[idx[x]] |= 1 << idx[y]
        adj[idx[y]] |= 1 << idx[x]
    wed = [adj[i] | (1 << i) for i in range(n)]
    near = [sum(1 << j for j in range(n) if ups[i] & ups[j]) for i in range(n)]

    def spread(m: int, table: list[int]) -> int:
        out = 0
        while m:
            lb = m & -m
            out |= table[lb.bit_length() - 1]
            m ^= lb
        return out

    clusters = _cluster_masks(n, adj)
    touch = {c: spread(c, wed) for c in clusters}
    hood = {c: spread(c, near) for c in clusters}
    for c in clusters:
        for e in clusters:
            if e < c or not touch[c] & e:
                continue
            if c & ~hood[e] and e & ~hood[c]:
                pick = lambda m: frozenset(a[i] for i in range(n) if m >> i & 1)  # noqa: E731
                return fails((pick(c), pick(e)), "untangled_clusters", exhausted_depth=d,
                             complete=True, note="two overlapping clusters escape each other")
    return holds(None, "cluster_pairs", exhausted_depth=d, complete=True)


def check_tangled_poset(p: TruncatedPoset, depth: int | None = None, size_bound: int = 12) -> Verdict:
    """Each level up to depth has a tangled refinement among the deeper inspected levels."""
    d = default_depth(p) if depth is None else depth
    v = lookahead(p, d)
    found: dict[int, int] = {}
    for n in range(d):
        for m in range(n + 1, d + 1):
            a, b = v.level(m), v.level(n)
            res = _tangled_levels(p, a, b, d, size_bound)
            if res is not None and res.holds:
                found[n] = m
                break
        else:
            return fails(n, "no_tangled_level", exhausted_depth=d,
                         note=f"no level up to {d} is a tangled refinement of level {n}")
    return holds(found, "tangled_levels", exhausted_depth=d,
                 note="with regularity, weakly tangled levels make the poset tangled")


def _tangled_levels(p, a, b, d, size_bound) -> Verdict | None:
    try:
        sa, sb = is_snake(p, a, d), is_snake(p, b, d)
        if sa.holds and sb.holds:
            return is_path_crooked(p, a, b, d)
        return is_tangled_refinement(p, a, b, d, size_bound)
    except SizeBound:
        return None
