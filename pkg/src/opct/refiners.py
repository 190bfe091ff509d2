"""Relations between posets acting as continuous maps between spectra.

A refiner from P to Q is a Relation with target Q and source P: pairs
(q, p) read "q is refined by p".  Pulling back caps of Q along it must give
caps of P; wedge preservation makes the induced map well defined.
"""

from __future__ import annotations

from typing import Iterable

from .combinatorics import Relation, cap_order_leq
from .errors import EndpointMismatch, StageMismatch
from .generators import Stages
from .poset import ElementId, TruncatedPoset, default_depth, lookahead
from .spectrum import SelectorPrefix
from .stars import WedgeView, star_above
from .verdict import FAILS, HOLDS, UNKNOWN, Verdict, fails, holds, unknown


def make_refiner(q: TruncatedPoset, p: TruncatedPoset, pairs: Iterable[tuple]) -> Relation:
    return Relation(frozenset(q.elements()), frozenset(p.elements()), frozenset(pairs), q, p)


def order_refiner(p: TruncatedPoset, depth: int | None = None) -> Relation:
    """The relation >= on P (pairs (q, p) with p <= q), as a refiner from P to itself."""
    v = p if depth is None else p.deepen(depth)
    pairs = {(y, x) for x in v.elements() for y in v.up(x) | {x}}
    return make_refiner(v, v, pairs)


def identity_refiner(p: TruncatedPoset) -> Relation:
    return make_refiner(p, p, {(x, x) for x in p.elements()})


def inclusion_refiners(sub: TruncatedPoset, full: TruncatedPoset) -> tuple[Relation, Relation]:
    """For a subposet sharing element names: (>= on sub x full, >= on full x sub)."""
    to_full = {x: full.element(sub.name(x)) for x in sub.elements()}
    s_of_p = []
    p_of_s = []
    for x, fx in to_full.items():
        for y in full.elements():
            if full.leq(y, fx):
                s_of_p.append((x, y))
            if full.leq(fx, y):
                p_of_s.append((y, x))
    return make_refiner(sub, full, s_of_p), make_refiner(full, sub, p_of_s)


def _posets(r: Relation) -> tuple[TruncatedPoset, TruncatedPoset]:
    if r.target_poset is None or r.source_poset is None:
        raise EndpointMismatch("refiner checks need both posets attached")
    return r.target_poset, r.source_poset


def _levels_within(p: TruncatedPoset, depth: int) -> range:
    return range(min(depth, p.depth) + 1)


def check_refiner(r: Relation, depth: int | None = None) -> Verdict:
    """Each target level up to depth is refined (through r) by some source level."""
    q, p = _posets(r)
    d = default_depth(q) if depth is None else depth
    found: dict[int, int] = {}
    for n in _levels_within(q, d):
        qn = q.level_set(n)
        for m in range(p.depth + 1):
            if all(r.below(x) & qn for x in p.level(m)):
                found[n] = m
                break
        else:
            if p.finite and q.finite:
                return fails(n, "unrefined_level", exhausted_depth=d, complete=True,
                             note=f"no source level refines target level {n}")
            return unknown(d, f"target level {n} has no refining source level in the truncation")
    return holds(found, "refining_levels", exhausted_depth=d)


def check_wedge_preserving(r: Relation, depth: int | None = None) -> Verdict:
    """q r p, q' r p' and p wedges p' imply q wedges q'."""
    q, p = _posets(r)
    d = default_depth(p) if depth is None else depth
    wp = WedgeView.of(p, d)
    wq = WedgeView.of(q, default_depth(q) if depth is None else d)
    pairs = sorted(r.pairs)
    open_pair = None
    for i, (a, x) in enumerate(pairs):
        for b, y in pairs[i:]:
            if a == b:
                continue
            left = wp.state(x, y)
            if left is FAILS:
                continue
            right = wq.state(a, b)
            if right is HOLDS:
                continue
            if left is HOLDS and right is FAILS:
                return fails(((a, x), (b, y)), "wedge_broken", exhausted_depth=d, complete=True,
                             note="related elements wedge on the source side but not the target side")
            open_pair = open_pair or ((a, x), (b, y))
    if open_pair is not None:
        return unknown(d, "some wedge queries are undecided")
    return holds(None, "wedge_pairs", exhausted_depth=d)


def apply_refiner(r: Relation, s: SelectorPrefix | Iterable[ElementId],
                  depth: int | None = None) -> SelectorPrefix:
    """Image of the prefix under r, then star-closure in the target."""
    q, p = _posets(r)
    members = s.elements if isinstance(s, SelectorPrefix) else frozenset(s)
    for x in members:
        if x not in r.source:
            raise EndpointMismatch("the prefix does not live in the refiner's source")
    d = default_depth(q) if depth is None else depth
    image = r.image(members)
    proved: set[ElementId] = set()
    possible: set[ElementId] = set()
    for x in image:
        got, maybe = star_above(q, x, d)
        proved |= {y for y in got if y.level <= d}
        possible |= {y for y in maybe if y.level <= d}
    certified = isinstance(s, SelectorPrefix) and s.certified
    return SelectorPrefix(q, d, frozenset(proved), frozenset(possible - proved), certified,
                          "image then star-closure")


def star_of_refiner(r: Relation, depth: int | None = None) -> Relation:
    """Pairs (q, p) such that the star of p in some source level is related to q."""
    q, p = _posets(r)
    d = default_depth(p) if depth is None else depth
    wv = WedgeView.of(p, d)
    v = wv.view
    pairs: set[tuple] = set()
    sources = [x for x in r.source if x.level <= d]
    for x in sources:
        for n in range(d + 1):
            got, undecided = wv.wedges(x, v.level(n))
            if undecided or not all(c in r.source for c in got):
                continue
            common = None
            for c in got:
                above = r.below(c)
                common = above if common is None else common & above
                if not common:
                    break
            if common:
                pairs |= {(y, x) for y in common}
    return Relation(r.target, r.source, frozenset(pairs), q, p)


def star_compose(r2: Relation, r1: Relation, depth: int | None = None) -> Relation:
    return star_of_refiner(r2.compose(r1), depth)


def check_strong(r: Relation, depth: int | None = None) -> Verdict:
    """r equals (star-below on the target) star-composed with r, on the inspected pairs."""
    q, p = _posets(r)
    d = default_depth(p) if depth is None else depth
    tri = star_of_refiner(order_refiner(q).restrict(r.target, r.target), d)
    rhs = star_compose(tri, r, d)
    scope = {(a, b) for a, b in rhs.pairs if a.level <= d and b.level <= d}
    mine = {(a, b) for a, b in r.pairs if a.level <= d and b.level <= d}
    extra = sorted(scope - mine)
    if extra:
        return fails(extra[0], "missing_pair", exhausted_depth=d, complete=True,
                     note="the star-composite contains a pair the refiner lacks")
    if mine - scope:
        return unknown(d, "some pairs are not yet reached by the star-composite")
    return holds(None, "strong_pairs", exhausted_depth=d)


def check_birefinable(r: Relation, s: Relation, depth: int | None = None) -> Verdict:
    """r (target Q, source P) and s (target P, source Q) compose into the cap orders."""
    q, p = _posets(r)
    p2, q2 = _posets(s)
    if not (p.same_lineage(p2) and q.same_lineage(q2)):
        raise EndpointMismatch("the two refiners must run between the same posets")
    d = default_depth(q) if depth is None else depth
    for v in (check_refiner(r, d), check_refiner(s, d)):
        if not v.holds:
            return v
    pending = None
    for comp, poset in ((r.compose(s), q), (s.compose(r), p)):
        for a, c in sorted(comp.pairs):
            if max(a.level, c.level) > d:
                continue
            v = cap_order_leq(poset, c, a, d if poset.growable else None)
            if v.fails:
                return fails((a, c), "composite_escapes", exhausted_depth=d, complete=True,
                             note="the composite relates two elements outside the cap order")
            if v.unknown:
                pending = pending or (a, c)
    if pending is not None:
        return unknown(d, "some composite pairs are not decided in the cap order")
    return holds(None, "composites_below", exhausted_depth=d,
                 note="the induced maps are mutually inverse on the spectra")


def _co_wedge(rel: Relation, left: WedgeView, right: WedgeView):
    """Wedges among related left elements must carry over to the right: (status, witness)."""
    pairs = sorted(rel.pairs)
    status = HOLDS
    for i, (a, x) in enumerate(pairs):
        for b, y in pairs[i + 1:]:
            if x == y:
                continue
            l_state = left.state(a, b)
            if l_state is FAILS:
                continue
            r_state = right.state(x, y)
            if r_state is HOLDS:
                continue
            if l_state is HOLDS and r_state is FAILS:
                return FAILS, ((a, x), (b, y))
            status = UNKNOWN
    return status, None


def verify_back_and_forth(stages: Stages, depth: int | None = None) -> Verdict:
    """Surjective, co-wedge-preserving stages whose zig-zags stay below the orders."""
    d = stages.depth if depth is None else depth
    if d > stages.depth or len(stages.back) < d:
        raise StageMismatch(f"stages reach depth {stages.depth}, {d} requested")
    P, Q = stages.left, stages.right
    for n in range(d + 1):
        f = stages.fwd[n]
        if f.target != stages.c_levels[n] or f.source != stages.d_levels[n]:
            raise StageMismatch(f"forward stage {n} does not run from C_{n} to D_{n}")
        if n < d:
            b = stages.back[n]
            if b.target != stages.d_levels[n + 1] or b.source != stages.c_levels[n]:
                raise StageMismatch(f"back stage {n} does not run from D_{n + 1} to C_{n}")
    wp = WedgeView.of(P, d if P.growable else min(d, default_depth(P)))
    wq = WedgeView.of(Q, d if Q.growable else min(d, default_depth(Q)))
    open_note = None
    for n in range(d + 1):
        f = stages.fwd[n]
        gap = f.surjectivity_gap()
        if gap is not None:
            return fails((n, "forward", gap), "not_surjective", exhausted_depth=d, complete=True,
                         note=f"forward stage {n} misses an element")
        st, wit = _co_wedge(f, wp, wq)
        if st is FAILS:
            return fails((n, "forward", wit), "co_wedge_broken", exhausted_depth=d, complete=True)
        if st is UNKNOWN:
            open_note = open_note or f"forward stage {n} has undecided wedges"
        if n == d:
            continue
        b = stages.back[n]
        gap = b.surjectivity_gap()
        if gap is not None:
            return fails((n, "back", gap), "not_surjective", exhausted_depth=d, complete=True,
                         note=f"back stage {n} misses an element")
        st, wit = _co_wedge(b, wq, wp)
        if st is FAILS:
            return fails((n, "back", wit), "co_wedge_broken", exhausted_depth=d, complete=True)
        if st is UNKNOWN:
            open_note = open_note or f"back stage {n} has undecided wedges"
        for x, y in sorted(b.compose(f).pairs):
            if not Q.leq(x, y):
                return fails((n, "back_forward", (x, y)), "zigzag_escapes", exhausted_depth=d,
                             complete=True, note="back after forward leaves the order")
        for x, y in sorted(stages.fwd[n + 1].compose(b).pairs):
            if not P.leq(x, y):
                return fails((n, "forward_back", (x, y)), "zigzag_escapes", exhausted_depth=d,
                             complete=True, note="forward after back leaves the order")
    if open_note is not None:
        return unknown(d, open_note)
    return holds(None, "back_and_forth", exhausted_depth=d, assumptions=("regular",),
                 note="with both posets regular the spectra are homeomorphic")


def stages_from_relations(left: TruncatedPoset, right: TruncatedPoset,
                          fwd: list[Iterable[tuple]], back: list[Iterable[tuple]]) -> Stages:
    """Stages over the levels of both posets: fwd[n] in C_n x D_n, back[n] in D_{n+1} x C_n."""
    depth = len(fwd) - 1
    if len(back) < depth:
        raise StageMismatch(f"{len(fwd)} forward stages need {depth} back stages")
    lv = lookahead(left, depth) if left.growable else left
    rv = lookahead(right, depth) if right.growable else right
    if depth > lv.depth or depth > rv.depth:
        raise StageMismatch(f"stages need level {depth} on both sides")
    c = tuple(lv.level_set(n) for n in range(depth + 1))
    dd = tuple(rv.level_set(n) for n in range(depth + 1))
    try:
        f = tuple(Relation(c[n], dd[n], frozenset(fwd[n]), lv, rv) for n in range(depth + 1))
        b = tuple(Relation(dd[n + 1], c[n], frozenset(back[n]), rv, lv) for n in range(depth))
    except EndpointMismatch as exc:
        raise StageMismatch(str(exc)) from None
    return Stages(lv, rv, c, dd, f, b)
