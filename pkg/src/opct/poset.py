"""Finite truncations of omega-posets.

A truncation stores levels P_0..P_d (finite antichains) and downward edges.
The order is the reflexive-transitive closure of the edges.  Strict up-sets
are complete because principal filters are finite; down-sets only see the
stored levels.

Atoms persist: an atom-marked element reappears in every deeper level under
the same ElementId (its home level is where it first appears).  A generator
may attach a `grow` hook so that predicates can look one level past the
requested depth.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Any, Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    CorefinementGap,
    DepthExceeded,
    DuplicateElement,
    EmptyLevel,
    InvalidAtomMark,
    InvalidEdge,
    LevelNotAntichain,
    RefinementGap,
    SharedNonAtom,
)

FLAGS = ("graded", "atomless", "edge_witnessing", "star_refining", "finite_complete")


class ElementId(NamedTuple):
    level: int
    index: int

    def __repr__(self) -> str:
        return f"e{self.level}.{self.index}"


ElementSet = frozenset
# grow(p) returns (names, edges as (lower_name, upper_name)) or with a third item: annotations
Grow = Callable[["TruncatedPoset"], tuple]


class TruncatedPoset:
    """Immutable truncation; build with `build`, `extend` or `from_order`."""

    def __init__(self, *, levels, names, ids, upper, up, edges, flags, atom_marks,
                 grow, annotations, lineage, assumed=frozenset()) -> None:
        self.levels: tuple[tuple[ElementId, ...], ...] = levels
        self._names: dict[ElementId, str] = names
        self._ids: dict[str, ElementId] = ids
        self._upper: dict[ElementId, frozenset[ElementId]] = upper
        self._up: dict[ElementId, frozenset[ElementId]] = up
        self.edges: frozenset[tuple[ElementId, ElementId]] = edges
        self.flags: frozenset[str] = flags
        self.atom_marks: frozenset[ElementId] = atom_marks
        self.assumed: frozenset[str] = assumed
        self.annotations: Mapping[str, Any] = annotations
        self._grow = grow
        self._lineage = lineage
        self._cache: dict[Hashable, Any] = {}

    # basic shape

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def growable(self) -> bool:
        return self._grow is not None

    @property
    def finite(self) -> bool:
        return "finite_complete" in self.flags

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def same_lineage(self, other: "TruncatedPoset") -> bool:
        """True when one is a prefix/deepening of the other (same elements, same ids)."""
        return self._lineage is other._lineage

    def __len__(self) -> int:
        return len(self._names)

    def __repr__(self) -> str:
        sizes = ",".join(str(len(lv)) for lv in self.levels)
        return f"TruncatedPoset(levels=[{sizes}], flags={sorted(self.flags)})"

    def elements(self) -> tuple[ElementId, ...]:
        got = self._cache.get("elements")
        if got is None:
            got = self._cache["elements"] = tuple(sorted(self._names))
        return got

    def level(self, n: int) -> tuple[ElementId, ...]:
        if not 0 <= n <= self.depth:
            raise DepthExceeded(f"level {n} outside truncation of depth {self.depth}")
        return self.levels[n]

    def level_set(self, n: int) -> frozenset[ElementId]:
        key = ("level_set", n)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = frozenset(self.level(n))
        return got

    def position(self, e: ElementId, n: int) -> int:
        key = ("positions", n)
        pos = self._cache.get(key)
        if pos is None:
            pos = self._cache[key] = {x: i for i, x in enumerate(self.level(n))}
        return pos[e]

    def last_level(self, e: ElementId) -> int:
        """Deepest stored level containing e (atoms persist to the end)."""
        return self.depth if e in self.level_set(self.depth) else e.level

    # names

    def name(self, e: ElementId) -> str:
        return self._names[e]

    def names(self, s: Iterable[ElementId]) -> list[str]:
        return [self._names[e] for e in sorted(s)]

    def element(self, name: str) -> ElementId:
        try:
            return self._ids[name]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def elements_named(self, names: Iterable[str]) -> frozenset[ElementId]:
        return frozenset(self.element(n) for n in names)

    def __contains__(self, e: object) -> bool:
        return e in self._names

    # order

    def leq(self, p: ElementId, q: ElementId) -> bool:
        return p == q or q in self._up[p]

    def lt(self, p: ElementId, q: ElementId) -> bool:
        return q in self._up[p]

    def up(self, p: ElementId) -> frozenset[ElementId]:
        """Strict up-set p^< (complete)."""
        return self._up[p]

    def upper_neighbours(self, p: ElementId) -> frozenset[ElementId]:
        return self._upper[p]

    def _lower_neighbours(self) -> dict[ElementId, list[ElementId]]:
        got = self._cache.get("lower")
        if got is None:
            got = defaultdict(list)
            for x in self.elements():
                for u in self._upper[x]:
                    got[u].append(x)
            self._cache["lower"] = got
        return got

    def down(self, p: ElementId) -> frozenset[ElementId]:
        """Strict down-set of p inside the truncation."""
        key = ("down", p)
        got = self._cache.get(key)
        if got is None:
            lower = self._lower_neighbours()
            seen: set[ElementId] = set()
            stack = list(lower.get(p, ()))
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(lower.get(x, ()))
            got = self._cache[key] = frozenset(seen)
        return got

    def up_closure(self, s: Iterable[ElementId]) -> frozenset[ElementId]:
        out: set[ElementId] = set()
        for e in s:
            out.add(e)
            out |= self._up[e]
        return frozenset(out)

    def down_closure_in_truncation(self, s: Iterable[ElementId]) -> frozenset[ElementId]:
        s = frozenset(s)
        return frozenset(x for x in self.elements() if x in s or self._up[x] & s)

    def upper_covers(self, p: ElementId) -> frozenset[ElementId]:
        ups = self._up[p]
        nonmin: set[ElementId] = set()
        for v in ups:
            nonmin |= self._up[v]
        return ups - nonmin

    def lower_covers(self, p: ElementId) -> frozenset[ElementId]:
        """Maximal elements of p^> within the truncation (provisional unless complete)."""
        return frozenset(x for x in self.down(p) if p in self.upper_covers(x))

    def comparable(self, p: ElementId, q: ElementId) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    # rank and levels

    def rank(self, p: ElementId) -> int:
        ranks = self._cache.setdefault("rank", {})
        if p not in ranks:
            for x in sorted(self.up_closure([p])):  # shallower first, so parents are ready
                if x not in ranks:
                    ranks[x] = 1 + max((ranks[u] for u in self._upper[x]), default=-1)
        return ranks[p]

    def cone(self, n: int) -> frozenset[ElementId]:
        if not 0 <= n <= self.depth:
            raise DepthExceeded(f"cone {n} outside truncation of depth {self.depth}")
        return frozenset(e for e in self.elements() if self.rank(e) <= n)

    def level_of(self, n: int) -> frozenset[ElementId]:
        """Minimal elements of the n-th cone, computed from the order alone."""
        cone = self.cone(n)
        nonmin: set[ElementId] = set()
        for x in cone:
            nonmin |= self._up[x]
        return cone - nonmin

    # atoms

    def is_atom(self, e: ElementId) -> bool | None:
        """True/False when known, None when a deepest leaf has undecided atomhood."""
        if e in self.atom_marks:
            return True
        if e.level < self.depth:
            return False
        if self.finite:
            return True
        if "atomless" in self.flags:
            return False
        return None

    def known_atoms(self) -> frozenset[ElementId]:
        got = self._cache.get("known_atoms")
        if got is None:
            atoms = set(self.atom_marks)
            if self.finite:
                atoms |= self.level_set(self.depth)
            got = self._cache["known_atoms"] = frozenset(atoms)
        return got

    # masks: which level-L elements lie below x (L >= x.level)

    def below_masks(self, n: int) -> dict[ElementId, int]:
        key = ("masks", n)
        got = self._cache.get(key)
        if got is None:
            got = defaultdict(int)
            for i, x in enumerate(self.level(n)):
                bit = 1 << i
                got[x] |= bit
                for u in self._up[x]:
                    got[u] |= bit
            got = self._cache[key] = dict(got)
        return got

    # growth

    def deepen(self, depth: int) -> "TruncatedPoset":
        if depth <= self.depth:
            return self
        if self._grow is None:
            raise DepthExceeded(f"depth {depth} requested but truncation stops at {self.depth}")
        deeper: dict[int, TruncatedPoset] = self._cache.setdefault("deeper", {})
        if depth in deeper:
            return deeper[depth]
        start = max((d for d in deeper if d < depth), default=None)
        cur = deeper[start] if start is not None else self
        while cur.depth < depth:
            out = cur._grow(cur)
            names, edges = out[0], out[1]
            ann = out[2] if len(out) > 2 else None
            cur = extend(cur, names, edges, annotations=ann)
            deeper[cur.depth] = cur
        return cur

    def prefix(self, depth: int) -> "TruncatedPoset":
        """The truncation restricted to levels 0..depth (same lineage and hook)."""
        if depth >= self.depth:
            return self.deepen(depth)
        if depth < 0:
            raise DepthExceeded("negative depth")
        keep = {e for e in self._names if e.level <= depth}
        return TruncatedPoset(
            levels=self.levels[: depth + 1],
            names={e: self._names[e] for e in keep},
            ids={self._names[e]: e for e in keep},
            upper={e: self._upper[e] for e in keep},
            up={e: self._up[e] for e in keep},
            edges=frozenset(ed for ed in self.edges if ed[0] in keep),
            flags=self.flags - {"finite_complete"},
            atom_marks=frozenset(a for a in self.atom_marks if a in keep),
            grow=self._grow,
            annotations=self.annotations,
            lineage=self._lineage,
            assumed=self.assumed,
        )

    def with_flags(self, extra: Iterable[str], *, assumed: bool = True) -> "TruncatedPoset":
        extra = frozenset(extra)
        _check_flags(extra)
        if "atomless" in extra and self.atom_marks:
            raise InvalidAtomMark("cannot assume atomless with atom-marked elements")
        return TruncatedPoset(
            levels=self.levels, names=self._names, ids=self._ids, upper=self._upper,
            up=self._up, edges=self.edges, flags=self.flags | extra,
            atom_marks=self.atom_marks, grow=self._grow, annotations=self.annotations,
            lineage=self._lineage,
            assumed=self.assumed | (extra - self.flags if assumed else frozenset()),
        )

    def used(self, *flags: str) -> tuple[str, ...]:
        """The subset of `flags` that the user asserted rather than the builder."""
        return tuple(sorted(f for f in flags if f in self.assumed and f in self.flags))


def lookahead(p: TruncatedPoset, depth: int) -> TruncatedPoset:
    """View used to answer questions about levels <= depth: one level deeper if growable."""
    if p.growable:
        return p.deepen(depth + 1)
    if depth > p.depth:
        raise DepthExceeded(f"depth {depth} requested but truncation stops at {p.depth}")
    return p


def default_depth(p: TruncatedPoset) -> int:
    """Deepest level whose questions can be answered with one level of lookahead."""
    if p.growable or p.finite or p.depth == 0:
        return p.depth
    return p.depth - 1


# construction


def _check_flags(flags: Iterable[str]) -> frozenset[str]:
    flags = frozenset(flags)
    bad = flags - set(FLAGS)
    if bad:
        raise ValueError(f"unknown flag(s): {', '.join(sorted(bad))}")
    return flags


class _State:
    def __init__(self) -> None:
        self.levels: list[tuple[ElementId, ...]] = []
        self.names: dict[ElementId, str] = {}
        self.ids: dict[str, ElementId] = {}
        self.upper: dict[ElementId, frozenset[ElementId]] = {}
        self.up: dict[ElementId, frozenset[ElementId]] = {}
        self.edges: set[tuple[ElementId, ElementId]] = set()

    @classmethod
    def of(cls, p: TruncatedPoset) -> "_State":
        st = cls()
        st.levels = list(p.levels)
        st.names = dict(p._names)
        st.ids = dict(p._ids)
        st.upper = dict(p._upper)
        st.up = dict(p._up)
        st.edges = set(p.edges)
        return st


def _append_level(st: _State, names: Sequence[str], pending: dict[str, list[str]],
                  marks: set[str], flags: frozenset[str], strict: bool) -> None:
    n = len(st.levels)
    if not names:
        raise EmptyLevel(f"level {n} is empty")
    prev = st.levels[-1] if st.levels else ()
    prev_set = set(prev)
    entries: list[ElementId] = []
    fresh: list[ElementId] = []
    seen: set[str] = set()
    for pos, name in enumerate(names):
        if name in seen:
            raise DuplicateElement(f"{name!r} listed twice in level {n}", element=name)
        seen.add(name)
        if name in st.ids:
            e = st.ids[name]
            if e not in prev_set:
                if e.level == n:
                    raise DuplicateElement(f"{name!r} listed twice in level {n}", element=name)
                raise SharedNonAtom(f"{name!r} reappears in level {n} after a gap", element=name)
            if strict and name not in marks:
                raise SharedNonAtom(f"{name!r} is shared by levels {n - 1} and {n} "
                                    "but is not marked as an atom", element=name)
            entries.append(e)
            continue
        e = ElementId(n, pos)
        st.ids[name] = e
        st.names[e] = name
        entries.append(e)
        fresh.append(e)
    for e in fresh:
        name = st.names[e]
        uppers: set[ElementId] = set()
        for hi in pending.pop(name, ()):
            if hi not in st.ids:
                raise InvalidEdge(f"edge {name} < {hi}: unknown element {hi!r}", element=hi)
            u = st.ids[hi]
            if u.level == n:
                raise LevelNotAntichain(f"edge {name} < {hi} joins two elements of level {n}",
                                        element=name)
            if u.level > n:
                raise InvalidEdge(f"edge {name} < {hi} points to a deeper level", element=name)
            if hi in marks:
                raise InvalidAtomMark(f"atom {hi!r} cannot have {name!r} below it", element=hi)
            if "graded" in flags and u not in prev_set:
                raise InvalidEdge(f"edge {name} < {hi} skips a level in a graded poset",
                                  element=name)
            uppers.add(u)
        closure: set[ElementId] = set(uppers)
        for u in uppers:
            closure |= st.up[u]
            st.edges.add((e, u))
        st.upper[e] = frozenset(uppers)
        st.up[e] = frozenset(closure)
    entry_set = set(entries)
    for e in fresh:
        if st.up[e] & entry_set:
            raise LevelNotAntichain(f"level {n} is not an antichain at {st.names[e]!r}",
                                    element=st.names[e])
        if n > 0 and not st.up[e] & prev_set:
            raise RefinementGap(f"{st.names[e]!r} (level {n}) has no upper bound in level {n - 1}",
                                element=st.names[e])
    if prev:
        covered = set(entries)
        for y in fresh:
            covered |= st.up[y]
        for x in prev:
            name = st.names[x]
            if name in marks:
                if x not in entry_set:
                    raise InvalidAtomMark(f"atom {name!r} does not persist into level {n}",
                                          element=name)
            elif x not in covered:
                raise CorefinementGap(f"{name!r} (level {n - 1}) has no lower bound in level {n}",
                                      element=name)
    st.levels.append(tuple(entries))


def _freeze(st: _State, flags, marks: set[str], grow, annotations, lineage,
            assumed=frozenset()) -> TruncatedPoset:
    unknown = sorted(m for m in marks if m not in st.ids)
    if unknown:
        raise InvalidAtomMark(f"atom mark on unknown element {unknown[0]!r}", element=unknown[0])
    if "atomless" in flags and marks:
        raise InvalidAtomMark("atomless poset with atom-marked elements")
    return TruncatedPoset(
        levels=tuple(st.levels), names=st.names, ids=st.ids, upper=st.upper, up=st.up,
        edges=frozenset(st.edges), flags=frozenset(flags),
        atom_marks=frozenset(st.ids[m] for m in marks), grow=grow,
        annotations=dict(annotations or {}), lineage=lineage, assumed=assumed,
    )


def _pending(edges: Iterable[tuple[str, str]]) -> dict[str, list[str]]:
    pending: dict[str, list[str]] = defaultdict(list)
    for lo, hi in edges:
        pending[lo].append(hi)
    return pending


def build(levels: Sequence[Sequence[str]], edges: Iterable[tuple[str, str]] = (),
          flags: Iterable[str] = (), atom_marks: Iterable[str] = (), *, strict: bool = True,
          grow: Grow | None = None, annotations: Mapping[str, Any] | None = None) -> TruncatedPoset:
    """Validate levels (lists of names) and edges (lower_name, upper_name).

    With strict=False an element may be shared by consecutive levels without
    an atom mark; check_weakly_graded then reports it.
    """
    if not levels:
        raise EmptyLevel("a poset needs at least one level")
    flags = _check_flags(flags)
    marks = set(atom_marks)
    pending = _pending(edges)
    st = _State()
    for names in levels:
        _append_level(st, list(names), pending, marks, flags, strict)
    _leftover(pending, st)
    return _freeze(st, flags, marks, grow, annotations, object())


def _leftover(pending: dict[str, list[str]], st: _State) -> None:
    for lo in sorted(pending):
        if pending[lo]:
            if lo not in st.ids:
                raise InvalidEdge(f"edge {lo} < {pending[lo][0]}: unknown element {lo!r}", element=lo)
            raise InvalidEdge(f"edge {lo} < {pending[lo][0]} must be given with {lo!r}'s own level",
                              element=lo)


_KEEP = object()


def extend(p: TruncatedPoset, new_level: Sequence[str], new_edges: Iterable[tuple[str, str]] = (),
           *, atom_marks: Iterable[str] = (), annotations: Mapping[str, Any] | None = None,
           grow: Any = _KEEP, strict: bool = True) -> TruncatedPoset:
    """Append one level; old elements keep their ids and closures."""
    st = _State.of(p)
    new_marks = set(atom_marks)
    for m in new_marks:
        if m in st.ids and st.ids[m] not in p.levels[-1]:
            raise InvalidAtomMark(f"atom mark on {m!r} comes too late", element=m)
        if m in st.ids and p.down(st.ids[m]):
            raise InvalidAtomMark(f"{m!r} has lower bounds and cannot be an atom", element=m)
    marks = {p.name(a) for a in p.atom_marks} | new_marks
    pending = _pending(new_edges)
    _append_level(st, list(new_level), pending, marks, p.flags, strict)
    _leftover(pending, st)
    ann = dict(p.annotations)
    ann.update(annotations or {})
    return _freeze(st, p.flags, marks, p._grow if grow is _KEEP else grow, ann, p._lineage,
                   p.assumed)


def from_order(names: Sequence[str], pairs: Iterable[tuple[str, str]],
               flags: Iterable[str] = ()) -> TruncatedPoset:
    """Levels of a finite poset given by order pairs (lower, upper); finite_complete."""
    names = list(names)
    index = {n: i for i, n in enumerate(names)}
    above: dict[str, set[str]] = {n: set() for n in names}
    for lo, hi in pairs:
        if lo not in index or hi not in index:
            raise InvalidEdge(f"pair {lo} < {hi} mentions an unknown element")
        if lo != hi:
            above[lo].add(hi)
    up: dict[str, frozenset[str]] = {}

    def close(n: str, trail: tuple[str, ...]) -> frozenset[str]:
        if n in up:
            return up[n]
        if n in trail:
            raise InvalidEdge(f"cycle through {n!r}")
        out: set[str] = set()
        for h in above[n]:
            out.add(h)
            out |= close(h, trail + (n,))
        if n in out:
            raise InvalidEdge(f"cycle through {n!r}")
        up[n] = frozenset(out)
        return up[n]

    for n in names:
        close(n, ())
    rank: dict[str, int] = {}
    for n in sorted(names, key=lambda x: len(up[x])):
        rank[n] = 1 + max((rank[h] for h in up[n]), default=-1)
    below = {n: {m for m in names if n in up[m]} for n in names}
    atoms = [n for n in names if not below[n]]
    d = max(rank.values(), default=0)
    levels = []
    for k in range(d + 1):
        cone = [n for n in names if rank[n] <= k]
        levels.append([n for n in cone if not any(n in up[m] for m in cone)])
    covers = [(lo, hi) for lo in names for hi in up[lo]
              if not any(hi in up[m] for m in up[lo])]
    marks = [a for a in atoms if rank[a] < d]
    return build(levels, covers, set(flags) | {"finite_complete"}, marks, strict=False)
