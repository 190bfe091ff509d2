"""Relations, bands, caps, the cap order and the brute-force oracle.

Relations follow the left-to-right convention: a relation R between A and B
is a set of pairs (a, b) with a in A (the target side) and b in B (the
source side), read "a R b".  A function f: B -> A is such a set, so
composition agrees with ordinary function composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Iterator

from .errors import EndpointMismatch, OpctError, SizeBound
from .poset import ElementId, TruncatedPoset
from .verdict import Verdict, fails, holds, unknown


@dataclass(frozen=True)
class Relation:
    """Pairs (a, b) in target x source; `a R b`."""

    target: frozenset
    source: frozenset
    pairs: frozenset
    target_poset: TruncatedPoset | None = field(default=None, compare=False, repr=False)
    source_poset: TruncatedPoset | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        for a, b in self.pairs:
            if a not in self.target or b not in self.source:
                raise EndpointMismatch(f"pair ({a!r}, {b!r}) leaves the declared carriers")

    @classmethod
    def of(cls, pairs: Iterable[tuple], target: Iterable | None = None,
           source: Iterable | None = None, **kw) -> "Relation":
        pairs = frozenset(pairs)
        t = frozenset(target) if target is not None else frozenset(a for a, _ in pairs)
        s = frozenset(source) if source is not None else frozenset(b for _, b in pairs)
        return cls(t, s, pairs, **kw)

    @cached_property
    def _fwd(self) -> dict[Hashable, frozenset]:
        out: dict[Hashable, set] = {}
        for a, b in self.pairs:
            out.setdefault(a, set()).add(b)
        return {a: frozenset(bs) for a, bs in out.items()}

    @cached_property
    def _bwd(self) -> dict[Hashable, frozenset]:
        out: dict[Hashable, set] = {}
        for a, b in self.pairs:
            out.setdefault(b, set()).add(a)
        return {b: frozenset(a_s) for b, a_s in out.items()}

    def related(self, a, b) -> bool:
        return (a, b) in self.pairs

    def above(self, a) -> frozenset:
        """Source elements b with a R b."""
        return self._fwd.get(a, frozenset())

    def below(self, b) -> frozenset:
        """Target elements a with a R b."""
        return self._bwd.get(b, frozenset())

    def preimage(self, s: Iterable) -> frozenset:
        """S^R: source elements related to something in S (S in the target)."""
        out: set = set()
        for a in s:
            out |= self.above(a)
        return frozenset(out)

    def image(self, t: Iterable) -> frozenset:
        """T^(R^-1): target elements related to something in T (T in the source)."""
        out: set = set()
        for b in t:
            out |= self.below(b)
        return frozenset(out)

    def inverse(self) -> "Relation":
        return Relation(self.source, self.target, frozenset((b, a) for a, b in self.pairs),
                        self.source_poset, self.target_poset)

    def compose(self, other: "Relation") -> "Relation":
        """a (self o other) c iff a self b other c for some b."""
        if self.source != other.target:
            raise EndpointMismatch("composition needs self.source == other.target")
        if (self.source_poset is not None and other.target_poset is not None
                and not self.source_poset.same_lineage(other.target_poset)):
            raise EndpointMismatch("composition across different posets")
        pairs = {(a, c) for a, b in self.pairs for c in other.above(b)}
        return Relation(self.target, other.source, frozenset(pairs), self.target_poset,
                        other.source_poset)

    def restrict(self, target: Iterable, source: Iterable) -> "Relation":
        t, s = frozenset(target), frozenset(source)
        return Relation(t, s, frozenset((a, b) for a, b in self.pairs if a in t and b in s),
                        self.target_poset, self.source_poset)

    def surjectivity_gap(self):
        """First target element related to nothing, or None."""
        for a in sorted(self.target):
            if not self.above(a):
                return a
        return None

    def injectivity_gap(self):
        """First source element b with no target element related only to b, or None."""
        for b in sorted(self.source):
            if not any(self.above(a) == {b} for a in self.below(b)):
                return b
        return None

    def is_surjective(self) -> bool:
        return self.surjectivity_gap() is None

    def is_injective(self) -> bool:
        return self.injectivity_gap() is None


def order_relation(p: TruncatedPoset, target: Iterable[ElementId],
                   source: Iterable[ElementId]) -> Relation:
    """The restriction of <= to target x source."""
    t, s = frozenset(target), frozenset(source)
    pairs = frozenset((a, b) for a in t for b in s if p.leq(a, b))
    return Relation(t, s, pairs, p, p)


def identity(p: TruncatedPoset, elements: Iterable[ElementId] | None = None) -> Relation:
    es = frozenset(p.elements() if elements is None else elements)
    return Relation(es, es, frozenset((e, e) for e in es), p, p)


def refines(s: Iterable, t: Iterable, under: Relation | TruncatedPoset) -> bool:
    """Every member of S is related to (or below) some member of T."""
    t = frozenset(t)
    if isinstance(under, TruncatedPoset):
        return all(any(under.leq(x, y) for y in t) for x in s)
    return all(under.above(x) & t for x in s)


def _check_members(p: TruncatedPoset, s: Iterable[ElementId]) -> frozenset[ElementId]:
    s = frozenset(s)
    for e in s:
        if e not in p:
            raise KeyError(f"{e!r} is not an element of the truncation")
    return s


def _scope(p: TruncatedPoset, depth: int | None) -> tuple[TruncatedPoset, int]:
    if depth is None:
        return p, p.depth
    if depth > p.depth:
        p = p.deepen(depth)
    return p, depth


def is_band(p: TruncatedPoset, b: Iterable[ElementId], depth: int | None = None) -> Verdict:
    """Every element comparable to some member of B."""
    b = _check_members(p, b)
    view, d = _scope(p, depth)
    below_b = view.down_closure_in_truncation(b)
    above_b = view.up_closure(b)
    for x in view.elements():
        if x.level > d:
            break
        if x not in below_b and x not in above_b:
            return fails(x, "incomparable", exhausted_depth=d, note="element comparable to no member")
    if view.finite and d >= view.depth:
        return holds(None, "exhaustive", exhausted_depth=d, complete=True)
    if all(x in below_b for x in view.level(d)):
        return holds(d, "band_level", exhausted_depth=d, complete=True,
                     note=f"every element of level {d} lies below a member")
    return unknown(d, "deeper elements may be incomparable to every member")


def refining_level(p: TruncatedPoset, c: frozenset[ElementId], upto: int) -> int | None:
    below_c = p.down_closure_in_truncation(c)
    for n in range(upto + 1):
        if all(x in below_c for x in p.level(n)):
            return n
    return None


def is_cap(p: TruncatedPoset, c: Iterable[ElementId], depth: int | None = None) -> Verdict:
    """Holds with the first level refining C; Fails only on sound refutations."""
    c = _check_members(p, c)
    view, d = _scope(p, depth)
    if not c:
        return fails(frozenset(), "empty", exhausted_depth=d, complete=True,
                     note="the empty set is never a cap")
    n = refining_level(view, c, min(d, view.depth))
    if n is not None:
        return holds(n, "refining_level", exhausted_depth=d, complete=True)
    below_c = view.down_closure_in_truncation(c)
    for a in sorted(view.known_atoms()):
        if a not in below_c:
            return fails(a, "atom_outside", exhausted_depth=d, complete=True,
                         note="an atom lies in every band but below no member")
    return unknown(d, "no level within depth refines the set")


def cap_order_leq(p: TruncatedPoset, a: ElementId, b: ElementId,
                  depth: int | None = None, bound: int = 16) -> Verdict:
    """The cap order on singletons: F+{a} a cap implies F+{b} a cap, for all finite F."""
    view, d = _scope(p, depth)
    if view.leq(a, b):
        return holds((a, b), "below", exhausted_depth=d, complete=True)
    if view.finite:
        orc = oracle(view, bound)
        f = orc.cap_order_counterexample({a}, {b})
        if f is None:
            return holds(None, "exhaustive", exhausted_depth=d, complete=True)
        return fails(f, "cap_order_counter", exhausted_depth=d, complete=True)
    for t in sorted(view.known_atoms()):
        if view.leq(t, a) and not view.leq(t, b):
            f = frozenset(x for x in view.level(t.level) if not view.leq(x, a))
            return fails(f, "cap_order_counter", exhausted_depth=d, complete=True,
                         note="an atom below a but not b escapes F+{b}")
    return unknown(d, "the cap order is not decidable from a finite prefix in general")


# brute force


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class OracleResult:
    """Exhaustive classification of all subsets of a small finite poset."""

    poset: TruncatedPoset
    elements: tuple[ElementId, ...]
    _band: bytes = field(repr=False)
    _cap: bytes = field(repr=False)
    _down: tuple[int, ...] = field(repr=False)
    _up: tuple[int, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def _index(self) -> dict[ElementId, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def mask(self, s: Iterable[ElementId]) -> int:
        m = 0
        for e in s:
            m |= 1 << self._index[e]
        return m

    def members(self, mask: int) -> frozenset[ElementId]:
        return frozenset(self.elements[i] for i in _bits(mask))

    def band(self, s: Iterable[ElementId]) -> bool:
        return bool(self._band[self.mask(s)])

    def cap(self, s: Iterable[ElementId]) -> bool:
        return bool(self._cap[self.mask(s)])

    def selector(self, s: Iterable[ElementId]) -> bool:
        return not self._cap[self.full ^ self.mask(s)]

    def _select(self, pred) -> tuple[frozenset[ElementId], ...]:
        return tuple(self.members(m) for m in range(self.full + 1) if pred(m))

    @cached_property
    def bands(self) -> tuple[frozenset[ElementId], ...]:
        return self._select(lambda m: self._band[m])

    @cached_property
    def caps(self) -> tuple[frozenset[ElementId], ...]:
        return self._select(lambda m: self._cap[m])

    def _minimal(self, flag) -> tuple[frozenset[ElementId], ...]:
        return self._select(lambda m: flag(m) and not any(flag(m ^ (1 << i)) for i in _bits(m)))

    @cached_property
    def minimal_caps(self) -> tuple[frozenset[ElementId], ...]:
        return self._minimal(lambda m: self._cap[m])

    @cached_property
    def selectors(self) -> tuple[frozenset[ElementId], ...]:
        return self._select(lambda m: not self._cap[self.full ^ m])

    @cached_property
    def minimal_selectors(self) -> tuple[frozenset[ElementId], ...]:
        """Inclusion-minimal hitting sets of the minimal caps."""
        mins = [self.mask(c) for c in self.minimal_caps]
        hits = lambda m: all(m & c for c in mins)  # noqa: E731
        return self._minimal(hits)

    def cap_order_counterexample(self, q: Iterable[ElementId], r: Iterable[ElementId]):
        """Some F with F+Q a cap and F+R not a cap, or None when Q is cap-below R."""
        qm, rm = self.mask(q), self.mask(r)
        for size in range(self.size + 1):
            for combo in combinations(range(self.size), size):
                f = sum(1 << i for i in combo)
                if self._cap[f | qm] and not self._cap[f | rm]:
                    return self.members(f)
        return None

    def cap_order_leq(self, q: Iterable[ElementId], r: Iterable[ElementId]) -> bool:
        qm, rm = self.mask(q), self.mask(r)
        return all(self._cap[f | rm] for f in range(self.full + 1) if self._cap[f | qm])

    def wedge(self, p: ElementId, q: ElementId) -> bool:
        i, j = self._index[p], self._index[q]
        return bool(self._down[i] & self._down[j])

    @cached_property
    def star_below_pairs(self) -> frozenset[tuple[ElementId, ElementId]]:
        """All (p, q) with the star of p in some cap below q."""
        n = self.size
        wedge = [sum(1 << j for j in range(n) if self._down[i] & self._down[j]) for i in range(n)]
        out: set[tuple[int, int]] = set()
        for c in range(1, self.full + 1):
            if not self._cap[c]:
                continue
            for i in range(n):
                star = c & wedge[i]
                for j in range(n):
                    if star & ~self._down[j] == 0:
                        out.add((i, j))
        return frozenset((self.elements[i], self.elements[j]) for i, j in out)

    def star_closure(self, s: Iterable[ElementId]) -> frozenset[ElementId]:
        s = frozenset(s)
        return frozenset(q for p, q in self.star_below_pairs if p in s)

    def is_prime_subset(self, q: Iterable[ElementId]) -> bool:
        """Q is a union of minimal selectors."""
        q = frozenset(q)
        union: set[ElementId] = set()
        for s in self.minimal_selectors:
            if s <= q:
                union |= s
        return union == q

    def is_prime_direct(self, q: Iterable[ElementId]) -> bool:
        """No member of Q is cap-below the complement of Q."""
        q = frozenset(q)
        rest = frozenset(self.elements) - q
        return not any(self.cap_order_leq({x}, rest) for x in q)


def oracle(p: TruncatedPoset, bound: int = 16) -> OracleResult:
    if not p.finite:
        raise OpctError("the oracle needs a finite_complete poset")
    elements = p.elements()
    n = len(elements)
    if n > bound:
        raise SizeBound(f"{n} elements exceed the oracle bound {bound}")
    index = {e: i for i, e in enumerate(elements)}
    down = [1 << i for i in range(n)]
    up = [1 << i for i in range(n)]
    for e in elements:
        for u in p.up(e):
            down[index[u]] |= 1 << index[e]
            up[index[e]] |= 1 << index[u]
    comparable = [down[i] | up[i] for i in range(n)]
    full = (1 << n) - 1
    size = 1 << n
    reach = [0] * size
    dclose = [0] * size
    band = bytearray(size)
    for m in range(1, size):
        low = m & -m
        i = low.bit_length() - 1
        reach[m] = reach[m ^ low] | comparable[i]
        dclose[m] = dclose[m ^ low] | down[i]
        band[m] = reach[m] == full
    band[0] = n == 0
    cap = bytearray(band[dclose[m]] for m in range(size))
    return OracleResult(p, elements, bytes(band), bytes(cap), tuple(down), tuple(up))
