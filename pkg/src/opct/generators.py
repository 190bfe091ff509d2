"""Built-in families of omega-posets, each growable past its requested depth."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .combinatorics import Relation
from .errors import GenerationFailed
from .poset import TruncatedPoset, build, extend

# a level maker returns (names, edges, annotations) for level n given the truncation so far
LevelMaker = Callable[[TruncatedPoset, int], tuple]

FLAGS = ("graded", "atomless", "edge_witnessing")


def _grown(first: tuple, make: LevelMaker, depth: int, flags: Sequence[str]) -> TruncatedPoset:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    grow = lambda p: make(p, p.depth + 1)  # noqa: E731
    names, edges, ann = first
    p = build([names], edges, flags, grow=grow, annotations=ann)
    return p.deepen(depth)


# arc and circle


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def interval_name(lo: Fraction, hi: Fraction) -> str:
    left = "[" if lo == 0 else "("
    right = "]" if hi == 1 else ")"
    return f"{left}{_frac(lo)},{_frac(hi)}{right}"


def arc_link(n: int, k: int) -> tuple[Fraction, Fraction]:
    """Link k (1-based) of level n, clipped to [0, 1]."""
    den = 2 ** (n + 1)
    return max(Fraction(k - 1, den), Fraction(0)), min(Fraction(k + 1, den), Fraction(1))


def _arc_level(p: TruncatedPoset | None, n: int) -> tuple:
    size = 2 ** (n + 1) - 1
    names, ann = [], {}
    for k in range(1, size + 1):
        lo, hi = arc_link(n, k)
        name = interval_name(lo, hi)
        names.append(name)
        ann[name] = (lo, hi)
    edges = []
    if n > 0:
        for k in range(1, 2 ** n):
            parent = interval_name(*arc_link(n - 1, k))
            for j in (2 * k - 1, 2 * k, 2 * k + 1):
                edges.append((names[j - 1], parent))
    return names, edges, ann


def gen_arc(depth: int) -> TruncatedPoset:
    """Level n holds the 2^(n+1) - 1 dyadic links [(k-1)/2^(n+1), (k+1)/2^(n+1)] of [0, 1]."""
    return _grown(_arc_level(None, 0), _arc_level, depth, FLAGS)


def circle_arc(n: int, j: int) -> tuple[Fraction, Fraction]:
    den = 2 ** (n + 1)
    return Fraction(j - 1, den), Fraction(j + 1, den)


def _circle_name(n: int, j: int) -> str:
    lo, hi = circle_arc(n, j)
    return f"({_frac(lo)},{_frac(hi)})"


def _circle_level(p: TruncatedPoset | None, n: int) -> tuple:
    if n == 0:
        return ["X"], [], {"X": None}
    size = 2 ** (n + 1)
    names = [_circle_name(n, j) for j in range(size)]
    ann = {name: circle_arc(n, j) for j, name in enumerate(names)}
    if n == 1:
        return names, [(x, "X") for x in names], ann
    edges = []
    for k in range(size // 2):
        parent = _circle_name(n - 1, k)
        for j in (2 * k - 1, 2 * k, 2 * k + 1):
            edges.append((names[j % size], parent))
    return names, edges, ann


def gen_circle(depth: int) -> TruncatedPoset:
    """Level 0 is the whole circle; level n >= 1 holds 2^(n+1) arcs ((j-1)/2^(n+1), (j+1)/2^(n+1)) mod 1."""
    return _grown(_circle_level(None, 0), _circle_level, depth, FLAGS)


# trees


def _tree_name(path: tuple[int, ...], k: int) -> str:
    if k <= 10:
        return "t" + "".join(str(i) for i in path)
    return "t" + "".join(f".{i}" for i in path)


def gen_tree(k: int, depth: int) -> TruncatedPoset:
    """The full k-ary tree: level n is the k^n words of length n."""
    if k < 2:
        raise ValueError("tree branching factor must be >= 2")

    def make(p, n):
        parents = [tuple(int(c) for c in _split(nm, k)) for nm in p.names(p.level(n - 1))]
        names, edges = [], []
        for path in parents:
            for i in range(k):
                child = _tree_name(path + (i,), k)
                names.append(child)
                edges.append((child, _tree_name(path, k)))
        return names, edges, None

    return _grown((["t"], [], None), make, depth, FLAGS)


def _split(name: str, k: int) -> list[str]:
    body = name[1:]
    if k <= 10:
        return list(body)
    return [c for c in body.split(".") if c]


# cofinite and the two-column example


def _cofinite_level(p: TruncatedPoset | None, n: int) -> tuple:
    names = [f"p{n}.{i}" for i in range(n + 1)]
    edges = []
    if n > 0:
        for i in range(n):
            edges.append((f"p{n}.{i}", f"p{n - 1}.{i}"))
            edges.append((f"p{n}.{n}", f"p{n - 1}.{i}"))
    return names, edges, None


def gen_cofinite(depth: int) -> TruncatedPoset:
    """p(n,i) for i <= n; p(n+1,i) and p(n+1,n+1) lie below p(n,i)."""
    return _grown(_cofinite_level(None, 0), _cofinite_level, depth, FLAGS)


def _f5_level(p: TruncatedPoset | None, n: int) -> tuple:
    if n == 0:
        return ["(0,0)"], [], None
    names = [f"({n},0)", f"({n - 1},1)"]
    edges = [(f"({n},0)", f"({n - 1},0)"), (f"({n - 1},1)", f"({n - 1},0)")]
    if n >= 2:
        edges.append((f"({n - 1},1)", f"({n - 2},1)"))
    return names, edges, None


def gen_f5(depth: int) -> TruncatedPoset:
    """omega x {0,1} with (n,d) <= (n',d') iff n' <= n and d' <= d."""
    return _grown(_f5_level(None, 0), _f5_level, depth, FLAGS)


# gradification and level subsequences


@dataclass(frozen=True)
class Stages:
    """Back-and-forth data between `left` (C side) and `right` (D side).

    fwd[n] relates C_n to D_n (pairs (c, d), c below-left), back[n] relates
    D_{n+1} to C_n (pairs (d, c)).
    """

    left: TruncatedPoset
    right: TruncatedPoset
    c_levels: tuple[frozenset, ...]
    d_levels: tuple[frozenset, ...]
    fwd: tuple[Relation, ...]
    back: tuple[Relation, ...]

    @property
    def depth(self) -> int:
        return len(self.fwd) - 1


def _gradify_level(src: TruncatedPoset, n: int) -> tuple:
    if src.growable or n <= src.depth:
        s = src.deepen(n)
        lv = s.level(n)
    elif src.finite:
        s = src
        lv = s.level(s.depth)
    else:
        raise GenerationFailed(f"cannot gradify past level {src.depth} of a fixed truncation")
    names = [f"{s.name(x)}@{n}" for x in lv]
    edges = []
    if n > 0:
        prev = s.level_set(min(n - 1, s.depth))
        for x in lv:
            for y in sorted((s.up(x) | {x}) & prev):
                edges.append((f"{s.name(x)}@{n}", f"{s.name(y)}@{n - 1}"))
    ann = {f"{s.name(x)}@{n}": (s.name(x), n) for x in lv}
    return names, edges, ann


def gradify(p: TruncatedPoset, depth: int | None = None) -> TruncatedPoset:
    """The disjoint union of the levels: (x,n) lies below (y,n-1) iff x <= y."""
    depth = p.depth if depth is None else depth
    flags = ["graded", "atomless"]
    if "graded" in p.flags and "edge_witnessing" in p.flags:
        flags.append("edge_witnessing")
    if p.growable or p.finite:
        grow = lambda g: _gradify_level(p, g.depth + 1)  # noqa: E731
    else:
        grow = None
        depth = min(depth, p.depth)
    names, edges, ann = _gradify_level(p, 0)
    g = build([names], edges, flags, grow=grow, annotations=ann)
    if depth > 0 and grow is None:
        for n in range(1, depth + 1):
            names, edges, ann = _gradify_level(p, n)
            g = extend(g, names, edges, annotations=ann)
        return g
    return g.deepen(depth)


def gradify_with_stages(p: TruncatedPoset, depth: int | None = None) -> tuple[TruncatedPoset, Stages]:
    """Gradification plus the staged relations: (x,n) fwd x, and y back (x,n) for y <= x."""
    depth = p.depth if depth is None else depth
    g = gradify(p, depth)
    src = p.deepen(depth) if p.growable else p
    c_levels, d_levels, fwd, back = [], [], [], []
    for n in range(depth + 1):
        c = frozenset(g.level(n))
        d = frozenset(src.level(min(n, src.depth)))
        c_levels.append(c)
        d_levels.append(d)
        pairs = frozenset((x, src.element(g.annotations[g.name(x)][0])) for x in c)
        fwd.append(Relation(c, d, pairs, g, src))
    for n in range(depth):
        col = {src.element(g.annotations[g.name(x)][0]): x for x in c_levels[n]}
        pairs = frozenset((y, col[u]) for y in d_levels[n + 1]
                          for u in (src.up(y) | {y}) & col.keys())
        back.append(Relation(d_levels[n + 1], c_levels[n], pairs, src, g))
    return g, Stages(g, src, tuple(c_levels), tuple(d_levels), tuple(fwd), tuple(back))


def level_subsequence(p: TruncatedPoset, step: int = 2, start: int = 0,
                      depth: int | None = None) -> TruncatedPoset:
    """The subposet made of levels start, start+step, ... (names kept)."""
    if step < 1 or start < 0:
        raise ValueError("need step >= 1 and start >= 0")
    graded = "graded" in p.flags
    flags = [f for f in ("graded", "atomless", "edge_witnessing") if f in p.flags]
    marks = {p.name(a) for a in p.atom_marks}

    def source_level(k: int) -> int:
        return start + step * k

    def make(q: TruncatedPoset | None, k: int) -> tuple:
        s = p.deepen(source_level(k))
        lv = s.level(source_level(k))
        names = [s.name(x) for x in lv]
        ann = {nm: p.annotations[nm] for nm in names if nm in p.annotations}
        edges = []
        if k > 0:
            uppers = [s.level_set(source_level(j)) for j in range(k)]
            scope = frozenset().union(*(uppers[-1:] if graded else uppers))
            for x in lv:
                for y in sorted(s.up(x) & scope):
                    edges.append((s.name(x), s.name(y)))
        return names, edges, ann

    if depth is None:
        depth = (p.depth - start) // step
    grow = (lambda q: make(q, q.depth + 1)) if p.growable else None  # noqa: E731
    names, edges, ann = make(None, 0)
    first_marks = [m for m in names if m in marks]
    q = build([names], edges, flags, first_marks, grow=grow, annotations=ann)
    if grow is not None:
        return q.deepen(depth)
    for k in range(1, depth + 1):
        names, edges, ann = make(q, k)
        q = extend(q, names, edges, atom_marks=[m for m in names if m in marks],
                   annotations=ann)
    return q


# crooked towers


@lru_cache(maxsize=None)
def crooked_walk(x: int, y: int) -> tuple[int, ...]:
    """A walk from x to y (steps of +-1) that folds back on itself at every scale."""
    if x > y:
        return tuple(reversed(crooked_walk(y, x)))
    if y - x <= 3:
        return tuple(range(x, y + 1))
    parts = (crooked_walk(x, y - 1), crooked_walk(y - 1, x + 1), crooked_walk(x + 1, y))
    out = list(parts[0])
    for part in parts[1:]:
        out.extend(part[1:])
    return tuple(out)


CROOKED_MAX_DEPTH = 4


def _positions(k: int, n: int, crooked: bool) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    if k == 1:
        return (0, 1)
    top = 2 * k - 2
    return crooked_walk(0, top) if crooked else tuple(range(top + 1))


def _crooked_level(p: TruncatedPoset, n: int, crooked: bool) -> tuple:
    parents = p.level(n - 1)
    k = len(parents)
    pos = _positions(k, n, crooked)
    names = [f"c{n}.{j}" for j in range(len(pos))]
    edges = []
    for name, t in zip(names, pos):
        if k == 1:
            ups = [0]
        elif t % 2 == 0:
            ups = [t // 2]
        else:
            ups = [t // 2, t // 2 + 1]
        for a in ups:
            edges.append((name, p.name(parents[a])))
    return names, edges, None


def gen_crooked(depth: int) -> TruncatedPoset:
    """A tower of paths, each crooked inside the previous one.

    Levels 1..4 have 1, 2, 3 and 9 links; deeper levels (used only as
    lookahead) refine straight.  Every consecutive pair is re-checked with
    is_path_crooked before returning.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > CROOKED_MAX_DEPTH:
        raise GenerationFailed(f"crooked levels beyond depth {CROOKED_MAX_DEPTH} are too large "
                               "to generate")

    def make(p, n):
        return _crooked_level(p, n, crooked=n <= CROOKED_MAX_DEPTH)

    p = _grown((["c0.0"], [], None), make, depth, FLAGS)
    from .spectrum import is_path_crooked

    for n in range(depth):
        v = is_path_crooked(p, p.level(n + 1), p.level(n), depth)
        if not v.holds:
            raise GenerationFailed(f"levels {n + 1} and {n} are not crooked: {v.outcome}")
    return p


GENERATORS = {
    "arc": gen_arc,
    "circle": gen_circle,
    "cofinite": gen_cofinite,
    "crooked": gen_crooked,
    "f5": gen_f5,
}
