"""Line-based text formats for posets and refiners.

    poset v1
    flags: graded atomless
    level 0: top
    level 1: a b
    atom: b
    edge: a < top

Edges name elements already declared on earlier lines and must point from
a deeper level to a shallower one.  A non-atom listed in two consecutive
levels must be declared with `shared: <name>`.  `#` starts a comment.
"""

from __future__ import annotations

import sys
from importlib import resources
from typing import Iterable

from .combinatorics import Relation
from .errors import PosetSyntaxError, SharedNonAtom, StageMismatch
from .generators import Stages
from .poset import FLAGS, TruncatedPoset, build
from .refiners import make_refiner, stages_from_relations


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _split(no: int, line: str) -> tuple[str, str]:
    key, sep, rest = line.partition(":")
    if not sep:
        raise PosetSyntaxError(no, f"expected 'key: value', got {line!r}")
    return key.strip(), rest.strip()


def _arrow(no: int, value: str, sym: str) -> tuple[str, str]:
    parts = value.split()
    if len(parts) != 3 or parts[1] != sym:
        raise PosetSyntaxError(no, f"expected '<name> {sym} <name>', got {value!r}")
    return parts[0], parts[2]


def _header(lines, kind: str) -> None:
    first = next(lines, None)
    if first is None:
        raise PosetSyntaxError(1, "empty input")
    no, line = first
    if line.split() != [kind, "v1"]:
        raise PosetSyntaxError(no, f"expected header '{kind} v1', got {line!r}")


def parse_poset(text: str) -> TruncatedPoset:
    lines = _lines(text)
    _header(lines, "poset")
    flags: list[str] = []
    levels: list[list[str]] = []
    level_of: dict[str, int] = {}
    marks: list[str] = []
    shared: set[str] = set()
    edges: list[tuple[str, str]] = []
    for no, line in lines:
        key, value = _split(no, line)
        if key == "flags":
            for f in value.split():
                if f not in FLAGS:
                    raise PosetSyntaxError(no, f"unknown flag {f!r}")
                flags.append(f)
        elif key.startswith("level"):
            idx = key[len("level"):].strip()
            if not idx.isdigit() or int(idx) != len(levels):
                raise PosetSyntaxError(no, f"expected 'level {len(levels)}', got {key!r}")
            names = value.split()
            if not names:
                raise PosetSyntaxError(no, f"level {idx} is empty")
            for nm in names:
                level_of.setdefault(nm, len(levels))
            levels.append(names)
        elif key == "atom":
            for nm in value.split():
                if nm not in level_of:
                    raise PosetSyntaxError(no, f"atom mark on undeclared name {nm!r}")
                marks.append(nm)
        elif key == "shared":
            for nm in value.split():
                if nm not in level_of:
                    raise PosetSyntaxError(no, f"shared mark on undeclared name {nm!r}")
                shared.add(nm)
        elif key == "edge":
            lo, hi = _arrow(no, value, "<")
            for nm in (lo, hi):
                if nm not in level_of:
                    raise PosetSyntaxError(no, f"edge mentions undeclared name {nm!r}")
            if level_of[hi] >= level_of[lo]:
                raise PosetSyntaxError(no, f"edge {lo} < {hi} does not point to a shallower level")
            edges.append((lo, hi))
        else:
            raise PosetSyntaxError(no, f"unknown key {key!r}")
    if not levels:
        raise PosetSyntaxError(1, "no levels")
    if not shared:
        return build(levels, edges, flags, marks, strict=True)
    for prev, cur in zip(levels, levels[1:]):
        for nm in sorted(set(prev) & set(cur) - shared - set(marks)):
            raise SharedNonAtom(f"{nm!r} is shared by two levels but is neither an atom "
                                "nor declared shared", element=nm)
    return build(levels, edges, flags, marks, strict=False)


def serialize_poset(p: TruncatedPoset) -> str:
    """Canonical form: flags in fixed order, levels, atoms, edges by (lower, upper).

    Carried-over elements without lower bounds are written as atoms, the rest
    as `shared`.
    """
    out = ["poset v1"]
    flags = [f for f in FLAGS if f in p.flags and f not in p.assumed]
    if flags:
        out.append("flags: " + " ".join(flags))
    for n in range(p.depth + 1):
        out.append(f"level {n}: " + " ".join(p.name(x) for x in p.level(n)))
    carried = {x for n in range(1, p.depth + 1) for x in p.level(n) if x.level < n}
    atoms = set(p.atom_marks) | {x for x in carried if not p.down(x)}
    for a in sorted(atoms):
        out.append(f"atom: {p.name(a)}")
    for x in sorted(carried - atoms):
        out.append(f"shared: {p.name(x)}")
    for lo, hi in sorted(p.edges):
        out.append(f"edge: {p.name(lo)} < {p.name(hi)}")
    return "\n".join(out) + "\n"


def _named(no: int, p: TruncatedPoset, nm: str, side: str):
    try:
        return p.element(nm)
    except KeyError:
        raise PosetSyntaxError(no, f"{nm!r} is not an element of the {side} poset") from None


def parse_refiner(text: str, q: TruncatedPoset, p: TruncatedPoset) -> Relation:
    """`pair: <q> > <p>` lines; q from the target, p from the source."""
    lines = _lines(text)
    _header(lines, "refiner")
    pairs = []
    for no, line in lines:
        key, value = _split(no, line)
        if key != "pair":
            raise PosetSyntaxError(no, f"expected 'pair:', got {key!r}")
        a, b = _arrow(no, value, ">")
        pairs.append((_named(no, q, a, "target"), _named(no, p, b, "source")))
    return make_refiner(q, p, pairs)


def serialize_refiner(r: Relation) -> str:
    q, p = r.target_poset, r.source_poset
    out = ["refiner v1"]
    for a, b in sorted(r.pairs):
        out.append(f"pair: {q.name(a)} > {p.name(b)}")
    return "\n".join(out) + "\n"


def parse_stages(text: str, left: TruncatedPoset, right: TruncatedPoset) -> Stages:
    """`stage n:` sections with `fwd: <c> > <d>` and `back: <d> > <c>` lines.

    c names elements of `left`, d names elements of `right`; the left token
    is always the first coordinate of the pair.
    """
    lines = _lines(text)
    _header(lines, "refiner")
    fwd: list[list[tuple]] = []
    back: list[list[tuple]] = []
    for no, line in lines:
        key, value = _split(no, line)
        if key.startswith("stage"):
            idx = key[len("stage"):].strip()
            if not idx.isdigit() or int(idx) != len(fwd) or value:
                raise PosetSyntaxError(no, f"expected 'stage {len(fwd)}:', got {line!r}")
            fwd.append([])
            back.append([])
            continue
        if not fwd:
            raise PosetSyntaxError(no, "pair outside a stage section")
        a, b = _arrow(no, value, ">")
        if key == "fwd":
            fwd[-1].append((_named(no, left, a, "left"), _named(no, right, b, "right")))
        elif key == "back":
            back[-1].append((_named(no, right, a, "right"), _named(no, left, b, "left")))
        else:
            raise PosetSyntaxError(no, f"expected 'fwd:' or 'back:', got {key!r}")
    if not fwd:
        raise PosetSyntaxError(1, "no stages")
    if back[-1]:
        raise StageMismatch(f"stage {len(fwd) - 1} is the last one and cannot have back pairs")
    return stages_from_relations(left, right, fwd, back[:-1])


def serialize_stages(st: Stages) -> str:
    out = ["refiner v1"]
    lp, rp = st.left, st.right
    for n, f in enumerate(st.fwd):
        out.append(f"stage {n}:")
        for c, d in sorted(f.pairs):
            out.append(f"fwd: {lp.name(c)} > {rp.name(d)}")
        if n < len(st.back):
            for d, c in sorted(st.back[n].pairs):
                out.append(f"back: {rp.name(d)} > {lp.name(c)}")
    return "\n".join(out) + "\n"


def read_text(path: str, stdin=None) -> str:
    """`-` reads standard input."""
    if path == "-":
        return (stdin or sys.stdin).read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def names_line(p: TruncatedPoset, xs: Iterable) -> str:
    return " ".join(p.names(sorted(xs)))


FIXTURES = ("f1", "f3", "f5", "f6", "nongraded")


def load_fixture(name: str) -> TruncatedPoset:
    """A shipped fixture poset by short name (f1, f3, f5, f6, nongraded)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}")
    text = resources.files("opct").joinpath("fixtures", f"{name}.poset").read_text("utf-8")
    return parse_poset(text)
