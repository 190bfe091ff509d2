import pytest

from opct import generators as gen
from opct.errors import (
    CorefinementGap,
    DepthExceeded,
    EmptyLevel,
    InvalidAtomMark,
    InvalidEdge,
    LevelNotAntichain,
    RefinementGap,
    SharedNonAtom,
)
from opct.poset import ElementId, build, default_depth, extend, from_order, lookahead


def test_single_cover_accepted():
    p = build([["X"], ["a", "b", "c"]], [("a", "X"), ("b", "X"), ("c", "X")])
    assert p.depth == 1
    assert [p.name(x) for x in p.level(1)] == ["a", "b", "c"]


def test_arc_levels_from_hasse_figure():
    top = ["[0,1]"]
    one = ["[0,1/2)", "(1/4,3/4)", "(1/2,1]"]
    two = ["[0,1/4)", "(1/8,3/8)", "(1/4,1/2)", "(3/8,5/8)", "(1/2,3/4)", "(5/8,7/8)", "(3/4,1]"]
    edges = [(x, "[0,1]") for x in one]
    for k in range(7):
        for j in range(3):
            if 2 * j <= k <= 2 * j + 2:
                edges.append((two[k], one[j]))
    p = build([top, one, two], edges, ["graded"])
    assert [len(p.level(n)) for n in range(3)] == [1, 3, 7]
    assert all(len(p.lower_covers(x)) == 3 for x in p.level(1))


def test_refinement_gap():
    with pytest.raises(RefinementGap):
        build([["X"], ["p", "q"]], [("q", "X")])


def test_corefinement_gap():
    with pytest.raises(CorefinementGap):
        build([["X", "Y"], ["p"]], [("p", "X")])


def test_level_must_be_antichain():
    with pytest.raises(LevelNotAntichain):
        build([["X"], ["a", "b"]], [("a", "X"), ("b", "a")])


def test_unknown_edge_target():
    with pytest.raises(InvalidEdge):
        build([["X"], ["a"]], [("a", "Y")])


def test_shared_element_needs_atom_mark():
    with pytest.raises(SharedNonAtom):
        build([["X", "a"], ["a", "b"]], [("b", "X")])
    p = build([["X", "a"], ["a", "b"]], [("b", "X")], atom_marks=["a"])
    assert p.is_atom(p.element("a")) is True


def test_atom_mark_on_non_minimal():
    with pytest.raises(InvalidAtomMark):
        build([["X"], ["a"]], [("a", "X")], atom_marks=["X"])


def test_leq_and_reflexivity(f1, arc):
    a = f1.element("a")
    assert f1.leq(a, a)
    assert not f1.leq(a, f1.element("d"))
    assert arc.leq(arc.element("(1/8,3/8)"), arc.element("[0,1/2)"))


def test_rank(f1, f5):
    assert f1.rank(f1.element("c")) == 0
    assert f1.rank(f1.element("b")) == 1
    deep = gen.gen_f5(6)
    for n in range(5):
        assert deep.rank(deep.element(f"({n},1)")) == n + 1


def test_level_sizes_from_order(arc):
    for n in range(5):
        assert len(arc.level_of(n)) == 2 ** (n + 1) - 1
    c = gen.gen_circle(4)
    assert [len(c.level_of(n)) for n in range(5)] == [1, 4, 8, 16, 32]


def test_f5_levels(f5):
    for n in range(1, 6):
        assert set(f5.names(f5.level_of(n))) == {f"({n},0)", f"({n - 1},1)"}


def test_closures(f1):
    b, c = f1.element("b"), f1.element("c")
    assert set(f1.names(f1.up_closure({b}))) == {"b", "c", "d"}
    assert set(f1.names(f1.down_closure_in_truncation({c}))) == {"a", "b", "c"}


def test_extend_matches_generator():
    a2 = gen.gen_arc(2)
    a3 = gen.gen_arc(3)
    level3 = [a3.name(x) for x in a3.level(3)]
    edges = [(a3.name(x), a3.name(u)) for x in a3.level(3) for u in a3.upper_covers(x)]
    manual = extend(a2.prefix(2), level3, edges)
    assert manual.depth == 3
    for x in a3.elements():
        for y in a3.elements():
            assert a3.leq(x, y) == manual.leq(manual.element(a3.name(x)), manual.element(a3.name(y)))


def test_extend_rejects_empty_level(arc):
    with pytest.raises(EmptyLevel):
        extend(arc.prefix(2), [], [])


def test_extend_f5_two_element_level():
    p = gen.gen_f5(3)
    q = p.deepen(4)
    assert q.depth == 4
    assert set(q.names(q.level(4))) == {"(4,0)", "(3,1)"}


def test_principal_filters_live_above(arc):
    for x in arc.elements():
        assert all(u.level < x.level for u in arc.up(x))


def test_depth_limits(f3):
    with pytest.raises(DepthExceeded):
        f3.level(5)
    with pytest.raises(DepthExceeded):
        f3.deepen(5)
    assert default_depth(f3) == f3.depth
    assert lookahead(gen.gen_arc(2), 2).depth == 3


def test_from_order_marks_persisting_atoms():
    p = from_order(["top", "a", "b", "c"], [("a", "top"), ("b", "top"), ("c", "b")])
    assert p.finite
    assert p.is_atom(p.element("a")) is True
    assert p.element("a") in p.level_set(2)


def test_element_ids_are_level_position(arc):
    for n in range(3):
        for i, x in enumerate(arc.level(n)):
            assert x == ElementId(n, i)
