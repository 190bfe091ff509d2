from fractions import Fraction

import pytest

from opct import generators as gen
from opct.errors import GenerationFailed
from opct.predicates import check_graded

from oracles import arc_label, arc_level


@pytest.mark.parametrize("n", range(5))
def test_arc_levels_match_dyadic_intervals(arc, n):
    assert arc.names(arc.level(n)) == [arc_label(*iv) for iv in arc_level(n)]


def test_arc_interval_names():
    assert gen.interval_name(Fraction(0), Fraction(1, 2)) == "[0,1/2)"
    assert gen.interval_name(Fraction(1, 4), Fraction(1)) == "(1/4,1]"


def test_arc_grows_lazily():
    a = gen.gen_arc(2)
    assert a.depth == 2 and a.growable
    assert a.deepen(4).depth == 4
    assert len(a.deepen(4).level(4)) == 31


def test_circle_levels_wrap():
    c = gen.gen_circle(3)
    assert c.depth == 3
    assert check_graded(c).holds


def test_tree_shape(tree):
    assert [len(tree.level(n)) for n in range(5)] == [1, 2, 4, 8, 16]


def test_cofinite_two_predecessors(f6):
    deeper = gen.gen_cofinite(f6.depth + 1)
    for x in f6.elements():
        assert len(deeper.lower_covers(deeper.element(f6.name(x)))) == 2
        if 0 < x.level:
            ups = f6.upper_covers(x)
            assert len(ups) == (x.level if f6.name(x).endswith(f".{x.level}") else 1)


def test_crooked_sizes():
    p = gen.gen_crooked(4)
    assert [len(p.level(n)) for n in range(5)] == [1, 1, 2, 3, 9]
    with pytest.raises(GenerationFailed):
        gen.gen_crooked(5)
    with pytest.raises(ValueError):
        gen.gen_crooked(0)


def test_crooked_walk_endpoints():
    w = gen.crooked_walk(0, 6)
    assert w[0] == 0 and w[-1] == 6
    assert all(abs(a - b) == 1 for a, b in zip(w, w[1:]))


def test_level_subsequence_keeps_names(arc):
    e = gen.level_subsequence(gen.gen_arc(8), 2, depth=3)
    for k in range(4):
        assert e.names(e.level(k)) == arc.deepen(6).names(arc.deepen(6).level(2 * k))
    with pytest.raises(ValueError):
        gen.level_subsequence(arc, 0)


def test_gradify_is_graded_and_atomless(f1):
    g = gen.gradify(f1, 3)
    assert check_graded(g).holds
    assert "atomless" in g.flags
    assert g.names(g.level(0)) == ["c@0", "d@0"]


def test_gradify_edges_follow_order(arc):
    g = gen.gradify(gen.gen_arc(3), 2)
    x, y = g.element("[0,1/4)@2"), g.element("[0,1/2)@1")
    assert g.leq(x, y)
    assert not g.leq(g.element("(3/4,1]@2"), y)


def test_gradify_stages_shape(arc):
    g, st = gen.gradify_with_stages(gen.gen_arc(3), 3)
    assert st.depth == 3 and len(st.back) == 3
    for n in range(4):
        assert st.fwd[n].is_surjective()
