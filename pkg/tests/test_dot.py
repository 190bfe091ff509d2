from opct import generators as gen
from opct.dot import export_dot, hasse_edges


def test_arc_dot_counts():
    p = gen.gen_arc(2)
    text = export_dot(p)
    assert text.startswith('digraph "poset" {')
    assert text.count("->") == len(hasse_edges(p)) == 12
    assert sum(len(p.level(n)) for n in range(3)) == 11
    assert text.count("rank=same") == 3


def test_dot_is_deterministic(f6):
    assert export_dot(f6) == export_dot(f6)


def test_cofinite_dot_shape(f6):
    text = export_dot(f6, {"rankdir": "BT"})
    assert "rankdir=BT;" in text
    assert '"p1.1" -> "p2.2";' in text
    edges = hasse_edges(f6)
    assert len(edges) == sum(2 * n for n in range(1, f6.depth + 1))


def test_quoting():
    from opct.poset import build
    p = build([['a"b']], [])
    assert '"a\\"b"' in export_dot(p)
