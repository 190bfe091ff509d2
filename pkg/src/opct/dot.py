"""Hasse diagrams as DOT text, one rank per level."""

from __future__ import annotations

from typing import Mapping

from .poset import TruncatedPoset

DEFAULTS = {"rankdir": "TB", "node_shape": "plaintext", "name": "poset"}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_edges(p: TruncatedPoset) -> list[tuple]:
    """Covering pairs (upper, lower) among elements up to the truncation depth."""
    out = []
    for x in p.elements():
        for u in p.upper_covers(x):
            out.append((u, x))
    return sorted(out)


def export_dot(p: TruncatedPoset, options: Mapping[str, str] | None = None) -> str:
    opts = dict(DEFAULTS)
    opts.update(options or {})
    lines = [f"digraph {_quote(opts['name'])} {{",
             f"  rankdir={opts['rankdir']};",
             f"  node [shape={opts['node_shape']}];"]
    for n in range(p.depth + 1):
        home = [x for x in p.level(n) if x.level == n]
        if not home:
            continue
        lines.append("  { rank=same; " + " ".join(_quote(p.name(x)) + ";" for x in home) + " }")
    for u, x in hasse_edges(p):
        lines.append(f"  {_quote(p.name(u))} -> {_quote(p.name(x))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
