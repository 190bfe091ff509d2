"""Re-validation of report witnesses against a poset.

Witness kinds with a local meaning are re-checked directly from the order;
everything else is replayed (the check is run again and the named witness
must match).
"""

from __future__ import annotations

from typing import Any, Callable

from .poset import TruncatedPoset, lookahead
from .registry import run_check
from .report import Report, render

CONFIRMED, REFUTED, UNCHECKED = "confirmed", "refuted", "unchecked"


def _rank_gap(p: TruncatedPoset, w: Any, d: int) -> bool:
    x, u = (p.element(n) for n in w)
    return u in p.upper_covers(x) and p.rank(x) != p.rank(u) + 1


def _shared_non_atom(p: TruncatedPoset, w: Any, d: int) -> bool:
    x = p.element(w)
    shared = any(x in p.level_set(n) and x in p.level_set(n + 1) for n in range(p.depth))
    return shared and (bool(p.down(x)) or p.is_atom(x) is False)


def _unique_predecessor(p: TruncatedPoset, w: Any, d: int) -> bool:
    x, q = (p.element(n) for n in w)
    v = lookahead(p, d)
    if v.finite:
        return v.lower_covers(x) == {q}
    if "graded" in v.flags and x.level + 1 <= v.depth:
        nxt = v.level_set(x.level + 1)
        return {y for y in v.down(x) if y in nxt} == {q}
    return False


def _private_lower(p: TruncatedPoset, w: Any, d: int) -> bool:
    v = lookahead(p, d)
    for xn, qn in w.items():
        x, q = v.element(xn), v.element(qn)
        if not (v.lt(q, x) and v.up(q) == v.up(x) | {x}):
            return False
    return True


def _no_private_element(p: TruncatedPoset, w: Any, d: int) -> bool:
    m, n, xn = w
    v = p.deepen(n)
    x = v.element(xn)
    lm = v.level_set(m)
    below = [y for y in v.level(n) if v.leq(y, x)]
    return all(len((v.up(y) | {y}) & lm) > 1 for y in below)


VALIDATORS: dict[str, Callable[[TruncatedPoset, Any, int], bool]] = {
    "rank_gap": _rank_gap,
    "shared_non_atom": _shared_non_atom,
    "unique_predecessor": _unique_predecessor,
    "private_lower": _private_lower,
    "no_private_element": _no_private_element,
}


def verify_entry(p: TruncatedPoset, entry: dict, depth: int | None) -> tuple[str, str]:
    """(status, message) for one verdict entry of a check report."""
    kind, w, outcome = entry.get("kind", ""), entry.get("witness"), entry.get("outcome")
    if outcome == "Unknown":
        return UNCHECKED, "Unknown verdicts carry no witness"
    d = entry.get("exhausted_depth", depth or 0)
    fn = VALIDATORS.get(kind)
    if fn is not None:
        try:
            ok = fn(p, w, d)
        except (KeyError, TypeError, ValueError) as exc:
            return REFUTED, f"malformed {kind} witness: {exc}"
        return (CONFIRMED, f"{kind} witness re-checked") if ok else \
            (REFUTED, f"{kind} witness does not hold")
    try:
        again = run_check(entry["name"], p, depth)
    except KeyError:
        return UNCHECKED, f"no replay for {entry.get('name')!r}"
    if str(again.outcome) == outcome and render(again.witness, [p]) == w and again.kind == kind:
        return CONFIRMED, "replayed with the same witness"
    return REFUTED, f"replay gives {again.outcome} ({again.kind})"


def verify_report(report: Report, p: TruncatedPoset) -> list[tuple[str, str, str]]:
    depth = report.params.get("depth")
    out = []
    for entry in report.verdicts:
        status, msg = verify_entry(p, entry, depth)
        out.append((entry.get("name", "?"), status, msg))
    return out
