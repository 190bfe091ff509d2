"""JSON reports (schema opct-report-v1) with witnesses rendered by name."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .poset import ElementId, TruncatedPoset
from .verdict import Verdict

SCHEMA = "opct-report-v1"


def _namer(posets: Sequence[TruncatedPoset]):
    def name(e: ElementId) -> str:
        for p in posets:
            if e in p:
                return p.name(e)
        return repr(e)
    return name


def render(w: Any, posets: Sequence[TruncatedPoset]) -> Any:
    """Plain JSON data; ElementIds become names (first poset that has them)."""
    name = _namer(posets)

    def go(x: Any) -> Any:
        if isinstance(x, ElementId):
            return name(x)
        if isinstance(x, dict):
            return {str(go(k)): go(v) for k, v in sorted(x.items(), key=lambda kv: repr(kv[0]))}
        if isinstance(x, (set, frozenset)):
            return [go(y) for y in sorted(x, key=_sort_key)]
        if isinstance(x, (list, tuple)):
            return [go(y) for y in x]
        if isinstance(x, Fraction):
            return str(x)
        if x is None or isinstance(x, (bool, int, float, str)):
            return x
        return str(x)

    return go(w)


def _sort_key(x: Any):
    return (0, x) if isinstance(x, ElementId) else (1, repr(x))


def verdict_json(name: str, v: Verdict, posets: Sequence[TruncatedPoset]) -> dict:
    return {
        "name": name,
        "outcome": str(v.outcome),
        "kind": v.kind,
        "witness": render(v.witness, posets),
        "exhausted_depth": v.exhausted_depth,
        "complete": v.complete,
        "assumptions": list(v.assumptions),
        "note": v.note,
    }


def file_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Report:
    command: str
    inputs: list[dict] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def add_input(self, path: str, text: str) -> None:
        self.inputs.append({"path": path, "sha256": file_digest(text)})

    def add(self, name: str, v: Verdict, posets: Sequence[TruncatedPoset]) -> None:
        self.verdicts.append(verdict_json(name, v, posets))

    def to_json(self) -> str:
        body = {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "params": self.params,
            "verdicts": self.verdicts,
            "data": self.data,
            "wall_time": round(self.wall_time, 6),
        }
        return json.dumps(body, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        body = json.loads(text)
        if body.get("schema") != SCHEMA:
            raise ValueError(f"not an {SCHEMA} report")
        return cls(body["command"], body.get("inputs", []), body.get("verdicts", []),
                   body.get("data", {}), body.get("params", {}), body.get("wall_time", 0.0))
