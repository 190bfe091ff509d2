"""Three-valued answers for semi-decidable questions about truncations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable


class Outcome(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


HOLDS = Outcome.HOLDS
FAILS = Outcome.FAILS
UNKNOWN = Outcome.UNKNOWN


@dataclass(frozen=True)
class Verdict:
    """Outcome plus evidence.

    `witness` is a plain structure of ElementIds (or tuples/dicts of them);
    `kind` tells `opct verify-witness` how to re-check it.  Holds means "no
    violation among the inspected levels"; `complete` is set when the answer
    is about the whole poset rather than the prefix.
    """

    outcome: Outcome
    witness: Any = None
    kind: str = ""
    exhausted_depth: int = 0
    note: str = ""
    assumptions: tuple[str, ...] = ()
    complete: bool = False
    details: tuple[Any, ...] = field(default=(), compare=False)

    @property
    def holds(self) -> bool:
        return self.outcome is HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is FAILS

    @property
    def unknown(self) -> bool:
        return self.outcome is UNKNOWN

    def __bool__(self) -> bool:  # guard against `if verdict:` slips
        raise TypeError("use .holds / .fails / .unknown on a Verdict")


def holds(witness: Any = None, kind: str = "", **kw: Any) -> Verdict:
    return Verdict(HOLDS, witness, kind, **kw)


def fails(witness: Any = None, kind: str = "", **kw: Any) -> Verdict:
    return Verdict(FAILS, witness, kind, **kw)


def unknown(depth: int, note: str = "", **kw: Any) -> Verdict:
    return Verdict(UNKNOWN, None, "", exhausted_depth=depth, note=note, **kw)


def conjoin(verdicts: Iterable[Verdict], depth: int, *, kind: str = "") -> Verdict:
    """All must hold: first Fails wins, then first Unknown, else Holds."""
    vs = list(verdicts)
    for v in vs:
        if v.fails:
            return v
    for v in vs:
        if v.unknown:
            return v
    assumptions = tuple(sorted({a for v in vs for a in v.assumptions}))
    complete = all(v.complete for v in vs)
    return Verdict(HOLDS, None, kind, exhausted_depth=depth, assumptions=assumptions,
                   complete=complete)


def exit_code(verdicts: Iterable[Verdict]) -> int:
    vs = list(verdicts)
    if any(v.fails for v in vs):
        return 1
    if any(v.unknown for v in vs):
        return 2
    return 0
