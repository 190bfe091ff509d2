"""Exception hierarchy.

Every structural rejection names the violated invariant through the class
name, so callers can branch on type and the CLI can print something useful.
"""

from __future__ import annotations


class OpctError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, *, element: object = None) -> None:
        super().__init__(message)
        self.element = element

    @property
    def invariant(self) -> str:
        return type(self).__name__


class PosetError(OpctError):
    """A level/edge structure violates a truncation invariant."""


class LevelNotAntichain(PosetError):
    pass


class RefinementGap(PosetError):
    """An element of level n+1 has no upper bound in level n."""


class CorefinementGap(PosetError):
    """A non-atom of level n has no lower bound in level n+1."""


class SharedNonAtom(PosetError):
    """Consecutive levels share an element that is not marked as an atom."""


class InvalidEdge(PosetError):
    """Edge with an unknown endpoint, or one that does not point to a shallower level."""


class InvalidAtomMark(PosetError):
    """Atom mark on an element with lower bounds, or an atom that fails to persist."""


class DuplicateElement(PosetError):
    pass


class EmptyLevel(PosetError):
    pass


class DepthExceeded(OpctError):
    pass


class SizeBound(OpctError):
    pass


class EndpointMismatch(OpctError):
    pass


IncompatibleEndpoints = EndpointMismatch


class NotLinked(OpctError):
    pass


class NotUpClosed(OpctError):
    pass


class NotARefinement(OpctError):
    pass


class NotAPath(OpctError):
    pass


class StageMismatch(OpctError):
    pass


class GenerationFailed(OpctError):
    pass


class InvalidThread(OpctError):
    pass


class PosetSyntaxError(OpctError):
    """Malformed input text; `line` is 1-based."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
