"""Exception types raised by the episode mining engine.

The CLI maps these onto exit codes: input problems exit 2, internal
consistency failures exit 3.
"""

from __future__ import annotations

__all__ = [
    "EpisodeMiningError",
    "InputError",
    "UnsortedStreamError",
    "UnknownSymbolError",
    "MalformedLineError",
    "EpisodeParseError",
    "EmptyStreamError",
    "RelaxationRequiredError",
    "DegenerateFitError",
    "InstanceTooLargeError",
    "ConsistencyError",
    "NoJoinError",
]


class EpisodeMiningError(Exception):
    """Base class for all engine errors."""


class InputError(EpisodeMiningError):
    """Bad user-supplied data (streams, episode text, CLI arguments)."""


class UnsortedStreamError(InputError):
    """Event at ``index`` has a smaller timestamp than its predecessor."""

    def __init__(self, index: int, message: str | None = None) -> None:
        self.index = index
        super().__init__(message or f"stream is not sorted at event index {index}")


class UnknownSymbolError(InputError):
    """Event at ``index`` uses a symbol outside the declared alphabet."""

    def __init__(self, index: int, symbol: str | None = None) -> None:
        self.index = index
        self.symbol = symbol
        detail = f" ({symbol!r})" if symbol is not None else ""
        super().__init__(f"unknown symbol at event index {index}{detail}")


class MalformedLineError(InputError):
    """Stream text line ``line_no`` (1-based) does not parse."""

    def __init__(self, line_no: int, message: str | None = None) -> None:
        self.line_no = line_no
        super().__init__(message or f"malformed stream line {line_no}")


class EpisodeParseError(InputError):
    """Episode text fails to parse at character ``position`` (0-based)."""

    def __init__(self, position: int, message: str | None = None) -> None:
        self.position = position
        super().__init__(message or f"episode text invalid at position {position}")


class EmptyStreamError(InputError):
    """Operation requires at least one event."""


class RelaxationRequiredError(EpisodeMiningError):
    """The relaxed counter was given an episode with a nonzero lower bound."""


class DegenerateFitError(EpisodeMiningError):
    """Crossover fitting needs at least two distinct episode sizes."""


class InstanceTooLargeError(EpisodeMiningError):
    """Brute-force enumeration refused an instance above its size caps."""


class ConsistencyError(EpisodeMiningError):
    """An internal invariant failed; results cannot be trusted."""


class NoJoinError(ConsistencyError):
    """Segment summary join found no matching pair at a merge boundary."""
