"""Text round-trips for event streams and episodes.

Stream lines are ``<timestamp>,<label>``; blank lines and lines whose
first non-space character is ``#`` are skipped. Episode text looks like
``A -(5,10]-> B -(0.5,2]-> C``; a bare symbol is a size-1 episode.
Numbers are written in shortest exact form, so parse(format(x)) is
always the identity.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import EpisodeParseError, MalformedLineError
from .model import (
    Alphabet,
    Episode,
    Event,
    EventStream,
    IntervalConstraint,
    check_order,
    check_symbols,
)

__all__ = [
    "format_number",
    "parse_stream",
    "stream_lines",
    "parse_episode",
    "format_episode",
]


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def parse_stream(lines: Iterable[str], alphabet: Alphabet | None = None,
                 require_sorted: bool = True) -> EventStream:
    """Parse stream text; raises MalformedLineError with a 1-based line
    number on the first bad line.

    Out-of-order timestamps raise UnsortedStreamError unless
    ``require_sorted`` is off (callers that re-sort pass False); with an
    explicit alphabet, foreign labels raise UnknownSymbolError either way.
    """
    events: list[Event] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(",")
        label = tail.strip()
        if not sep or not label or _SYMBOL_RE.fullmatch(label) is None:
            raise MalformedLineError(line_no, f"line {line_no}: expected '<timestamp>,<label>'")
        try:
            time = float(head)
        except ValueError:
            raise MalformedLineError(
                line_no, f"line {line_no}: bad timestamp {head.strip()!r}") from None
        try:
            events.append(Event(label, time))
        except ValueError as exc:
            raise MalformedLineError(line_no, f"line {line_no}: {exc}") from None
    stream = EventStream.from_events(events, alphabet)
    if alphabet is not None:
        check_symbols(stream)
    if require_sorted:
        check_order(stream)
    return stream


def stream_lines(stream: EventStream) -> list[str]:
    table = stream.symbols
    times = stream.times_as_list()
    ids = stream.ids_as_list()
    return [f"{format_number(times[i])},{table[ids[i]]}" for i in range(stream.n)]


_SYMBOL_RE = re.compile(r"[A-Za-z0-9_.]+")
_ARROW_RE = re.compile(r"-\(\s*([^\s,()\]]+)\s*,\s*([^\s,()\]]+)\s*\]->")


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def parse_episode(text: str) -> Episode:
    """Raises EpisodeParseError with a 0-based character position."""
    pos = _skip_ws(text, 0)
    m = _SYMBOL_RE.match(text, pos)
    if m is None:
        raise EpisodeParseError(pos, f"expected a symbol at position {pos}")
    types = [m.group(0)]
    constraints: list[IntervalConstraint] = []
    pos = _skip_ws(text, m.end())
    while pos < len(text):
        arrow_at = pos
        m = _ARROW_RE.match(text, pos)
        if m is None:
            raise EpisodeParseError(pos, f"expected '-(low,high]->' at position {pos}")
        try:
            low, high = float(m.group(1)), float(m.group(2))
        except ValueError:
            raise EpisodeParseError(
                arrow_at, f"bad bound in constraint at position {arrow_at}") from None
        try:
            constraints.append(IntervalConstraint(low, high))
        except ValueError as exc:
            raise EpisodeParseError(arrow_at, f"position {arrow_at}: {exc}") from None
        pos = _skip_ws(text, m.end())
        m = _SYMBOL_RE.match(text, pos)
        if m is None:
            raise EpisodeParseError(pos, f"expected a symbol at position {pos}")
        types.append(m.group(0))
        pos = _skip_ws(text, m.end())
    return Episode(tuple(types), tuple(constraints))


def format_episode(episode: Episode) -> str:
    parts = [episode.types[0]]
    for constraint, sym in zip(episode.constraints, episode.types[1:]):
        parts.append(f"-({format_number(constraint.t_low)},"
                     f"{format_number(constraint.t_high)}]->")
        parts.append(sym)
    return " ".join(parts)
