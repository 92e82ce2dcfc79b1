"""Core domain types: events, streams, interval constraints, episodes.

Counting kernels work on the columnar view of an :class:`EventStream`
(interned integer type ids plus a float timestamp array); the row view
(:class:`Event` objects) exists for construction, inspection and tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import UnknownSymbolError, UnsortedStreamError

__all__ = [
    "Event",
    "Alphabet",
    "EventStream",
    "IntervalConstraint",
    "Episode",
    "EpisodeCount",
    "validate_stream",
    "episode_sort_key",
]


@dataclass(frozen=True, slots=True)
class Event:
    """A single timestamped occurrence of an event type."""

    event_type: str
    time: float

    def __post_init__(self) -> None:
        if not self.event_type:
            raise ValueError("event type must be a non-empty string")
        if not math.isfinite(self.time) or self.time < 0.0:
            raise ValueError(f"event time must be finite and >= 0, got {self.time!r}")


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of event type symbols; order fixes the interned ids."""

    symbols: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be unique")
        if any(not s for s in self.symbols):
            raise ValueError("alphabet symbols must be non-empty strings")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"symbol {symbol!r} is not in the alphabet") from None


class EventStream:
    """Immutable, time-ordered sequence of events over an alphabet.

    Construction does not reject unknown symbols or ordering problems so
    that :func:`validate_stream` can report them with event indices; the
    counting layers require a validated stream.
    """

    __slots__ = ("alphabet", "_symbols", "_times", "_ids", "_times_list", "_ids_list")

    def __init__(self, times: np.ndarray, type_ids: np.ndarray, alphabet: Alphabet,
                 symbols: tuple[str, ...] | None = None) -> None:
        times = np.asarray(times, dtype=np.float64)
        type_ids = np.asarray(type_ids, dtype=np.int64)
        if times.shape != type_ids.shape or times.ndim != 1:
            raise ValueError("times and type_ids must be 1-d arrays of equal length")
        # symbols is the intern table: alphabet order first, then any
        # out-of-alphabet symbols observed at construction.
        if symbols is None:
            symbols = alphabet.symbols
        if symbols[: len(alphabet.symbols)] != alphabet.symbols:
            raise ValueError("intern table must start with the alphabet symbols")
        times.flags.writeable = False
        type_ids.flags.writeable = False
        self.alphabet = alphabet
        self._symbols = symbols
        self._times = times
        self._ids = type_ids
        self._times_list: list[float] | None = None
        self._ids_list: list[int] | None = None

    @classmethod
    def from_events(cls, events: Iterable[Event | tuple[str, float]],
                    alphabet: Alphabet | Sequence[str] | None = None) -> "EventStream":
        """Build a stream from (symbol, time) pairs or :class:`Event` rows.

        When ``alphabet`` is omitted it is derived as the sorted set of
        observed symbols.
        """
        rows: list[tuple[str, float]] = []
        for ev in events:
            if isinstance(ev, Event):
                rows.append((ev.event_type, ev.time))
            else:
                sym, t = ev
                rows.append((Event(sym, float(t)).event_type, float(t)))
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted({sym for sym, _ in rows})))
        elif not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        symbols = list(alphabet.symbols)
        index = {s: i for i, s in enumerate(symbols)}
        ids = np.empty(len(rows), dtype=np.int64)
        times = np.empty(len(rows), dtype=np.float64)
        for i, (sym, t) in enumerate(rows):
            if sym not in index:
                index[sym] = len(symbols)
                symbols.append(sym)
            ids[i] = index[sym]
            times[i] = t
        return cls(times, ids, alphabet, tuple(symbols))

    @property
    def n(self) -> int:
        return self._times.shape[0]

    def __len__(self) -> int:
        return self.n

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def type_ids(self) -> np.ndarray:
        return self._ids

    @property
    def symbols(self) -> tuple[str, ...]:
        """Intern table: alphabet symbols plus any unknown extras."""
        return self._symbols

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(Event(self._symbols[i], t)
                     for i, t in zip(self._ids.tolist(), self._times.tolist()))

    def times_as_list(self) -> list[float]:
        if self._times_list is None:
            self._times_list = self._times.tolist()
        return self._times_list

    def ids_as_list(self) -> list[int]:
        if self._ids_list is None:
            self._ids_list = self._ids.tolist()
        return self._ids_list

    def type_id(self, symbol: str) -> int | None:
        """Interned id for ``symbol``, or None if never observed/declared."""
        try:
            return self._symbols.index(symbol)
        except ValueError:
            return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (self.alphabet == other.alphabet
                and self._symbols == other._symbols
                and np.array_equal(self._times, other._times)
                and np.array_equal(self._ids, other._ids))

    def __hash__(self) -> int:  # streams are large; identity hashing is enough
        return id(self)

    def __repr__(self) -> str:
        return f"EventStream(n={self.n}, alphabet={self.alphabet.symbols!r})"


def check_symbols(stream: EventStream) -> EventStream:
    """Raise :class:`UnknownSymbolError` at the first event whose symbol
    falls outside the declared alphabet."""
    ids = stream.type_ids
    if ids.size:
        unknown = ids >= len(stream.alphabet)
        if unknown.any():
            idx = int(np.argmax(unknown))
            raise UnknownSymbolError(idx, stream.symbols[int(ids[idx])])
    return stream


def check_order(stream: EventStream) -> EventStream:
    """Raise :class:`UnsortedStreamError` at the first event whose
    timestamp is smaller than its predecessor's."""
    times = stream.times
    if times.size:
        bad = np.diff(times) < 0.0
        if bad.any():
            raise UnsortedStreamError(int(np.argmax(bad)) + 1)
    return stream


def validate_stream(stream: EventStream) -> EventStream:
    """Check alphabet membership then ordering; return the stream unchanged."""
    return check_order(check_symbols(stream))


@dataclass(frozen=True, slots=True)
class IntervalConstraint:
    """Half-open inter-event delay window (t_low, t_high].

    A delay d is accepted iff t_low < d <= t_high; a delay equal to the
    lower bound fails, a delay equal to the upper bound passes.
    """

    t_low: float
    t_high: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_low) and math.isfinite(self.t_high)):
            raise ValueError("constraint bounds must be finite")
        if self.t_low < 0.0:
            raise ValueError(f"t_low must be >= 0, got {self.t_low!r}")
        if not self.t_high > self.t_low:
            raise ValueError(
                f"t_high must exceed t_low, got ({self.t_low!r}, {self.t_high!r}]")

    def contains(self, delay: float) -> bool:
        return self.t_low < delay <= self.t_high

    @property
    def is_relaxed(self) -> bool:
        return self.t_low == 0.0


@dataclass(frozen=True, slots=True)
class Episode:
    """Ordered event types with one delay constraint per adjacent pair."""

    types: tuple[str, ...]
    constraints: tuple[IntervalConstraint, ...]

    def __post_init__(self) -> None:
        if len(self.types) < 1:
            raise ValueError("an episode needs at least one event type")
        if len(self.constraints) != len(self.types) - 1:
            raise ValueError(
                f"{len(self.types)} types require {len(self.types) - 1} constraints, "
                f"got {len(self.constraints)}")

    @property
    def size(self) -> int:
        return len(self.types)

    @property
    def max_span(self) -> float:
        """Largest possible time between first and last event of one occurrence."""
        return sum(c.t_high for c in self.constraints)

    @property
    def is_relaxed(self) -> bool:
        return all(c.is_relaxed for c in self.constraints)


def episode_sort_key(episode: Episode) -> tuple:
    """Canonical total order: size, then types, then constraint bounds."""
    return (episode.size, episode.types,
            tuple((c.t_low, c.t_high) for c in episode.constraints))


@dataclass(frozen=True, slots=True)
class EpisodeCount:
    """An episode paired with its non-overlapped occurrence count."""

    episode: Episode
    count: int

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")
