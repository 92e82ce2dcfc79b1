"""Shared builders for the test suite.

Randomized suites draw strictly increasing continuous timestamps so that
no delay ever lands exactly on a window edge; the half-open edge rules
are pinned separately with hand-built integer streams.
"""

from __future__ import annotations

import random

from epimine import Alphabet, Episode, Event, EventStream, IntervalConstraint

# Filled by the acceptance suite; replayed after the run so the per-criterion
# verdict lines survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if ACCEPTANCE_LINES and config.option.capture != "no":
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def stream_of(*pairs: tuple[str, float]) -> EventStream:
    """Build a stream from (symbol, time) pairs, deriving the alphabet."""
    return EventStream.from_events([Event(sym, t) for sym, t in pairs])


def random_stream(
    rng: random.Random,
    symbols: list[str],
    n_events: int,
    min_gap: float = 0.05,
    max_gap: float = 1.5,
) -> EventStream:
    """Strictly increasing times; alphabet covers all of `symbols`."""
    t = 0.0
    events = []
    for _ in range(n_events):
        t += rng.uniform(min_gap, max_gap)
        events.append(Event(rng.choice(symbols), t))
    return EventStream.from_events(events, alphabet=Alphabet(tuple(sorted(symbols))))


def random_episode(
    rng: random.Random,
    symbols: list[str],
    size: int,
    relaxed: bool = False,
    max_low: float = 2.0,
    max_width: float = 4.0,
) -> Episode:
    types = tuple(rng.choice(symbols) for _ in range(size))
    constraints = []
    for _ in range(size - 1):
        low = 0.0 if relaxed or rng.random() < 0.4 else rng.uniform(0.0, max_low)
        constraints.append(IntervalConstraint(low, low + rng.uniform(0.1, max_width)))
    return Episode(types, tuple(constraints))


def random_instance(
    rng: random.Random,
    max_symbols: int = 5,
    max_events: int = 50,
    max_size: int = 4,
    relaxed: bool = False,
) -> tuple[Episode, EventStream]:
    """One (episode, stream) pair within the brute-force oracle's caps."""
    n_sym = rng.randint(1, max_symbols)
    symbols = [chr(ord("A") + i) for i in range(n_sym)]
    stream = random_stream(rng, symbols, rng.randint(0, max_events))
    episode = random_episode(rng, symbols, rng.randint(1, max_size), relaxed=relaxed)
    return episode, stream
