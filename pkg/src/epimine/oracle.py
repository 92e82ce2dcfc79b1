"""Brute-force reference for occurrence counting on small instances.

Enumerates every constraint-satisfying occurrence of an episode and
computes the maximum number of pairwise non-overlapped occurrences by
exact interval scheduling. Deliberately simple and single-threaded; the
fast counters are tested for equality against this module.
"""

from __future__ import annotations

from bisect import bisect_right

from .errors import InstanceTooLargeError
from .model import Episode, EventStream

__all__ = [
    "enumerate_occurrences",
    "max_nonoverlapped",
    "count_by_enumeration",
    "MAX_EPISODE_SIZE",
    "MAX_STREAM_EVENTS",
]

MAX_EPISODE_SIZE = 5
MAX_STREAM_EVENTS = 60


def enumerate_occurrences(episode: Episode, stream: EventStream,
                          ) -> list[tuple[float, ...]]:
    """All timestamp tuples matching the episode's types and constraints.

    Tuples are ordered lexicographically by timestamps. Raises
    :class:`InstanceTooLargeError` when the instance exceeds the size
    caps (enumeration is exponential in the episode size).
    """
    if episode.size > MAX_EPISODE_SIZE:
        raise InstanceTooLargeError(
            f"episode size {episode.size} exceeds cap {MAX_EPISODE_SIZE}")
    if stream.n > MAX_STREAM_EVENTS:
        raise InstanceTooLargeError(
            f"stream length {stream.n} exceeds cap {MAX_STREAM_EVENTS}")

    times = stream.times_as_list()
    ids = stream.ids_as_list()
    by_type: dict[int, list[float]] = {}
    for tid, t in zip(ids, times):
        by_type.setdefault(tid, []).append(t)

    level_times: list[list[float]] = []
    for sym in episode.types:
        tid = stream.type_id(sym)
        level_times.append(by_type.get(tid, []) if tid is not None else [])

    out: list[tuple[float, ...]] = []
    prefix: list[float] = []

    def extend(level: int) -> None:
        if level == episode.size:
            out.append(tuple(prefix))
            return
        candidates = level_times[level]
        if level == 0:
            lo, hi = 0, len(candidates)
        else:
            c = episode.constraints[level - 1]
            t_prev = prefix[-1]
            lo = bisect_right(candidates, t_prev + c.t_low)
            hi = bisect_right(candidates, t_prev + c.t_high)
        for i in range(lo, hi):
            prefix.append(candidates[i])
            extend(level + 1)
            prefix.pop()

    extend(0)
    out.sort()
    return out


def max_nonoverlapped(occurrences: list[tuple[float, ...]]) -> int:
    """Largest set of occurrences with pairwise disjoint time spans.

    Spans are treated as closed intervals, so two occurrences sharing a
    boundary timestamp overlap. Single-event occurrences are points and
    distinct events never overlap. Uses the earliest-end greedy rule,
    which is optimal for disjoint interval selection.
    """
    if not occurrences:
        return 0
    if len(occurrences[0]) == 1:
        return len(occurrences)
    spans = sorted((occ[-1], occ[0]) for occ in occurrences)
    count = 0
    last_end = -float("inf")
    for end, start in spans:
        if start > last_end:
            count += 1
            last_end = end
    return count


def count_by_enumeration(episode: Episode, stream: EventStream) -> int:
    """Convenience composition of the two oracle steps."""
    return max_nonoverlapped(enumerate_occurrences(episode, stream))


def max_nonoverlapped_exhaustive(occurrences: list[tuple[float, ...]]) -> int:
    """Exponential check of :func:`max_nonoverlapped` for tiny inputs.

    Tries every subset; used only to validate the greedy rule in tests.
    """
    if len(occurrences) > 12:
        raise InstanceTooLargeError("exhaustive subset search capped at 12 occurrences")
    if not occurrences:
        return 0
    if len(occurrences[0]) == 1:
        return len(occurrences)
    spans = [(occ[0], occ[-1]) for occ in occurrences]
    m = len(spans)
    best = 0
    for mask in range(1 << m):
        chosen = [spans[i] for i in range(m) if mask >> i & 1]
        ok = all(a_end < b_start or b_end < a_start
                 for i, (a_start, a_end) in enumerate(chosen)
                 for (b_start, b_end) in chosen[i + 1:])
        if ok:
            best = max(best, len(chosen))
    return best
