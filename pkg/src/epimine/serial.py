"""Non-overlapped occurrence counting with inter-event delay windows.

The counter keeps one list of candidate timestamps per episode level.
Each event is offered to every level whose type matches, highest level
first, so an event first tries to extend existing partial occurrences
before registering as a fresh start. Completing the last level counts
one occurrence and clears all state, which makes counted occurrences
pairwise non-overlapped and the total maximal.
"""

from __future__ import annotations

from .model import Episode, EpisodeCount, EventStream
from .parallel import map_with_workers, shared_payload

__all__ = ["count_serial", "count_serial_batch"]


def _levels_by_type(episode: Episode, stream: EventStream) -> dict[int, tuple[int, ...]]:
    """Map interned type id -> episode levels using it, highest first."""
    levels: dict[int, list[int]] = {}
    for lvl, sym in enumerate(episode.types):
        tid = stream.type_id(sym)
        if tid is not None:
            levels.setdefault(tid, []).append(lvl)
    return {tid: tuple(reversed(ls)) for tid, ls in levels.items()}


def _count_kernel(episode: Episode, ids: list[int], times: list[float],
                  level_map: dict[int, tuple[int, ...]]) -> int:
    n_levels = episode.size
    last = n_levels - 1
    lows = [c.t_low for c in episode.constraints]
    highs = [c.t_high for c in episode.constraints]
    state: list[list[float]] = [[] for _ in range(n_levels)]
    count = 0

    for tid, t in zip(ids, times):
        levels = level_map.get(tid)
        if levels is None:
            continue
        completed = False
        for lvl in levels:
            if lvl == 0:
                if n_levels == 1:
                    count += 1
                else:
                    state[0].append(t)
                continue
            prev = state[lvl - 1]
            low = lows[lvl - 1]
            high = highs[lvl - 1]
            # Newest entries first; delays grow toward older entries, so
            # the first delay above the upper bound ends the scan.
            for j in range(len(prev) - 1, -1, -1):
                delay = t - prev[j]
                if delay > high:
                    break
                if delay > low:
                    if lvl == last:
                        count += 1
                        state = [[] for _ in range(n_levels)]
                        completed = True
                    else:
                        state[lvl].append(t)
                    break
            if completed:
                break
    return count


def count_serial(episode: Episode, stream: EventStream) -> int:
    """Maximum number of pairwise non-overlapped occurrences of ``episode``.

    The stream must already be validated (sorted, known symbols). Event
    types absent from the stream simply yield a count of zero.
    """
    if stream.n == 0:
        return 0
    if any(stream.type_id(s) is None for s in episode.types):
        return 0
    level_map = _levels_by_type(episode, stream)
    return _count_kernel(episode, stream.ids_as_list(), stream.times_as_list(), level_map)


def _batch_task(bounds: tuple[int, int]) -> list[int]:
    stream, episodes = shared_payload()
    start, stop = bounds
    return [count_serial(episodes[i], stream) for i in range(start, stop)]


def count_serial_batch(episodes: list[Episode], stream: EventStream,
                       workers: int = 1) -> list[EpisodeCount]:
    """Count several episodes over one stream, optionally in parallel.

    Results are returned in input order and are identical for any worker
    count; parallelism only shards the episode list.
    """
    if workers <= 1 or len(episodes) <= 1:
        return [EpisodeCount(ep, count_serial(ep, stream)) for ep in episodes]
    eps = tuple(episodes)
    n_chunks = min(len(eps), workers * 4)
    bounds = [round(i * len(eps) / n_chunks) for i in range(n_chunks + 1)]
    tasks = [(bounds[i], bounds[i + 1])
             for i in range(n_chunks) if bounds[i] < bounds[i + 1]]
    counts: list[int] = []
    for chunk in map_with_workers(_batch_task, tasks, workers, payload=(stream, eps)):
        counts.extend(chunk)
    return [EpisodeCount(ep, c) for ep, c in zip(eps, counts)]
