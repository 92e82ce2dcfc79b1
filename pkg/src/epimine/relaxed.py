"""Upper-bound counting for episodes whose lower bounds are all zero.

Dropping the lower bounds lets the counter keep a single timestamp per
level instead of a list: whenever any stored time could extend a level,
the most recent one can too, so the latest valid extension is all the
state that matters. The resulting count never falls below the exact
count of the original episode, which makes it a safe first-pass filter.
"""

from __future__ import annotations

from .errors import RelaxationRequiredError
from .model import Episode, EventStream, IntervalConstraint

__all__ = ["relax", "count_relaxed"]


def relax(episode: Episode) -> Episode:
    """Zero every lower bound, keeping types and upper bounds."""
    return Episode(
        episode.types,
        tuple(IntervalConstraint(0.0, c.t_high) for c in episode.constraints),
    )


def count_relaxed(episode: Episode, stream: EventStream) -> int:
    """Count non-overlapped occurrences using single-slot level state.

    ``episode`` must already be relaxed (every t_low zero); pass the
    result of :func:`relax`. A delay of exactly zero still fails, so
    simultaneous events never chain.
    """
    if not episode.is_relaxed:
        raise RelaxationRequiredError(
            "count_relaxed requires zero lower bounds; call relax() first")
    if stream.n == 0:
        return 0

    n_levels = episode.size
    last = n_levels - 1
    highs = [c.t_high for c in episode.constraints]
    level_map: dict[int, list[int]] = {}
    for lvl, sym in enumerate(episode.types):
        tid = stream.type_id(sym)
        if tid is None:
            return 0
        level_map.setdefault(tid, []).append(lvl)
    levels_desc = {tid: tuple(reversed(ls)) for tid, ls in level_map.items()}

    slots: list[float | None] = [None] * n_levels
    count = 0
    for tid, t in zip(stream.ids_as_list(), stream.times_as_list()):
        levels = levels_desc.get(tid)
        if levels is None:
            continue
        for lvl in levels:
            if lvl == 0:
                if n_levels == 1:
                    count += 1
                else:
                    slots[0] = t
                continue
            t_prev = slots[lvl - 1]
            if t_prev is None:
                continue
            delay = t - t_prev
            if 0.0 < delay <= highs[lvl - 1]:
                if lvl == last:
                    count += 1
                    slots = [None] * n_levels
                    break
                slots[lvl] = t
    return count
