"""Level-wise candidate generation with suffix/prefix joins."""

from __future__ import annotations

from typing import Sequence

from .model import Alphabet, Episode, IntervalConstraint, episode_sort_key

__all__ = ["seed_level1", "grow"]


def seed_level1(alphabet: Alphabet) -> list[Episode]:
    """One single-node episode per symbol, in canonical order."""
    episodes = [Episode((sym,), ()) for sym in alphabet]
    episodes.sort(key=episode_sort_key)
    return episodes


def grow(frequent: Sequence[Episode],
         constraint_set: Sequence[IntervalConstraint]) -> list[Episode]:
    """Candidates one node longer than the frequent episodes given.

    Size-1 inputs pair up every ordered combination (self-pairs
    included) once per constraint in the menu. Larger inputs join where
    one episode's suffix equals another's prefix, node types and edge
    constraints both; the joint keeps the left episode and appends the
    right's last node and edge. Output is deduplicated and canonically
    ordered. Every subepisode of a true frequent episode is itself
    frequent, so joining within one level loses nothing.
    """
    if not frequent:
        return []
    sizes = {ep.size for ep in frequent}
    if len(sizes) != 1:
        raise ValueError(f"input episodes must share one size, got {sorted(sizes)}")
    (size,) = sizes

    out: set[Episode] = set()
    if size == 1:
        menu = tuple(constraint_set)
        for left in frequent:
            for right in frequent:
                for constraint in menu:
                    out.add(Episode(left.types + right.types, (constraint,)))
    else:
        # Bucket by (N-1)-prefix so the join does not scan all pairs.
        by_prefix: dict[tuple, list[Episode]] = {}
        for ep in frequent:
            key = (ep.types[:-1], ep.constraints[:-1])
            by_prefix.setdefault(key, []).append(ep)
        for left in frequent:
            key = (left.types[1:], left.constraints[1:])
            for right in by_prefix.get(key, ()):
                out.add(Episode(left.types + (right.types[-1],),
                                left.constraints + (right.constraints[-1],)))
    return sorted(out, key=episode_sort_key)
