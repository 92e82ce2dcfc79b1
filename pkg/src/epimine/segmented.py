"""Segment-parallel counting that reproduces the serial count exactly.

The stream's time span is cut into equal-duration segments. Independent
counting machines run per segment and emit a compact summary
``(a, count, b)``:

* ``a``   end time of the machine's first completion after the segment
          start, when it lands within the episode's maximum span of the
          boundary (sentinel: the segment start itself);
* ``count``  completions ending inside the segment's own window, the
          one ending at ``a`` included;
* ``b``   end time of the single occurrence the machine is allowed to
          finish past the segment end, found by reading at most one
          maximum span beyond it and never counted here (sentinel: the
          segment end).

Summaries of adjacent runs join on ``b_left = a_right`` (sentinel joins
sentinel), adding counts, so every boundary-crossing occurrence is
counted exactly once, by the side that owns its completion.

Machines are seeded at the segment start, at offset positions one
constraint window at a time before it, and after each event of the
episode's final type within one maximum span before the boundary. The
offset seeds mirror the possible ways an occurrence can straddle the
boundary; the completion-anchored seeds additionally cover the case
where the serial counter's last reset happened inside the lookback
window, which the offset seeds alone can miss.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import ConsistencyError, EmptyStreamError, NoJoinError
from .model import Episode, EventStream
from .parallel import map_with_workers, shared_payload
from .serial import _levels_by_type

__all__ = [
    "SegmentPlan",
    "SegmentSummary",
    "SegmentedCountStats",
    "plan_segments",
    "map_segment",
    "concatenate",
    "count_segmented",
    "count_segmented_with_stats",
]


@dataclass(frozen=True, slots=True)
class SegmentPlan:
    """Strictly increasing segment boundaries; segment p covers
    (boundaries[p-1], boundaries[p]]."""

    boundaries: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.boundaries) < 2:
            raise ValueError("a plan needs at least two boundaries")
        for left, right in zip(self.boundaries, self.boundaries[1:]):
            if not right > left:
                raise ValueError("boundaries must be strictly increasing")

    @property
    def segments(self) -> int:
        return len(self.boundaries) - 1


@dataclass(frozen=True)
class SegmentSummary:
    """Mergeable counting state of one machine over one segment run.

    ``offset_k`` records which seed produced the summary (offset index,
    or None for completion-anchored and merged summaries); it is
    provenance only and excluded from equality.
    """

    a: float
    count: int
    b: float
    a_is_sentinel: bool
    b_is_sentinel: bool
    offset_k: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")


@dataclass(frozen=True, slots=True)
class SegmentedCountStats:
    """Work accounting for one segmented count."""

    segments: int
    offset_machines_planned: int
    anchor_machines_planned: int
    machines_run: int
    concat_ops: int
    max_read_past_end: float


def plan_segments(stream: EventStream, segments: int) -> SegmentPlan:
    """Equal-duration boundaries covering every event.

    The first boundary sits strictly before the first event (0 when
    times are positive), the last boundary is exactly the last event
    time, so events fall into half-open segments (tau_p, tau_p+1].
    """
    if segments < 1:
        raise ValueError(f"segments must be >= 1, got {segments}")
    if stream.n == 0:
        raise EmptyStreamError("cannot plan segments for an empty stream")
    times = stream.times_as_list()
    first, last = times[0], times[-1]
    lo = 0.0 if first > 0.0 else first - 1.0
    step = (last - lo) / segments
    bounds = [lo + i * step for i in range(segments)]
    bounds.append(last)
    return SegmentPlan(tuple(bounds))


def _run_window_machine(episode: Episode, stream: EventStream, start_idx: int,
                        tau_lo: float, tau_hi: float,
                        ) -> tuple[int, float | None, float | None, float]:
    """Run one counting machine from ``start_idx`` with window bookkeeping.

    Returns (count, a, b, highest event time read); ``a``/``b`` are None
    when no qualifying completion exists. Completions at or before
    tau_lo reset state without counting; the first completion past
    tau_hi becomes ``b`` and stops the machine; past the segment's own
    window no event at or beyond tau_hi + max_span is ever read.
    """
    times = stream.times_as_list()
    ids = stream.ids_as_list()
    level_map = _levels_by_type(episode, stream)
    n_levels = episode.size
    last = n_levels - 1
    lows = [c.t_low for c in episode.constraints]
    highs = [c.t_high for c in episode.constraints]
    span = episode.max_span
    a_limit = tau_lo + span
    horizon = tau_hi + span

    state: list[list[float]] = [[] for _ in range(n_levels)]
    count = 0
    a: float | None = None
    b: float | None = None
    read_hi = tau_lo

    for i in range(start_idx, len(times)):
        t = times[i]
        if t > tau_hi and t >= horizon:
            break
        read_hi = t
        levels = level_map.get(ids[i])
        if levels is None:
            continue
        completed = False
        for lvl in levels:
            if lvl == 0:
                if n_levels == 1:
                    completed = True
                else:
                    state[0].append(t)
                continue
            prev = state[lvl - 1]
            low = lows[lvl - 1]
            high = highs[lvl - 1]
            for j in range(len(prev) - 1, -1, -1):
                delay = t - prev[j]
                if delay > high:
                    break
                if delay > low:
                    if lvl == last:
                        state = [[] for _ in range(n_levels)]
                        completed = True
                    else:
                        state[lvl].append(t)
                    break
            if completed:
                break
        if completed and t > tau_lo:
            if t <= tau_hi:
                count += 1
                if a is None and t < a_limit:
                    a = t
            else:
                if a is None and t < a_limit:
                    a = t
                b = t
                break
    return count, a, b, read_hi


def _offset_seed_times(episode: Episode, tau_lo: float) -> list[float]:
    highs = [c.t_high for c in episode.constraints]
    return [tau_lo - sum(highs[:k]) for k in range(episode.size)]


def _anchor_start_indices(episode: Episode, stream: EventStream,
                          tau_lo: float) -> list[int]:
    """Start indices just after each final-type event within one
    maximum span before the boundary."""
    span = episode.max_span
    if span <= 0.0:
        return []
    tid_last = stream.type_id(episode.types[-1])
    if tid_last is None:
        return []
    times = stream.times_as_list()
    ids = stream.ids_as_list()
    lo = bisect_right(times, tau_lo - span)
    hi = bisect_right(times, tau_lo)
    return [j + 1 for j in range(lo, hi) if ids[j] == tid_last]


def _summary_from_run(run: tuple[int, float | None, float | None, float],
                      tau_lo: float, tau_hi: float,
                      offset_k: int | None) -> SegmentSummary:
    count, a, b, _ = run
    return SegmentSummary(
        a=a if a is not None else tau_lo,
        count=count,
        b=b if b is not None else tau_hi,
        a_is_sentinel=a is None,
        b_is_sentinel=b is None,
        offset_k=offset_k,
    )


def map_segment(episode: Episode, stream: EventStream, plan: SegmentPlan,
                p: int, k: int) -> SegmentSummary:
    """Summary of offset machine ``k`` for segment ``p`` (1-based).

    Machine k starts reading just after tau_p minus the sum of the first
    k constraint windows, clipped to the stream start.
    """
    if not 1 <= p <= plan.segments:
        raise ValueError(f"segment index {p} out of range 1..{plan.segments}")
    if not 0 <= k < episode.size:
        raise ValueError(f"offset index {k} out of range 0..{episode.size - 1}")
    tau_lo = plan.boundaries[p - 1]
    tau_hi = plan.boundaries[p]
    seed = _offset_seed_times(episode, tau_lo)[k]
    start_idx = bisect_right(stream.times_as_list(), seed)
    run = _run_window_machine(episode, stream, start_idx, tau_lo, tau_hi)
    return _summary_from_run(run, tau_lo, tau_hi, offset_k=k)


def concatenate(left: set[SegmentSummary], right: set[SegmentSummary],
                boundary: float) -> set[SegmentSummary]:
    """Join adjacent run summaries at their shared boundary.

    Pairs with b_left = a_right merge into (a_left, count_left +
    count_right, b_right); a sentinel b joins a sentinel a. Left
    entries with no continuation are dropped: they are speculative
    chains whose seed point no machine of the right run needed to
    cover (possible whenever the episode's maximum span exceeds the
    segment width). Raises :class:`NoJoinError` when nothing matches.
    """
    right_by_key: dict[tuple[float, bool], SegmentSummary] = {}
    for summary in right:
        if summary.a_is_sentinel and summary.a != boundary:
            raise ConsistencyError(
                f"right sentinel a={summary.a!r} does not equal boundary {boundary!r}")
        key = (summary.a, summary.a_is_sentinel)
        other = right_by_key.get(key)
        if other is not None and other != summary:
            raise ConsistencyError(
                f"conflicting right summaries share first-completion key {key!r}")
        right_by_key[key] = summary
    merged: set[SegmentSummary] = set()
    for summary in left:
        if summary.b_is_sentinel and summary.b != boundary:
            raise ConsistencyError(
                f"left sentinel b={summary.b!r} does not equal boundary {boundary!r}")
        match = right_by_key.get((summary.b, summary.b_is_sentinel))
        if match is None:
            continue
        merged.add(SegmentSummary(
            a=summary.a,
            count=summary.count + match.count,
            b=match.b,
            a_is_sentinel=summary.a_is_sentinel,
            b_is_sentinel=match.b_is_sentinel,
            offset_k=None,
        ))
    if not merged:
        raise NoJoinError(
            f"no summary pair joins at boundary {boundary!r} "
            f"(left b values {sorted(s.b for s in left)!r}, "
            f"right a values {sorted(s.a for s in right)!r})")
    return merged


def _machine_task(task: tuple[int, float, float]) -> tuple[int, float | None, float | None, float]:
    episode, stream = shared_payload()
    start_idx, tau_lo, tau_hi = task
    return _run_window_machine(episode, stream, start_idx, tau_lo, tau_hi)


def count_segmented_with_stats(episode: Episode, stream: EventStream,
                               segments: int, workers: int = 1,
                               ) -> tuple[int, SegmentedCountStats]:
    """Segmented count plus work accounting. See :func:`count_segmented`."""
    if segments < 1 or segments & (segments - 1):
        raise ValueError(f"segments must be a power of two, got {segments}")
    if stream.n == 0:
        return 0, SegmentedCountStats(segments, episode.size * segments, 0, 0, 0, 0.0)
    plan = plan_segments(stream, segments)
    times = stream.times_as_list()
    bounds = plan.boundaries

    # One machine per distinct start index per segment; offset seeds are
    # planned for every segment, anchored seeds wherever final-type
    # events precede the boundary within one maximum span.
    specs: list[tuple[int, int, int | None]] = []  # (segment p, start_idx, offset_k)
    k0_starts: dict[int, int] = {}
    anchors_planned = 0
    for p in range(1, segments + 1):
        tau_lo = bounds[p - 1]
        starts: dict[int, int | None] = {}
        for k, seed in enumerate(_offset_seed_times(episode, tau_lo)):
            idx = bisect_right(times, seed)
            if idx not in starts:
                starts[idx] = k
        anchor_idx = _anchor_start_indices(episode, stream, tau_lo)
        anchors_planned += len(anchor_idx)
        for idx in anchor_idx:
            starts.setdefault(idx, None)
        k0_starts[p] = bisect_right(times, tau_lo)
        for idx in sorted(starts):
            specs.append((p, idx, starts[idx]))

    tasks = [(idx, bounds[p - 1], bounds[p]) for p, idx, _ in specs]
    runs = map_with_workers(_machine_task, tasks, workers, payload=(episode, stream))

    per_segment: dict[int, set[SegmentSummary]] = {p: set() for p in range(1, segments + 1)}
    max_read_past = 0.0
    for (p, idx, offset_k), run in zip(specs, runs):
        tau_lo, tau_hi = bounds[p - 1], bounds[p]
        max_read_past = max(max_read_past, run[3] - tau_hi)
        summary = _summary_from_run(run, tau_lo, tau_hi, offset_k)
        if idx == k0_starts[p] or not summary.a_is_sentinel:
            per_segment[p].add(summary)
    for p, summaries in per_segment.items():
        keys = {(s.a, s.a_is_sentinel) for s in summaries}
        if len(keys) != len(summaries):
            raise ConsistencyError(
                f"segment {p} produced conflicting summaries with equal keys")

    # Binary reduction over adjacent runs; each level halves the run count.
    runs_level: list[tuple[int, int, set[SegmentSummary]]] = [
        (p, p, per_segment[p]) for p in range(1, segments + 1)]
    concat_ops = 0
    while len(runs_level) > 1:
        nxt: list[tuple[int, int, set[SegmentSummary]]] = []
        for i in range(0, len(runs_level) - 1, 2):
            first_l, last_l, left = runs_level[i]
            _, last_r, right = runs_level[i + 1]
            boundary = bounds[last_l]
            merged = concatenate(left, right, boundary)
            concat_ops += 1
            nxt.append((first_l, last_r, merged))
        if len(runs_level) % 2:
            nxt.append(runs_level[-1])
        runs_level = nxt

    root = runs_level[0][2]
    if len(root) != 1:
        raise ConsistencyError(f"expected one root summary, got {len(root)}")
    (root_summary,) = root
    stats = SegmentedCountStats(
        segments=segments,
        offset_machines_planned=episode.size * segments,
        anchor_machines_planned=anchors_planned,
        machines_run=len(specs),
        concat_ops=concat_ops,
        max_read_past_end=max_read_past,
    )
    return root_summary.count, stats


def count_segmented(episode: Episode, stream: EventStream, segments: int,
                    workers: int = 1) -> int:
    """Count non-overlapped occurrences via segment machines plus merging.

    Equals :func:`epimine.serial.count_serial` for any power-of-two
    segment count on streams with strictly increasing timestamps.
    """
    count, _ = count_segmented_with_stats(episode, stream, segments, workers)
    return count
