"""Segment-parallel counting: planning, per-segment machines, summary merging."""

from __future__ import annotations

import random

import pytest

from conftest import random_episode, random_stream, stream_of
from epimine import (
    Episode,
    EventStream,
    IntervalConstraint,
    count_segmented,
    count_serial,
)
from epimine.errors import ConsistencyError, EmptyStreamError, NoJoinError
from epimine.segmented import (
    SegmentPlan,
    SegmentSummary,
    concatenate,
    count_segmented_with_stats,
    map_segment,
    plan_segments,
)

ABC = Episode(
    ("A", "B", "C"),
    (IntervalConstraint(5.0, 10.0), IntervalConstraint(10.0, 15.0)),
)
# Two chained occurrences ending at 20 and 40; the second straddles a cut at 22.
WORKED = stream_of(
    ("A", 1.0), ("B", 8.0), ("C", 20.0), ("A", 21.0), ("B", 28.0), ("C", 40.0),
)
PLAN = SegmentPlan((0.0, 22.0, 44.0))


def test_plan_equal_bisection():
    s = stream_of(("A", 1.0), ("B", 44.0))
    assert plan_segments(s, 2).boundaries == (0.0, 22.0, 44.0)


def test_plan_single_segment():
    s = stream_of(("A", 1.0), ("B", 44.0))
    assert plan_segments(s, 1).boundaries == (0.0, 44.0)


def test_plan_equal_quarters():
    s = stream_of(("A", 10.0), ("B", 100.0))
    assert plan_segments(s, 4).boundaries == (0.0, 25.0, 50.0, 75.0, 100.0)


def test_plan_covers_every_event():
    rng = random.Random(4)
    for P in (2, 4, 8):
        s = random_stream(rng, ["A", "B"], 50)
        plan = plan_segments(s, P)
        lo, hi = plan.boundaries[0], plan.boundaries[-1]
        assert all(lo < t <= hi for t in s.times_as_list())
        assert len(plan.boundaries) == P + 1


def test_plan_rejects_empty_stream():
    with pytest.raises(EmptyStreamError):
        plan_segments(EventStream.from_events([]), 2)


def test_plan_validation():
    with pytest.raises(ValueError):
        SegmentPlan((5.0,))
    with pytest.raises(ValueError):
        SegmentPlan((5.0, 5.0))
    assert SegmentPlan((0.0, 10.0)).segments == 1


def test_map_first_segment_base_machine():
    got = map_segment(ABC, WORKED, PLAN, 1, 0)
    assert (got.a, got.count, got.b) == (20.0, 1, 40.0)
    assert not got.a_is_sentinel
    assert not got.b_is_sentinel


def test_map_second_segment_full_offset():
    # Start offset reaches back before the data; completion at 20 falls
    # at or before the cut so only the one at 40 is counted.
    got = map_segment(ABC, WORKED, PLAN, 2, 2)
    assert (got.a, got.count) == (40.0, 1)
    assert not got.a_is_sentinel
    assert got.b == 44.0 and got.b_is_sentinel


def test_map_empty_segment_is_double_sentinel():
    got = map_segment(ABC, WORKED, PLAN, 2, 0)
    assert got.a_is_sentinel and got.a == 22.0
    assert got.b_is_sentinel and got.b == 44.0
    assert got.count == 0


def test_map_index_validation():
    with pytest.raises(ValueError):
        map_segment(ABC, WORKED, PLAN, 0, 0)
    with pytest.raises(ValueError):
        map_segment(ABC, WORKED, PLAN, 3, 0)
    with pytest.raises(ValueError):
        map_segment(ABC, WORKED, PLAN, 1, 3)


def test_concatenate_worked_pair():
    left = {SegmentSummary(20.0, 1, 40.0, False, False)}
    right = {SegmentSummary(40.0, 1, 44.0, False, True)}
    merged = concatenate(left, right, 22.0)
    assert merged == {SegmentSummary(20.0, 2, 44.0, False, True)}


def test_concatenate_empty_segments_compose():
    left = {SegmentSummary(0.0, 0, 22.0, True, True)}
    right = {SegmentSummary(22.0, 0, 44.0, True, True)}
    merged = concatenate(left, right, 22.0)
    assert merged == {SegmentSummary(0.0, 0, 44.0, True, True)}


def test_concatenate_no_join_raises():
    left = {SegmentSummary(5.0, 1, 40.0, False, False)}
    right = {SegmentSummary(41.0, 1, 44.0, False, True)}
    with pytest.raises(NoJoinError):
        concatenate(left, right, 22.0)


def test_concatenate_drops_unmatched_speculative_chains():
    # Two left chains, one continuation on the right: the dangling chain
    # disappears and only the joined one survives.
    left = {
        SegmentSummary(5.0, 1, 40.0, False, False),
        SegmentSummary(7.0, 2, 41.0, False, False),
    }
    right = {SegmentSummary(40.0, 1, 44.0, False, True)}
    merged = concatenate(left, right, 22.0)
    assert merged == {SegmentSummary(5.0, 2, 44.0, False, True)}


def test_concatenate_conflicting_duplicate_keys_rejected():
    right = {
        SegmentSummary(40.0, 1, 44.0, False, True),
        SegmentSummary(40.0, 2, 44.0, False, True),
    }
    with pytest.raises(ConsistencyError):
        concatenate({SegmentSummary(5.0, 1, 40.0, False, False)}, right, 22.0)


def test_worked_stream_counts_two():
    assert count_serial(ABC, WORKED) == 2
    for P in (1, 2):
        assert count_segmented(ABC, WORKED, P) == 2


def test_single_segment_identity():
    rng = random.Random(9)
    for _ in range(100):
        s = random_stream(rng, ["A", "B", "C"], rng.randint(1, 60))
        ep = random_episode(rng, ["A", "B", "C"], rng.randint(1, 4))
        assert count_segmented(ep, s, 1) == count_serial(ep, s)


def test_segment_count_must_be_power_of_two():
    for bad in (0, 3, 6, -2):
        with pytest.raises(ValueError):
            count_segmented(ABC, WORKED, bad)


@pytest.mark.parametrize("P", [2, 4, 8])
def test_matches_serial_on_random_streams(P):
    rng = random.Random(40 + P)
    for _ in range(250):
        n_sym = rng.randint(1, 4)
        symbols = [chr(ord("A") + i) for i in range(n_sym)]
        s = random_stream(rng, symbols, rng.randint(1, 120))
        ep = random_episode(rng, symbols, rng.randint(1, 4))
        assert count_segmented(ep, s, P) == count_serial(ep, s), (ep, s.events)


def test_matches_serial_when_spans_straddle_every_cut():
    # Windows much wider than the segment width force every occurrence
    # to cross cuts; merging must still reproduce the serial count.
    rng = random.Random(77)
    for _ in range(150):
        symbols = ["A", "B", "C"]
        s = random_stream(rng, symbols, rng.randint(8, 80), min_gap=0.2, max_gap=0.8)
        size = rng.randint(2, 4)
        types = tuple(rng.choice(symbols) for _ in range(size))
        cons = tuple(
            IntervalConstraint(0.0, rng.uniform(10.0, 40.0)) for _ in range(size - 1)
        )
        ep = Episode(types, cons)
        for P in (2, 4, 8):
            assert count_segmented(ep, s, P) == count_serial(ep, s), (ep, P, s.events)


def test_occurrence_ending_exactly_on_cut():
    # Completion time equal to a boundary belongs to the left segment.
    plan = plan_segments(WORKED, 2)
    assert plan.boundaries[1] == 20.0
    assert count_segmented(ABC, WORKED, 2) == count_serial(ABC, WORKED) == 2


def test_stats_accounting():
    rng = random.Random(13)
    for P in (1, 2, 4, 8):
        s = random_stream(rng, ["A", "B", "C"], 200)
        ep = random_episode(rng, ["A", "B", "C"], 3)
        count, stats = count_segmented_with_stats(ep, s, P)
        assert count == count_serial(ep, s)
        assert stats.segments == P
        assert stats.offset_machines_planned == ep.size * P
        assert stats.concat_ops == P - 1
        # Dedupe can only shrink the machine roster.
        assert stats.machines_run <= stats.offset_machines_planned + stats.anchor_machines_planned
        assert stats.machines_run >= P
        assert 0.0 <= stats.max_read_past_end <= ep.max_span


def test_worker_fanout_matches_inline():
    rng = random.Random(55)
    s = random_stream(rng, ["A", "B", "C", "D"], 600)
    ep = random_episode(rng, ["A", "B", "C", "D"], 3)
    ref = count_segmented(ep, s, 8, workers=1)
    assert count_segmented(ep, s, 8, workers=4) == ref
    assert ref == count_serial(ep, s)
