"""Frequent serial episode mining with inter-event timing constraints."""

from .errors import (
    ConsistencyError,
    DegenerateFitError,
    EmptyStreamError,
    EpisodeMiningError,
    EpisodeParseError,
    InputError,
    InstanceTooLargeError,
    MalformedLineError,
    NoJoinError,
    RelaxationRequiredError,
    UnknownSymbolError,
    UnsortedStreamError,
)
from .model import (
    Alphabet,
    Episode,
    EpisodeCount,
    Event,
    EventStream,
    IntervalConstraint,
    episode_sort_key,
    validate_stream,
)
from .serial import count_serial, count_serial_batch
from .relaxed import count_relaxed, relax
from .segmented import (
    SegmentedCountStats,
    SegmentPlan,
    SegmentSummary,
    concatenate,
    count_segmented,
    count_segmented_with_stats,
    map_segment,
    plan_segments,
)
from .twopass import (
    DEFAULT_CROSSOVER_TABLE,
    CrossoverFit,
    DispatchParams,
    PassReport,
    Strategy,
    choose_strategy,
    default_dispatch_params,
    fit_crossover,
    one_pass_count,
    two_pass_count,
)
from .candidates import grow, seed_level1
from .miner import LevelResult, MiningConfig, MiningResult, mine
from .synth import (
    ChainLedger,
    ChainSpec,
    GenerationResult,
    GeneratorConfig,
    generate,
    neuron_label,
)
from .formats import (
    format_episode,
    format_number,
    parse_episode,
    parse_stream,
    stream_lines,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ChainLedger",
    "ChainSpec",
    "ConsistencyError",
    "CrossoverFit",
    "DEFAULT_CROSSOVER_TABLE",
    "DegenerateFitError",
    "DispatchParams",
    "EmptyStreamError",
    "Episode",
    "EpisodeCount",
    "EpisodeMiningError",
    "EpisodeParseError",
    "Event",
    "EventStream",
    "GenerationResult",
    "GeneratorConfig",
    "InputError",
    "InstanceTooLargeError",
    "IntervalConstraint",
    "LevelResult",
    "MalformedLineError",
    "SegmentedCountStats",
    "MiningConfig",
    "MiningResult",
    "NoJoinError",
    "PassReport",
    "RelaxationRequiredError",
    "SegmentPlan",
    "SegmentSummary",
    "Strategy",
    "UnknownSymbolError",
    "UnsortedStreamError",
    "choose_strategy",
    "concatenate",
    "count_relaxed",
    "count_segmented",
    "count_segmented_with_stats",
    "count_serial",
    "count_serial_batch",
    "default_dispatch_params",
    "episode_sort_key",
    "fit_crossover",
    "format_episode",
    "format_number",
    "generate",
    "grow",
    "main",
    "map_segment",
    "mine",
    "neuron_label",
    "one_pass_count",
    "parse_episode",
    "parse_stream",
    "plan_segments",
    "relax",
    "seed_level1",
    "stream_lines",
    "two_pass_count",
    "validate_stream",
]


def main(argv: list[str] | None = None) -> int:
    from .cli import main as _main

    return _main(argv)
