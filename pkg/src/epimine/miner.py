"""Level-wise frequent episode mining over a timestamped event stream."""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import grow, seed_level1
from .model import EpisodeCount, EventStream, IntervalConstraint, validate_stream
from .twopass import (
    DispatchParams,
    PassReport,
    Strategy,
    choose_strategy,
    default_dispatch_params,
    one_pass_count,
    two_pass_count,
)

__all__ = ["MiningConfig", "LevelResult", "MiningResult", "mine"]


@dataclass(frozen=True, slots=True)
class MiningConfig:
    threshold: int
    constraint_set: tuple[IntervalConstraint, ...]
    max_level: int | None = None
    workers: int = 1
    two_pass: bool = True
    segments: int = 1
    dispatch: DispatchParams | None = None
    strategy_override: Strategy | None = None

    def __post_init__(self) -> None:
        if self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")
        if not self.constraint_set:
            raise ValueError("constraint_set must not be empty")
        if self.max_level is not None and self.max_level < 1:
            raise ValueError(f"max_level must be >= 1, got {self.max_level}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.segments < 1 or self.segments & (self.segments - 1):
            raise ValueError(
                f"segments must be a power of two >= 1, got {self.segments}")


@dataclass(frozen=True, slots=True)
class LevelResult:
    level: int
    strategy: Strategy
    frequent: tuple[EpisodeCount, ...]
    report: PassReport


@dataclass(frozen=True, slots=True)
class MiningResult:
    levels: tuple[LevelResult, ...]

    @property
    def frequent(self) -> list[EpisodeCount]:
        return [ec for lvl in self.levels for ec in lvl.frequent]


def _level_strategy(config: MiningConfig, params: DispatchParams,
                    candidate_count: int, episode_size: int) -> Strategy:
    if config.strategy_override is not None:
        return config.strategy_override
    try:
        return choose_strategy(candidate_count, episode_size, params)
    except ValueError:
        # Fitted f(N) can go nonpositive far past the table's sizes; a
        # negative crossover means any batch clears it.
        return Strategy.EPISODE_PARALLEL


def mine(stream: EventStream, config: MiningConfig) -> MiningResult:
    """Grow and count candidates level by level until none survive.

    Results are deterministic: each level's frequent episodes come back
    in canonical order regardless of worker count or strategy, and
    two-pass filtering returns exactly what one-pass counting would.
    """
    validate_stream(stream)
    params = config.dispatch if config.dispatch is not None else default_dispatch_params()
    counter = two_pass_count if config.two_pass else one_pass_count

    levels: list[LevelResult] = []
    candidates = seed_level1(stream.alphabet)
    level = 1
    while candidates:
        strategy = _level_strategy(config, params, len(candidates), level)
        frequent, report = counter(
            candidates, stream, config.threshold,
            workers=config.workers, strategy=strategy, segments=config.segments)
        levels.append(LevelResult(level=level, strategy=strategy,
                                  frequent=tuple(frequent), report=report))
        if not frequent:
            break
        if config.max_level is not None and level >= config.max_level:
            break
        candidates = grow([ec.episode for ec in frequent], config.constraint_set)
        level += 1
    return MiningResult(levels=tuple(levels))
