"""Two-pass counting and the episode/segment parallelism dispatcher.

Pass one scores every candidate with the cheap relaxed counter and
discards those already below threshold; pass two runs the exact counter
on the survivors only. Because the relaxed count never underestimates,
the surviving set is exactly what one-pass exact counting would keep.

The dispatcher chooses between parallelizing across candidate episodes
and parallelizing across stream segments of a single episode, based on
how the candidate batch size compares to a hardware occupancy estimate
times a size-dependent factor f(N) = a/N + b.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateFitError
from .model import Episode, EpisodeCount, EventStream
from .parallel import map_with_workers, shared_payload
from .relaxed import count_relaxed, relax
from .segmented import count_segmented
from .serial import count_serial_batch

__all__ = [
    "Strategy",
    "DispatchParams",
    "CrossoverFit",
    "PassReport",
    "DEFAULT_CROSSOVER_TABLE",
    "fit_crossover",
    "default_dispatch_params",
    "choose_strategy",
    "two_pass_count",
    "one_pass_count",
]

# Candidate batch size above which episode-parallel scheduling won a
# measured head-to-head, per episode size. Override via
# DispatchParams.crossover_table or refit with fit_crossover.
DEFAULT_CROSSOVER_TABLE: dict[int, float] = {
    3: 415.0,
    4: 190.0,
    5: 200.0,
    6: 100.0,
    7: 100.0,
    8: 60.0,
}


class Strategy(str, Enum):
    EPISODE_PARALLEL = "episode-parallel"
    SEGMENT_PARALLEL = "segment-parallel"


@dataclass(frozen=True, slots=True)
class CrossoverFit:
    """Least-squares coefficients for f(N) = a/N + b and the residual norm."""

    a: float
    b: float
    residual: float


@dataclass(frozen=True, slots=True)
class DispatchParams:
    """Hardware occupancy model for strategy dispatch.

    ``mp`` worker groups times ``b_mp`` blocks per group times ``t_b``
    lanes per block estimates how many episodes run concurrently under
    episode-parallel scheduling. ``crossover_table`` entries, when
    present, override the fitted formula for their episode sizes.
    """

    mp: int
    b_mp: int
    t_b: int
    f_a: float
    f_b: float
    crossover_table: tuple[tuple[int, float], ...] | None = None

    def __post_init__(self) -> None:
        if min(self.mp, self.b_mp, self.t_b) < 1:
            raise ValueError("occupancy factors must be >= 1")

    def table_value(self, episode_size: int) -> float | None:
        if self.crossover_table is None:
            return None
        for size, value in self.crossover_table:
            if size == episode_size:
                return value
        return None

    @classmethod
    def with_table(cls, mp: int, b_mp: int, t_b: int,
                   table: Mapping[int, float]) -> "DispatchParams":
        fit = fit_crossover(table, mp, b_mp, t_b)
        return cls(mp=mp, b_mp=b_mp, t_b=t_b, f_a=fit.a, f_b=fit.b,
                   crossover_table=tuple(sorted(table.items())))


def fit_crossover(table: Mapping[int, float], mp: int, b_mp: int, t_b: int,
                  ) -> CrossoverFit:
    """Fit f(N) = a/N + b to crossover(N) / (mp * b_mp * t_b).

    Raises :class:`DegenerateFitError` when the table holds fewer than
    two distinct episode sizes.
    """
    if len(set(table)) < 2:
        raise DegenerateFitError("need at least two distinct episode sizes to fit")
    sizes = np.array(sorted(table), dtype=np.float64)
    denom = float(mp * b_mp * t_b)
    y = np.array([table[int(n)] for n in sizes], dtype=np.float64) / denom
    design = np.column_stack([1.0 / sizes, np.ones_like(sizes)])
    coeffs, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.linalg.norm(design @ coeffs - y))
    return CrossoverFit(a=float(coeffs[0]), b=float(coeffs[1]), residual=residual)


def default_dispatch_params() -> DispatchParams:
    """CPU defaults: worker groups = physical cores, formula fit from
    the shipped crossover table."""
    try:
        import psutil

        cores = psutil.cpu_count(logical=False) or os.cpu_count() or 1
    except ImportError:  # pragma: no cover
        cores = os.cpu_count() or 1
    fit = fit_crossover(DEFAULT_CROSSOVER_TABLE, cores, 1, 1)
    return DispatchParams(mp=cores, b_mp=1, t_b=1, f_a=fit.a, f_b=fit.b)


def choose_strategy(candidate_count: int, episode_size: int,
                    params: DispatchParams) -> Strategy:
    """Episode-parallel when the batch exceeds the crossover point.

    A table entry for the episode size takes precedence; otherwise the
    threshold is mp * b_mp * t_b * f(N).
    """
    if candidate_count < 0:
        raise ValueError("candidate_count must be >= 0")
    if episode_size < 1:
        raise ValueError("episode_size must be >= 1")
    threshold = params.table_value(episode_size)
    if threshold is None:
        f_n = params.f_a / episode_size + params.f_b
        if f_n <= 0.0:
            raise ValueError(
                f"dispatch factor f({episode_size}) = {f_n!r} must be positive")
        threshold = params.mp * params.b_mp * params.t_b * f_n
    if candidate_count > threshold:
        return Strategy.EPISODE_PARALLEL
    return Strategy.SEGMENT_PARALLEL


@dataclass(frozen=True, slots=True)
class PassReport:
    """Accounting for one filtering level."""

    candidates_in: int
    eliminated_first_pass: int
    survivors: int
    final_frequent: int
    pass1_seconds: float
    pass2_seconds: float

    def __post_init__(self) -> None:
        if self.candidates_in != self.eliminated_first_pass + self.survivors:
            raise ValueError("candidates_in must equal eliminated + survivors")
        if not 0 <= self.final_frequent <= self.survivors:
            raise ValueError("final_frequent must lie in 0..survivors")


def _relaxed_task(bounds: tuple[int, int]) -> list[int]:
    stream, episodes = shared_payload()
    start, stop = bounds
    return [count_relaxed(relax(episodes[i]), stream) for i in range(start, stop)]


def _relaxed_counts(candidates: Sequence[Episode], stream: EventStream,
                    workers: int) -> list[int]:
    if workers <= 1 or len(candidates) <= 1:
        return [count_relaxed(relax(ep), stream) for ep in candidates]
    eps = tuple(candidates)
    n_chunks = min(len(eps), workers * 4)
    bounds = [round(i * len(eps) / n_chunks) for i in range(n_chunks + 1)]
    tasks = [(bounds[i], bounds[i + 1])
             for i in range(n_chunks) if bounds[i] < bounds[i + 1]]
    out: list[int] = []
    for chunk in map_with_workers(_relaxed_task, tasks, workers, payload=(stream, eps)):
        out.extend(chunk)
    return out


def _exact_counts(episodes: Sequence[Episode], stream: EventStream,
                  strategy: Strategy, workers: int, segments: int,
                  ) -> list[EpisodeCount]:
    if strategy is Strategy.SEGMENT_PARALLEL and segments > 1:
        return [EpisodeCount(ep, count_segmented(ep, stream, segments, workers))
                for ep in episodes]
    return count_serial_batch(list(episodes), stream, workers)


def two_pass_count(candidates: Sequence[Episode], stream: EventStream,
                   threshold: int, *, workers: int = 1,
                   strategy: Strategy = Strategy.EPISODE_PARALLEL,
                   segments: int = 1,
                   ) -> tuple[list[EpisodeCount], PassReport]:
    """Relaxed filter then exact count; returns the frequent episodes.

    Output is exactly the set (and counts) that exact counting of every
    candidate would keep at ``threshold``, in candidate order.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    t0 = time.perf_counter()
    relaxed = _relaxed_counts(candidates, stream, workers)
    survivors = [ep for ep, rc in zip(candidates, relaxed) if rc >= threshold]
    t1 = time.perf_counter()
    exact = _exact_counts(survivors, stream, strategy, workers, segments)
    frequent = [ec for ec in exact if ec.count >= threshold]
    t2 = time.perf_counter()
    report = PassReport(
        candidates_in=len(candidates),
        eliminated_first_pass=len(candidates) - len(survivors),
        survivors=len(survivors),
        final_frequent=len(frequent),
        pass1_seconds=t1 - t0,
        pass2_seconds=t2 - t1,
    )
    return frequent, report


def one_pass_count(candidates: Sequence[Episode], stream: EventStream,
                   threshold: int, *, workers: int = 1,
                   strategy: Strategy = Strategy.EPISODE_PARALLEL,
                   segments: int = 1,
                   ) -> tuple[list[EpisodeCount], PassReport]:
    """Exact counting of every candidate, skipping the relaxed filter."""
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    t0 = time.perf_counter()
    exact = _exact_counts(list(candidates), stream, strategy, workers, segments)
    frequent = [ec for ec in exact if ec.count >= threshold]
    t1 = time.perf_counter()
    report = PassReport(
        candidates_in=len(candidates),
        eliminated_first_pass=0,
        survivors=len(candidates),
        final_frequent=len(frequent),
        pass1_seconds=0.0,
        pass2_seconds=t1 - t0,
    )
    return frequent, report
