"""Command line interface.

Subcommands: ``mine`` (leveled frequent-episode table), ``count`` (one
episode), ``gen`` (synthetic stream), ``bench`` (per-level timing of
counting configurations). Exit codes: 0 success, 2 bad input, 3
internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .errors import ConsistencyError, InputError
from .formats import format_episode, parse_episode, parse_stream, stream_lines
from .miner import MiningConfig, MiningResult, mine
from .model import EventStream, IntervalConstraint, validate_stream
from .relaxed import count_relaxed, relax
from .segmented import count_segmented
from .serial import count_serial
from .synth import (
    DEFAULT_DELAY_HIGH,
    DEFAULT_DELAY_LOW,
    DEFAULT_PROBABILITY,
    ChainSpec,
    GeneratorConfig,
    generate,
)
from .twopass import Strategy

__all__ = ["main", "build_parser"]


def _load_stream(path: str, sort: bool) -> EventStream:
    text = Path(path).read_text(encoding="utf-8")
    stream = parse_stream(text.splitlines(), require_sorted=not sort)
    if sort:
        events = sorted(stream.events, key=lambda e: e.time)
        stream = EventStream.from_events(events, stream.alphabet)
    return validate_stream(stream)


_WINDOW_RE = re.compile(r"^\(\s*([^\s,()\]]+)\s*,\s*([^\s,()\]]+)\s*\]$")


def _parse_constraints(text: str) -> tuple[IntervalConstraint, ...]:
    """Parse a semicolon-separated list of half-open windows, e.g.
    ``(5,10];(10,15]``."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        m = _WINDOW_RE.match(part)
        if m is None:
            raise InputError(f"bad constraint {part!r}: expected '(low,high]'")
        try:
            out.append(IntervalConstraint(float(m.group(1)), float(m.group(2))))
        except ValueError as exc:
            raise InputError(f"bad constraint {part!r}: {exc}") from None
    if not out:
        raise InputError("constraint list is empty")
    return tuple(out)


_CHAIN_RE = re.compile(
    r"^(?P<labels>[^@]+?)"
    r"(?:@\(\s*(?P<low>[^\s,()\]]+)\s*,\s*(?P<high>[^\s,()\]]+)\s*\]"
    r"(?:p(?P<prob>[0-9.eE+-]+))?)?$")


def _parse_chain(text: str) -> ChainSpec:
    """Parse ``A>B>C@(0.001,0.005]p0.9``; window and probability are
    optional and default to (0.001,0.005] and 0.9."""
    m = _CHAIN_RE.match(text.strip())
    if m is None:
        raise InputError(f"bad chain syntax {text!r}")
    labels = tuple(s.strip() for s in m.group("labels").split(">") if s.strip())
    try:
        low = float(m.group("low")) if m.group("low") else DEFAULT_DELAY_LOW
        high = float(m.group("high")) if m.group("high") else DEFAULT_DELAY_HIGH
        prob = float(m.group("prob")) if m.group("prob") else DEFAULT_PROBABILITY
        return ChainSpec(labels=labels, delay_low=low, delay_high=high,
                         probability=prob)
    except ValueError as exc:
        raise InputError(f"bad chain syntax {text!r}: {exc}") from None


def _cmd_count(args: argparse.Namespace) -> int:
    stream = _load_stream(args.stream, args.sort)
    episode = parse_episode(args.episode)
    if args.relaxed:
        count = count_relaxed(relax(episode), stream)
    elif args.segments > 1:
        count = count_segmented(episode, stream, args.segments, workers=args.workers)
    else:
        count = count_serial(episode, stream)
    print(count)
    return 0


def _mining_config(args: argparse.Namespace, *, two_pass: bool,
                   override: Strategy | None) -> MiningConfig:
    try:
        return MiningConfig(
            threshold=args.threshold,
            constraint_set=_parse_constraints(args.constraints),
            max_level=args.max_level,
            workers=args.workers,
            two_pass=two_pass,
            segments=args.segments,
            strategy_override=override,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _result_rows(result: MiningResult) -> list[str]:
    return [f"{lvl.level}\t{format_episode(ec.episode)}\t{ec.count}"
            for lvl in result.levels for ec in lvl.frequent]


def _cmd_mine(args: argparse.Namespace) -> int:
    stream = _load_stream(args.stream, args.sort)
    override = {"auto": None,
                "episode": Strategy.EPISODE_PARALLEL,
                "segment": Strategy.SEGMENT_PARALLEL}[args.strategy]
    config = _mining_config(args, two_pass=not args.one_pass, override=override)
    result = mine(stream, config)
    for level in result.levels:
        r = level.report
        print(f"level {level.level}: strategy={level.strategy.value} "
              f"candidates={r.candidates_in} eliminated={r.eliminated_first_pass} "
              f"survivors={r.survivors} frequent={r.final_frequent} "
              f"pass1={r.pass1_seconds:.3f}s pass2={r.pass2_seconds:.3f}s",
              file=sys.stderr)
    for row in _result_rows(result):
        print(row)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    try:
        config = GeneratorConfig(
            n_neurons=args.neurons,
            basal_rate=args.rate,
            duration=args.duration,
            chains=tuple(_parse_chain(c) for c in args.chain or []),
            seed=args.seed,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = generate(config)

    out = Path(args.out)
    body = "\n".join(stream_lines(result.stream))
    out.write_text(body + "\n" if body else "", encoding="utf-8")
    ledger_path = Path(args.ledger) if args.ledger else out.with_suffix(
        out.suffix + ".ledger.json")
    ledger_path.write_text(json.dumps({
        "seed": config.seed,
        "n_neurons": config.n_neurons,
        "basal_rate": config.basal_rate,
        "duration": config.duration,
        "basal_events": result.basal_events,
        "injected_events": result.injected_events,
        "chains": [
            {
                "labels": list(entry.chain.labels),
                "episode": format_episode(entry.episode),
                "started": entry.started,
                "complete": entry.complete,
            }
            for entry in result.ledger
        ],
    }, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {result.stream.n} events to {out} (ledger: {ledger_path})")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    stream = _load_stream(args.stream, args.sort)
    setups: list[tuple[str, bool, Strategy]] = [
        ("two-pass/episode", True, Strategy.EPISODE_PARALLEL),
        ("two-pass/segment", True, Strategy.SEGMENT_PARALLEL),
        ("one-pass/episode", False, Strategy.EPISODE_PARALLEL),
        ("one-pass/segment", False, Strategy.SEGMENT_PARALLEL),
    ]
    tables: list[list[str]] = []
    print("level\tsetup\tcandidates\tfrequent\tpass1_s\tpass2_s")
    for name, two_pass, strategy in setups:
        config = _mining_config(args, two_pass=two_pass, override=strategy)
        result = mine(stream, config)
        tables.append(_result_rows(result))
        for level in result.levels:
            r = level.report
            print(f"{level.level}\t{name}\t{r.candidates_in}\t{r.final_frequent}"
                  f"\t{r.pass1_seconds:.4f}\t{r.pass2_seconds:.4f}")
    for (name, _, _), table in zip(setups[1:], tables[1:]):
        if table != tables[0]:
            raise ConsistencyError(
                f"result table from {name} differs from {setups[0][0]}")
    print("all setups agree", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epimine",
        description="Frequent serial episode mining with inter-event timing constraints.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sort(p: argparse.ArgumentParser) -> None:
        p.add_argument("--sort", action="store_true",
                       help="sort events by time instead of rejecting unsorted input")

    p_count = sub.add_parser("count", help="count one episode in a stream")
    p_count.add_argument("stream", help="stream file: '<timestamp>,<label>' lines")
    p_count.add_argument("--episode", required=True,
                         help="episode text, e.g. 'A -(5,10]-> B'")
    p_count.add_argument("--relaxed", action="store_true",
                         help="report the relaxed (upper-bound) count instead")
    p_count.add_argument("--segments", type=int, default=1,
                         help="segment-parallel counting with this power-of-two split")
    p_count.add_argument("--workers", type=int, default=1)
    add_sort(p_count)
    p_count.set_defaults(func=_cmd_count)

    p_mine = sub.add_parser("mine", help="mine frequent episodes")
    p_mine.add_argument("stream")
    p_mine.add_argument("--threshold", type=int, required=True)
    p_mine.add_argument("--constraints", required=True, metavar="'(5,10];(10,15]'",
                        help="semicolon-separated half-open delay windows")
    p_mine.add_argument("--max-level", type=int, default=None)
    p_mine.add_argument("--workers", type=int, default=1)
    p_mine.add_argument("--segments", type=int, default=1)
    p_mine.add_argument("--one-pass", action="store_true",
                        help="skip the relaxed first pass")
    p_mine.add_argument("--strategy", choices=["auto", "episode", "segment"],
                        default="auto")
    add_sort(p_mine)
    p_mine.set_defaults(func=_cmd_mine)

    p_gen = sub.add_parser("gen", help="generate a synthetic stream")
    p_gen.add_argument("-o", "--out", required=True)
    p_gen.add_argument("--ledger", default=None,
                       help="ledger JSON path (default: <out>.ledger.json)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--neurons", type=int, default=26)
    p_gen.add_argument("--rate", type=float, default=20.0)
    p_gen.add_argument("--duration", type=float, default=60.0)
    p_gen.add_argument("--chain", action="append", metavar="A>B>C@(0.001,0.005]p0.9",
                       help="inject a cascade chain (repeatable); window and "
                            "probability optional")
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser(
        "bench", help="time one-pass vs two-pass and episode vs segment strategies")
    p_bench.add_argument("stream")
    p_bench.add_argument("--threshold", type=int, required=True)
    p_bench.add_argument("--constraints", required=True)
    p_bench.add_argument("--levels", dest="max_level", type=int, default=3)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--segments", type=int, default=8)
    add_sort(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
