"""Process-pool fan-out for CPU-bound counting work.

Workers are forked, so large read-only inputs (event streams) are shared
copy-on-write instead of being pickled per task. Results always come
back in task order, so outputs never depend on the worker count. A
worker budget of one (or a single task) runs inline.
"""

from __future__ import annotations

import multiprocessing
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

__all__ = ["map_with_workers"]

T = TypeVar("T")
R = TypeVar("R")

_PAYLOAD: object = None


def _get_payload() -> object:
    return _PAYLOAD


def map_with_workers(func: Callable[[T], R], tasks: Sequence[T],
                     workers: int, payload: object = None) -> list[R]:
    """Apply ``func`` to each task, fanning out across ``workers`` processes.

    ``payload`` is published through a module global before the fork so
    tasks can reference shared inputs without serializing them; ``func``
    reads it back via :func:`shared_payload`.
    """
    global _PAYLOAD
    if workers <= 1 or len(tasks) <= 1:
        _PAYLOAD = payload
        try:
            return [func(t) for t in tasks]
        finally:
            _PAYLOAD = None
    if sys.platform != "linux" or multiprocessing.get_start_method(allow_none=False) != "fork":
        # Without fork the payload would not be inherited; stay inline.
        _PAYLOAD = payload
        try:
            return [func(t) for t in tasks]
        finally:
            _PAYLOAD = None
    _PAYLOAD = payload
    try:
        chunk = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, tasks, chunksize=chunk))
    finally:
        _PAYLOAD = None


def shared_payload() -> object:
    """The payload published by the current :func:`map_with_workers` call."""
    return _get_payload()
