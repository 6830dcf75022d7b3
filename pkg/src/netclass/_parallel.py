"""Order-preserving map over worker processes.

Results never depend on the worker count because every task carries its own
derived random stream; parallelism only changes wall time.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def parallel_map(fn, items, threads: int | None = 1) -> list:
    """Apply ``fn`` to ``items``, preserving order.

    ``threads=1`` runs inline; ``threads=None`` uses all cores. ``fn`` must be
    picklable (a module-level function or functools.partial of one).
    """
    items = list(items)
    workers = min(resolve_threads(threads), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
