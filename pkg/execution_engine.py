"""
Execution Engine for batches of independent moment evaluations.
"""
from __future__ import annotations

import os
import sys
import time
from typing import Callable, Iterable

from joblib import Parallel, delayed
from tqdm import tqdm
from tqdm_joblib import tqdm_joblib

from spectral_errors import ConfigError

THREADS_ENV = "SPECMOMENT_THREADS"


def resolve_n_jobs(n_jobs: int | None = None) -> int:
    """Worker count: requested (or ~half the cores), capped by SPECMOMENT_THREADS."""
    if n_jobs is None:
        n_cores = os.cpu_count() or 1
        n_jobs = max(1, int(n_cores * 0.52))
    cap = os.environ.get(THREADS_ENV, "").strip()
    if cap:
        try:
            limit = int(cap)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
        n_jobs = min(n_jobs, max(1, limit))
    return max(1, int(n_jobs))


def run_parallel(func: Callable, items: Iterable, n_jobs: int | None = None,
                 desc: str | None = None, progress: bool = False) -> list:
    """Map func over items on a thread pool; results keep the input order."""
    items = list(items)
    if not items:
        return []
    n_jobs = resolve_n_jobs(n_jobs)
    if n_jobs == 1 and not progress:
        return [func(item) for item in items]
    with tqdm_joblib(tqdm(total=len(items), desc=desc, disable=not progress, file=sys.stderr)):
        return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)


class ExecutionEngine:
    """Runs batches and keeps timing for the diagnostic stream."""

    def __init__(self, n_jobs: int | None = None, progress: bool = False):
        self.n_jobs = resolve_n_jobs(n_jobs)
        self.progress = progress
        self.start_time = None
        self.elapsed = 0.0

    def timed(self, func: Callable, *args, **kwargs):
        """Call func(*args, **kwargs) and keep its wall time for summary()."""
        self.start_time = time.time()
        try:
            return func(*args, **kwargs)
        finally:
            self.elapsed = time.time() - self.start_time

    def summary(self) -> str:
        return f"workers: {self.n_jobs}, elapsed: {self.elapsed:.2f}s"
