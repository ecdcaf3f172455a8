"""WorkerPool: a lazily started executor with capped concurrent submissions."""
from __future__ import annotations

import asyncio
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Any, Callable

from hill_spectra.config import worker_count


class WorkerPool:
    """Process pool when more than one worker is allowed, else a single thread."""

    def __init__(self, max_workers: int | None = None):
        self._workers = max_workers or worker_count()
        self._sem = asyncio.Semaphore(self._workers)
        self._executor: Executor | None = None
        self._started = False
        self._init_lock = asyncio.Lock()

    @property
    def workers(self) -> int:
        return self._workers

    async def _start(self) -> None:
        if self._started:
            return
        async with self._init_lock:
            if self._started:
                return
            if self._workers > 1:
                self._executor = ProcessPoolExecutor(max_workers=self._workers)
            else:
                self._executor = ThreadPoolExecutor(max_workers=1)
            self._started = True

    async def run(self, fn: Callable[..., Any], *args: Any) -> Any:
        await self._start()
        async with self._sem:
            loop = asyncio.get_running_loop()
            return await loop.run_in_executor(self._executor, fn, *args)

    async def stop(self) -> None:
        if self._executor:
            self._executor.shutdown(wait=True)
            self._executor = None
        self._started = False
