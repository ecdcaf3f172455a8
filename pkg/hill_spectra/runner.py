from __future__ import annotations

import asyncio
import logging
from typing import Callable, Sequence

from hill_spectra.worker_pool import WorkerPool

logger = logging.getLogger(__name__)


async def _refine_one(pool: WorkerPool, refine: Callable, job):
    try:
        result = await pool.run(refine, job)
    except Exception as e:
        logger.error(f"  {job.label}: ❌ {e}")
        raise
    values = " / ".join(f"{v:.10g}" for v in result.values)
    tag = "✅ (bisected)" if result.bisected else "✅"
    logger.info(f"  {job.label}: {tag} {values}")
    return result


async def refine_clusters(jobs: Sequence, refine: Callable, workers: int | None = None) -> list:
    """Run *refine* on every job through one pool; re-raise the first failure."""
    # Pool is created here, inside the running loop
    pool = WorkerPool(workers)
    try:
        results = await asyncio.gather(
            *(_refine_one(pool, refine, job) for job in jobs),
            return_exceptions=True,
        )
    finally:
        await pool.stop()

    failures = [r for r in results if isinstance(r, BaseException)]
    if failures:
        logger.error("%d of %d clusters failed", len(failures), len(jobs))
        raise failures[0]
    return list(results)
