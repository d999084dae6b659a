"""Seeded random streams and chunked Monte-Carlo batches.

Every batch of ``count`` draws is cut into chunks of ``CHUNK_SIZE`` draws and
chunk k gets the k-th child of ``SeedSequence(seed)``. The chunking depends on
the seed and the count only, so the concatenated output is identical for any
number of worker threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .exceptions import DomainError

logger = logging.getLogger(__name__)


def lab_setting(key):
    return settings.PME_LAB[key]


def make_rng(seed):
    """PCG64 generator for ``seed`` (an int or a SeedSequence)."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.PCG64(seed))


def gaussian_directions(rng, d, size):
    """``size`` independent uniform unit vectors in R^d (normalized Gaussians)."""
    g = rng.standard_normal((size, d))
    norms = np.linalg.norm(g, axis=1)
    # Exact zeros have probability zero but would divide by zero.
    while np.any(norms == 0):
        bad = norms == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def chunk_sizes(count, chunk_size):
    if count < 1:
        raise DomainError(f'Sample count must be positive, got {count}')
    if chunk_size < 1:
        raise DomainError(f'Chunk size must be positive, got {chunk_size}')
    full, rest = divmod(count, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


@dataclass
class SampleBatch:
    positions: np.ndarray
    seed: int
    count: int

    def radii(self):
        if self.positions.ndim == 1:
            return np.abs(self.positions)
        return np.linalg.norm(self.positions, axis=1)


def run_chunked(sampler, count, seed, threads=None, chunk_size=None):
    """Call ``sampler(rng, size)`` once per chunk and concatenate the results.

    ``sampler`` must return an array whose first axis has length ``size``.
    """
    threads = threads or lab_setting('THREADS')
    chunk_size = chunk_size or lab_setting('CHUNK_SIZE')
    sizes = chunk_sizes(count, chunk_size)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    logger.debug('Sampling %d draws in %d chunks (seed=%s, threads=%d)', count, len(sizes), seed, threads)

    def work(job):
        child, size = job
        return sampler(make_rng(child), size)

    if threads == 1:
        parts = [work(job) for job in zip(children, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, zip(children, sizes)))
    return SampleBatch(positions=np.concatenate(parts), seed=int(seed), count=count)
