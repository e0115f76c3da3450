"""Seeded sampling utilities.

Every randomized checker derives one independent substream per sample
index from its master seed, so reports are reproducible bit-for-bit and
independent of how samples are partitioned across workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .domain import BoxDomain

Sampler = Callable[[np.random.Generator], np.ndarray]


def subrng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the stream rooted at ``seed``.

    Seeding on the pair (seed, index) gives statistically independent
    substreams without the extra hashing cost of spawn keys.
    """
    return np.random.default_rng((seed, index))


def box_sampler(box: BoxDomain) -> Sampler:
    """Uniform sampler over the (closure of the) box.

    The returned callable carries ``box`` as an attribute so consumers
    validating samples against that same box object can skip the
    re-check; draws are inside it by construction.
    """
    def sample(rng: np.random.Generator) -> np.ndarray:
        return box.sample(rng)
    sample.box = box
    return sample


def cycle_sampler(points: Sequence) -> Sampler:
    """Sampler that replays a fixed list of points, cycling; useful for
    injecting hand-constructed witnesses into the randomized checkers."""
    pts = [np.asarray(p, dtype=float) for p in points]
    state = {"i": 0}

    def sample(_rng: np.random.Generator) -> np.ndarray:
        p = pts[state["i"] % len(pts)]
        state["i"] += 1
        return p.copy()
    return sample


def dominating_pair(rng: np.random.Generator, box: BoxDomain) -> tuple[np.ndarray, np.ndarray]:
    """Pair (x, y) with x strictly above y on every axis, both in the box."""
    y = box.lower + rng.random(box.dim) * box.extent * 0.999
    frac = 1e-6 + rng.random(box.dim) * (1.0 - 2e-6)
    x = y + frac * (box.upper - y)
    return x, y


def run_indexed(fn: Callable[[int], object], n: int, workers: int = 1) -> list:
    """Evaluate ``fn(i)`` for i in range(n); results are ordered by index
    regardless of worker count, so fan-out cannot change a report."""
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))
