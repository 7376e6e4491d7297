"""Monte Carlo simple random walks on trees.

Every estimate is reproducible from ``master_seed``.  Walks are cut into
fixed-size chunks; chunk ``i`` draws from its own Philox stream keyed by
``SeedSequence(master_seed, spawn_key=(1, i))``, and the ordered pairs of a
mean-hitting estimate come from the stream keyed ``(0,)``.  Because the chunk
layout does not depend on the worker count, results are bitwise identical for
any ``workers``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .exceptions import StepCapExceeded
from .tree import Tree

__all__ = [
    "WalkEstimate",
    "DEFAULT_STEP_CAP",
    "CHUNK_SIZE",
    "substream",
    "sample_hitting",
    "estimate_hitting",
    "estimate_mean_hitting",
]

DEFAULT_STEP_CAP = 10**10
CHUNK_SIZE = 4096


@numba.njit(nogil=True, cache=True)
def _walk_kernel(indptr, indices, starts, targets, rng, cap):
    steps = np.empty(starts.shape[0], dtype=np.int64)
    for i in range(starts.shape[0]):
        x = starts[i]
        target = targets[i]
        s = 0
        while x != target and s < cap:
            lo = indptr[x]
            x = indices[lo + int(rng.random() * (indptr[x + 1] - lo))]
            s += 1
        # a walk stopped by the cap is reported as -1
        steps[i] = s if x == target else -1
    return steps


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent counter-based generator for ``key`` under ``master_seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=key)))


@dataclass(frozen=True)
class WalkEstimate:
    mean: float
    std_error: float
    samples: int
    master_seed: int
    max_steps_hit: int
    truncated_count: int

    @property
    def valid(self) -> bool:
        return self.truncated_count == 0

    def z_score(self, exact) -> float:
        diff = self.mean - float(exact)
        if self.std_error == 0:
            return 0.0 if diff == 0 else math.inf
        return abs(diff) / self.std_error

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _check_vertices(tree: Tree, *vs: int) -> None:
    for v in vs:
        if not 0 <= v < tree.n:
            raise IndexError(f"vertex {v} out of range for tree with {tree.n} vertices")


def sample_hitting(tree: Tree, u: int, v: int, rng: np.random.Generator, step_cap: int = DEFAULT_STEP_CAP) -> int:
    """Steps taken by one walk from ``u`` until it first stands on ``v``."""
    _check_vertices(tree, u, v)
    steps = _walk_kernel(
        tree.indptr, tree.indices, np.array([u], dtype=np.int64), np.array([v], dtype=np.int64), rng, step_cap
    )
    if steps[0] < 0:
        raise StepCapExceeded(step_cap)
    return int(steps[0])


def _run_walks(tree: Tree, starts: np.ndarray, targets: np.ndarray, master_seed: int, step_cap: int, workers: int):
    bounds = list(range(0, starts.shape[0], CHUNK_SIZE))

    def run(i_lo):
        i, lo = i_lo
        hi = lo + CHUNK_SIZE
        return _walk_kernel(
            tree.indptr, tree.indices, starts[lo:hi], targets[lo:hi], substream(master_seed, 1, i), step_cap
        )

    jobs = list(enumerate(bounds))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def _estimate(steps: np.ndarray, master_seed: int, groups: int = 1) -> WalkEstimate:
    """Summarise walk lengths; with ``groups > 1`` the standard error comes from group means."""
    truncated = int((steps < 0).sum())
    ok = steps[steps >= 0].astype(np.float64)
    if truncated or ok.size == 0:
        mean = float(ok.mean()) if ok.size else math.nan
        return WalkEstimate(mean, math.nan, int(steps.size), master_seed, int(steps.max(initial=0)), truncated)
    mean = float(ok.mean())
    if groups > 1:
        group_means = ok.reshape(groups, -1).mean(axis=1)
        se = float(group_means.std(ddof=1) / math.sqrt(groups))
    elif ok.size > 1:
        se = float(ok.std(ddof=1) / math.sqrt(ok.size))
    else:
        se = 0.0
    return WalkEstimate(mean, se, int(steps.size), master_seed, int(steps.max()), 0)


def estimate_hitting(
    tree: Tree,
    u: int,
    v: int,
    samples: int = 10_000,
    master_seed: int = 0,
    workers: int = 1,
    step_cap: int = DEFAULT_STEP_CAP,
) -> WalkEstimate:
    _check_vertices(tree, u, v)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    starts = np.full(samples, u, dtype=np.int64)
    targets = np.full(samples, v, dtype=np.int64)
    return _estimate(_run_walks(tree, starts, targets, master_seed, step_cap, workers), master_seed)


def sample_pairs(n: int, count: int, master_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``count`` ordered pairs ``u != v`` drawn uniformly with replacement."""
    rng = substream(master_seed, 0)
    u = rng.integers(0, n, size=count)
    # shift by 1..n-1 so v never equals u and every v != u is equally likely
    v = (u + rng.integers(1, n, size=count)) % n
    return u.astype(np.int64), v.astype(np.int64)


def estimate_mean_hitting(
    tree: Tree,
    pair_samples: int = 100_000,
    walks_per_pair: int = 1,
    master_seed: int = 0,
    workers: int = 1,
    step_cap: int = DEFAULT_STEP_CAP,
) -> WalkEstimate:
    """Estimate the average hitting time over ordered pairs ``u != v``.

    Each of ``pair_samples`` random pairs gets ``walks_per_pair`` walks.  The
    standard error is computed from the per-pair means, so it accounts for the
    spread between pairs as well as the walk-to-walk noise.  Pairs differ far
    more than repeated walks do, so for a fixed budget one walk per pair gives
    the tightest estimate.
    """
    if pair_samples < 1 or walks_per_pair < 1:
        raise ValueError("pair_samples and walks_per_pair must be >= 1")
    if tree.n < 2:
        raise ValueError("need at least two vertices")
    u, v = sample_pairs(tree.n, pair_samples, master_seed)
    starts = np.repeat(u, walks_per_pair)
    targets = np.repeat(v, walks_per_pair)
    steps = _run_walks(tree, starts, targets, master_seed, step_cap, workers)
    return _estimate(steps, master_seed, groups=pair_samples)
