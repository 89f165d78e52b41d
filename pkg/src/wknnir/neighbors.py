"""k-nearest-neighbor selection over precomputed similarity matrices.

Similarities are given, not computed: every routine here just ranks them.
Ordering is by descending similarity with ties broken by ascending index,
which makes neighbor lists deterministic for any input.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["NeighborList", "knn", "neighbor_table", "project"]


class NeighborList(NamedTuple):
    indices: np.ndarray  # (k,) candidate indices, best first
    similarities: np.ndarray  # (k,) matching similarity values


def _ranked(similarities: np.ndarray) -> np.ndarray:
    # Stable sort on negated values: descending similarity, ascending index on ties.
    return np.argsort(-similarities, axis=-1, kind="stable")


def knn(similarities, k: int, exclude=None) -> NeighborList:
    """Pick the k most similar candidates from one similarity vector.

    ``exclude`` removes candidate indices (e.g. the query itself) before
    ranking. k is capped at the number of remaining candidates; zero
    similarities are kept (they carry zero weight downstream).
    """
    sims = np.asarray(similarities, dtype=float)
    if sims.ndim != 1:
        raise ValueError(f"expected a similarity vector, got shape {sims.shape}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    candidates = np.arange(sims.shape[0])
    if exclude is not None:
        keep = ~np.isin(candidates, np.fromiter(exclude, dtype=int))
        candidates = candidates[keep]
        sims = sims[keep]
    if candidates.shape[0] == 0:
        raise ValueError("no selectable candidates")
    order = _ranked(sims)[: min(k, candidates.shape[0])]
    return NeighborList(candidates[order], sims[order])


def neighbor_table(similarity: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Self-excluded k nearest neighbors for every row of a square matrix.

    Returns ``(indices, similarities)``, each of shape (n, k), row i
    holding the neighbors of entity i in decreasing similarity. Entity i
    itself is never its own neighbor.
    """
    sim = np.asarray(similarity, dtype=float)
    n = sim.shape[0]
    if sim.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {sim.shape}")
    if k < 1 or n < 2:
        raise ValueError(f"need k >= 1 and at least 2 entities, got k={k}, n={n}")
    order = _ranked(sim)
    keep = order != np.arange(n)[:, None]
    indices = order[keep].reshape(n, n - 1)[:, : min(k, n - 1)]
    return indices, np.take_along_axis(sim, indices, axis=1)


def project(similarities, training_indices) -> np.ndarray:
    """Restrict similarity vectors to a training subset, preserving order.

    Accepts a vector or a matrix whose last axis runs over all entities;
    the result's last axis runs over ``training_indices``. Used to turn a
    full similarity profile into a profile against an ensemble member's
    sample.
    """
    sims = np.asarray(similarities, dtype=float)
    idx = np.asarray(training_indices, dtype=int)
    if idx.ndim != 1:
        raise ValueError(f"training_indices must be 1-D, got shape {idx.shape}")
    return sims[..., idx]
