"""Local imbalance: how much each interaction disagrees with its neighborhood.

A pair (drug i, target j) is locally imbalanced on the drug side when the
k drugs most similar to drug i (self excluded) tend to carry the opposite
label for target j. Averaging the pair scores over interacting pairs
gives a dataset-level number per side; summing them per entity gives an
importance weight that sampling strategies can exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .neighbors import neighbor_table

if TYPE_CHECKING:
    from .data import DtiDataset

__all__ = [
    "pair_local_imbalance",
    "pair_imbalance_matrices",
    "dataset_local_imbalance",
    "entity_importance",
    "ImbalanceReport",
    "imbalance_report",
]

SIDES = ("drug", "target")


@dataclass(frozen=True)
class ImbalanceReport:
    """Dataset-level imbalance and per-entity importances at one k."""

    k: int
    li_drug: float
    li_target: float
    drug_importance: np.ndarray  # (n,)
    target_importance: np.ndarray  # (m,)


def _check_k(k: int, limit: int, side: str):
    if not 1 <= k <= limit:
        raise ValueError(f"k={k} out of range [1, {limit}] on the {side} side")


def pair_imbalance_matrices(ds: "DtiDataset", k: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair neighborhood disagreement rates, both sides at once.

    Returns ``(drug_pair, target_pair)``, each (n, m). ``drug_pair[i, j]``
    is the fraction of drug i's k nearest drugs whose label for target j
    differs from Y[i, j]; ``target_pair[i, j]`` is the same over target
    j's k nearest targets.
    """
    Y = ds.interactions
    _check_k(k, ds.n - 1, "drug")
    _check_k(k, ds.m - 1, "target")
    d_idx, _ = neighbor_table(ds.drug_sim, k)
    t_idx, _ = neighbor_table(ds.target_sim, k)
    # Y[d_idx] is (n, k, m): the label rows of each drug's neighbors.
    drug_pair = (Y[d_idx] != Y[:, None, :]).mean(axis=1)
    # Y.T[t_idx] is (m, k, n): the label columns of each target's neighbors.
    target_pair = (Y.T[t_idx] != Y.T[:, None, :]).mean(axis=1).T
    return drug_pair, target_pair


def pair_local_imbalance(ds: "DtiDataset", i: int, j: int, k: int, side: str) -> float:
    """Disagreement rate of Y[i, j] within one entity's k-neighborhood.

    On the drug side this is the fraction of drug i's k nearest drugs
    (self excluded) whose label for target j differs from Y[i, j]; on the
    target side, the fraction of target j's k nearest targets whose label
    for drug i differs.
    """
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}; expected one of {SIDES}")
    Y = ds.interactions
    n, m = ds.n, ds.m
    if not (0 <= i < n and 0 <= j < m):
        raise IndexError(f"pair ({i}, {j}) out of range for a {n} x {m} dataset")
    if side == "drug":
        _check_k(k, n - 1, side)
        nbr, _ = neighbor_table(ds.drug_sim, k)
        return float((Y[nbr[i], j] != Y[i, j]).mean())
    _check_k(k, m - 1, side)
    nbr, _ = neighbor_table(ds.target_sim, k)
    return float((Y[i, nbr[j]] != Y[i, j]).mean())


def dataset_local_imbalance(ds: "DtiDataset", k: int) -> tuple[float, float]:
    """Mean pair imbalance over interacting pairs, per side.

    Raises ``ValueError`` when the dataset has no interactions, since the
    average is then undefined.
    """
    Y = ds.interactions
    total = Y.sum()
    if total == 0:
        raise ValueError("no interactions; local imbalance is undefined")
    drug_pair, target_pair = pair_imbalance_matrices(ds, k)
    return float((drug_pair * Y).sum() / total), float((target_pair * Y).sum() / total)


def entity_importance(ds: "DtiDataset", k: int) -> tuple[np.ndarray, np.ndarray]:
    """Summed pair imbalance of each entity's interactions.

    ``drug_importance[i]`` adds drug-side pair imbalance over the targets
    drug i interacts with; higher means the drug's interactions are
    harder to recover from its neighborhood. Symmetrically for targets.
    """
    Y = ds.interactions
    drug_pair, target_pair = pair_imbalance_matrices(ds, k)
    return (drug_pair * Y).sum(axis=1), (target_pair * Y).sum(axis=0)


def imbalance_report(ds: "DtiDataset", k: int) -> ImbalanceReport:
    """All imbalance quantities at one k, computing neighbor tables once."""
    Y = ds.interactions
    total = Y.sum()
    if total == 0:
        raise ValueError("no interactions; local imbalance is undefined")
    drug_pair, target_pair = pair_imbalance_matrices(ds, k)
    return ImbalanceReport(
        k=k,
        li_drug=float((drug_pair * Y).sum() / total),
        li_target=float((target_pair * Y).sum() / total),
        drug_importance=(drug_pair * Y).sum(axis=1),
        target_importance=(target_pair * Y).sum(axis=0),
    )
