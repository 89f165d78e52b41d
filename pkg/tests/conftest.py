"""Shared fixtures: the hand-checked F1 dataset and random dataset factories."""

import numpy as np
import pytest

from wknnir import DtiDataset

# 3 drugs x 2 targets, small enough to enumerate every quantity by hand.
F1_DRUG_SIM = [[1.0, 0.8, 0.2], [0.8, 1.0, 0.4], [0.2, 0.4, 1.0]]
F1_TARGET_SIM = [[1.0, 0.5], [0.5, 1.0]]
F1_INTERACTIONS = [[1, 0], [0, 1], [1, 1]]


def make_dataset(drug_sim, target_sim, interactions):
    n = len(drug_sim)
    m = len(target_sim)
    return DtiDataset(
        tuple(f"d{i}" for i in range(n)),
        tuple(f"t{j}" for j in range(m)),
        drug_sim,
        target_sim,
        interactions,
    )


def random_dataset(n, m, seed, density=0.3):
    """Valid random dataset: symmetric unit-diagonal sims, nonempty binary Y."""
    rng = np.random.default_rng(seed)

    def sym(size):
        a = rng.random((size, size))
        a = (a + a.T) / 2
        np.fill_diagonal(a, 1.0)
        return a

    drug_sim = sym(n)
    target_sim = sym(m)
    Y = (rng.random((n, m)) < density).astype(float)
    if Y.sum() == 0:
        Y[rng.integers(n), rng.integers(m)] = 1.0
    return make_dataset(drug_sim, target_sim, Y)


@pytest.fixture
def f1():
    return make_dataset(F1_DRUG_SIM, F1_TARGET_SIM, F1_INTERACTIONS)
