"""Bagging over sampled entity subsets with selective prediction.

Each member is a base model fitted on a weighted sample of drugs and
targets (without replacement). Three sampling strategies set the weights:
uniform, proportional to interaction counts, or proportional to
local-imbalance importance. At prediction time, members whose sample
lacks the query's training entity abstain; the rest are averaged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DtiDataset, subset
from .imbalance import entity_importance
from .models import PairQuery, WkNNIRModel, WkNNModel, _check_profiles, split_query

__all__ = [
    "SamplingStrategy",
    "EnsembleMember",
    "EnsembleModel",
    "sampling_probabilities",
    "sample_without_replacement",
    "train_ensemble",
    "predict_ensemble",
]

STRATEGY_KINDS = ("uniform", "global", "local")


@dataclass(frozen=True)
class SamplingStrategy:
    """How member subsets are drawn.

    ``uniform`` ignores the data; ``global`` weights entities by their
    interaction counts; ``local`` weights them by local-imbalance
    importance at neighborhood size ``k``. ``sigma`` smooths the weights
    so zero-count entities keep a nonzero chance.
    """

    kind: str
    sigma: float = 0.1
    k: int = 5

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown sampling strategy {self.kind!r}; expected one of {STRATEGY_KINDS}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma!r}")
        if self.kind == "local" and self.k < 1:
            raise ValueError(f"local strategy needs k >= 1, got {self.k!r}")


@dataclass(frozen=True, eq=False)
class EnsembleMember:
    """One base model plus the ordered entity subsets it was trained on."""

    model: object
    drug_subset: np.ndarray  # ordered sample, positions define member-local indices
    target_subset: np.ndarray


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    """Averaged committee of base models over entity subsets."""

    dataset: DtiDataset
    members: tuple
    base_kind: str

    @property
    def q(self) -> int:
        return len(self.members)

    def predict_s2(self, drug_profiles) -> np.ndarray:
        """Score new drugs against every training target: (U, n) -> (U, m)."""
        profiles = _check_profiles(drug_profiles, self.dataset.n, "drug")
        acc = np.zeros((profiles.shape[0], self.dataset.m))
        cnt = np.zeros(self.dataset.m)
        for mem in self.members:
            acc[:, mem.target_subset] += mem.model.predict_s2(profiles[:, mem.drug_subset])
            cnt[mem.target_subset] += 1
        out = np.zeros_like(acc)
        covered = cnt > 0
        out[:, covered] = acc[:, covered] / cnt[covered]
        for v in np.flatnonzero(~covered):
            out[:, v] = self._fallback_s2_column(profiles, v)
        return out

    def _fallback_s2_column(self, profiles, v):
        # No member sampled target v: every member answers with v turned
        # into a new-target profile, i.e. a both-new query.
        tprof = self.dataset.target_sim[v]
        col = np.zeros(profiles.shape[0])
        for mem in self.members:
            col += mem.model.predict_s4(
                profiles[:, mem.drug_subset], tprof[mem.target_subset][None, :]
            )[:, 0]
        return col / self.q

    def predict_s3(self, target_profiles) -> np.ndarray:
        """Score new targets against every training drug: (V, m) -> (V, n)."""
        profiles = _check_profiles(target_profiles, self.dataset.m, "target")
        acc = np.zeros((profiles.shape[0], self.dataset.n))
        cnt = np.zeros(self.dataset.n)
        for mem in self.members:
            acc[:, mem.drug_subset] += mem.model.predict_s3(profiles[:, mem.target_subset])
            cnt[mem.drug_subset] += 1
        out = np.zeros_like(acc)
        covered = cnt > 0
        out[:, covered] = acc[:, covered] / cnt[covered]
        for u in np.flatnonzero(~covered):
            out[:, u] = self._fallback_s3_column(profiles, u)
        return out

    def _fallback_s3_column(self, profiles, u):
        dprof = self.dataset.drug_sim[u]
        col = np.zeros(profiles.shape[0])
        for mem in self.members:
            col += mem.model.predict_s4(
                dprof[mem.drug_subset][None, :], profiles[:, mem.target_subset]
            )[0, :]
        return col / self.q

    def predict_s4(self, drug_profiles, target_profiles) -> np.ndarray:
        """Score new drugs x new targets: (U, n), (V, m) -> (U, V)."""
        dp = _check_profiles(drug_profiles, self.dataset.n, "drug")
        tp = _check_profiles(target_profiles, self.dataset.m, "target")
        acc = np.zeros((dp.shape[0], tp.shape[0]))
        for mem in self.members:
            acc += mem.model.predict_s4(dp[:, mem.drug_subset], tp[:, mem.target_subset])
        return acc / self.q

    def predict(self, q: PairQuery) -> float:
        di, dp, tj, tp = split_query(q, self.dataset.n, self.dataset.m)
        if tj is not None:
            return float(self.predict_s2(dp[None, :])[0, tj])
        if di is not None:
            return float(self.predict_s3(tp[None, :])[0, di])
        return float(self.predict_s4(dp[None, :], tp[None, :])[0, 0])


def sampling_probabilities(ds: DtiDataset, strategy: SamplingStrategy):
    """Per-entity sampling weights, one simplex vector per side."""
    n, m = ds.n, ds.m
    if strategy.kind == "uniform":
        return np.full(n, 1.0 / n), np.full(m, 1.0 / m)
    if strategy.kind == "global":
        drug_w = ds.interactions.sum(axis=1)
        target_w = ds.interactions.sum(axis=0)
    else:
        drug_w, target_w = entity_importance(ds, strategy.k)
    sigma = strategy.sigma
    return (
        (sigma + drug_w) / (n * sigma + drug_w.sum()),
        (sigma + target_w) / (m * sigma + target_w.sum()),
    )


def sample_without_replacement(probs, count: int, rng) -> np.ndarray:
    """Draw ``count`` distinct indices by repeated weighted selection.

    After each draw the chosen index is removed and the remaining weights
    renormalized. ``rng`` is a seed or a ``numpy.random.Generator``; the
    result is an ordered index array, deterministic given the seed.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"probs must be 1-D, got shape {p.shape}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("probs is not a probability vector")
    if not 1 <= count <= p.size:
        raise ValueError(f"count={count} out of range [1, {p.size}]")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    remaining = np.arange(p.size)
    weights = p.copy()
    out = np.empty(count, dtype=int)
    for t in range(count):
        total = weights.sum()
        if total <= 0:
            raise ValueError(f"only {t} indices have nonzero probability, need {count}")
        pos = int(gen.choice(weights.size, p=weights / total))
        out[t] = remaining[pos]
        remaining = np.delete(remaining, pos)
        weights = np.delete(weights, pos)
    return out


def _subset_size(total: int, ratio: float) -> int:
    return min(total, max(1, int(round(total * ratio))))


def _base_kind(model) -> str:
    if isinstance(model, WkNNIRModel):
        return "wknnir"
    if isinstance(model, WkNNModel):
        return "wknn"
    return type(model).__name__


def train_ensemble(
    ds: DtiDataset, base_factory, q: int, R: float, strategy: SamplingStrategy, seed: int = 0
) -> EnsembleModel:
    """Fit q base models on weighted entity samples of relative size R.

    Member i draws its drug subset then its target subset from a stream
    seeded with seed+i, so members are independent and any prefix of the
    ensemble is reproducible.
    """
    if q < 1:
        raise ValueError(f"q must be at least 1, got {q!r}")
    if not 0 < R <= 1:
        raise ValueError(f"R must be in (0, 1], got {R!r}")
    p_drug, p_target = sampling_probabilities(ds, strategy)
    n_draw = _subset_size(ds.n, R)
    m_draw = _subset_size(ds.m, R)
    members = []
    for i in range(1, q + 1):
        gen = np.random.default_rng(seed + i)
        drugs = sample_without_replacement(p_drug, n_draw, gen)
        targets = sample_without_replacement(p_target, m_draw, gen)
        model = base_factory(subset(ds, drugs, targets))
        members.append(EnsembleMember(model, drugs, targets))
    return EnsembleModel(ds, tuple(members), _base_kind(members[0].model))


def predict_ensemble(ens: EnsembleModel, q: PairQuery) -> float:
    return ens.predict(q)
