"""Weighted nearest-neighbor interaction predictors.

Two lazy learners over a training dataset. The baseline scores a query
pair by decay-weighted neighbor labels; the recovery variant first
completes the interaction matrix from neighbor rows and columns, then
predicts against the completed matrix, with the decay exponents in the
double-ring case rescaled by the local-imbalance ratio of the two
similarity spaces.

Three inductive settings are supported, named by which side of the query
is new: S2 (new drug, training target), S3 (training drug, new target),
S4 (both new). A query with two training indices is the transductive
setting and is rejected. New entities are described by a similarity
profile against the training entities of their side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DtiDataset
from .imbalance import dataset_local_imbalance
from .neighbors import neighbor_table

__all__ = [
    "PairQuery",
    "WkNNModel",
    "WkNNIRModel",
    "RecoverySet",
    "fit_wknn",
    "predict_wknn",
    "build_recovery",
    "fit_wknnir",
    "predict_wknnir",
    "split_query",
    "TRANSDUCTIVE_ERROR",
]

TRANSDUCTIVE_ERROR = "transductive setting unsupported: both query entities are training indices"

# Degenerate datasets can have zero local imbalance on one side; the ratio
# r = LI_a / LI_b is kept finite by flooring both sides first.
LI_FLOOR = 1e-6


@dataclass(frozen=True)
class PairQuery:
    """One drug-target query.

    Each side is either a training index (int) or a similarity profile
    (1-D array over the training entities of that side).
    """

    drug: object
    target: object


def _query_part(value, size, side):
    """Classify one query side; returns (index, profile), one of them None."""
    if isinstance(value, (bool, np.bool_)):
        raise TypeError(f"{side} query must be an index or a profile, got bool")
    if isinstance(value, (int, np.integer)):
        idx = int(value)
        if not 0 <= idx < size:
            raise IndexError(f"{side} index {idx} out of range for {size} training {side}s")
        return idx, None
    profile = np.asarray(value, dtype=float)
    if profile.ndim != 1 or profile.shape[0] != size:
        raise ValueError(f"{side} profile must have length {size}, got shape {profile.shape}")
    if profile.size and (profile.min() < 0 or profile.max() > 1):
        raise ValueError(f"{side} profile values outside [0, 1]")
    return None, profile


def split_query(q: PairQuery, n: int, m: int):
    """Validate a query against training dims; rejects the transductive case.

    Returns ``(drug_index, drug_profile, target_index, target_profile)``
    with exactly one of each pair set.
    """
    di, dp = _query_part(q.drug, n, "drug")
    tj, tp = _query_part(q.target, m, "target")
    if di is not None and tj is not None:
        raise ValueError(TRANSDUCTIVE_ERROR)
    return di, dp, tj, tp


def _check_params(k, eta):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not np.isfinite(eta) or not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta!r}")


def _check_profiles(profiles, width, side):
    profiles = np.asarray(profiles, dtype=float)
    if profiles.ndim != 2 or profiles.shape[1] != width:
        raise ValueError(f"{side} profiles must be 2-D with {width} columns, got shape {profiles.shape}")
    if profiles.size and (profiles.min() < 0 or profiles.max() > 1):
        raise ValueError(f"{side} profile values outside [0, 1]")
    return profiles


def _rank_profiles(profiles, k):
    """Top-k training entities per profile row, ties to the lower index.

    Returns ``(indices, sims)`` of shape (U, k'), k' = min(k, width).
    """
    order = np.argsort(-profiles, axis=1, kind="stable")[:, : min(k, profiles.shape[1])]
    return order, np.take_along_axis(profiles, order, axis=1)


def _one_side_scores(profiles, labels, k, eta):
    """Single-ring scores: (U, L) profiles x (L, C) labels -> (U, C).

    score[u, c] = sum_a eta^a * s[u, a] * labels[nbr(u, a), c] / sum_a s[u, a]
    with a running over neighbor ranks. Zero normalizer gives 0.
    """
    idx, sims = _rank_profiles(profiles, k)
    decay = eta ** np.arange(idx.shape[1], dtype=float)
    num = np.zeros((profiles.shape[0], labels.shape[1]))
    z = np.zeros(profiles.shape[0])
    # num and z accumulate in the same rank order, so an all-ones label
    # column at eta=1 scores exactly 1.
    for a in range(idx.shape[1]):
        num += (decay[a] * sims[:, a])[:, None] * labels[idx[:, a], :]
        z += sims[:, a]
    z = z[:, None]
    out = np.zeros_like(num)
    np.divide(num, z, out=out, where=z > 0)
    return out


def _pair_grid_scores(drug_profiles, target_profiles, labels, k, eta, r_drug=1.0, r_target=1.0):
    """Double-ring scores over the k x k neighbor grid -> (U, V).

    The decay exponent for drug rank i' and target rank j' (1-based) is
    i'/r_drug + j'/r_target - 2; the normalizer sums the raw similarity
    products and factorizes into the two per-side sums.
    """
    d_idx, d_sims = _rank_profiles(drug_profiles, k)
    t_idx, t_sims = _rank_profiles(target_profiles, k)
    wd = d_sims * eta ** (np.arange(1, d_idx.shape[1] + 1, dtype=float) / r_drug - 1.0)
    wt = t_sims * eta ** (np.arange(1, t_idx.shape[1] + 1, dtype=float) / r_target - 1.0)
    num = np.zeros((d_idx.shape[0], t_idx.shape[0]))
    for a in range(d_idx.shape[1]):
        rows = labels[d_idx[:, a], :]
        wda = wd[:, a][:, None]
        for b in range(t_idx.shape[1]):
            num += wda * wt[:, b][None, :] * rows[:, t_idx[:, b]]
    z = d_sims.sum(axis=1)[:, None] * t_sims.sum(axis=1)[None, :]
    out = np.zeros_like(num)
    np.divide(num, z, out=out, where=z > 0)
    return out


class _NeighborPredictor:
    """Shared query plumbing; subclasses supply the label matrices."""

    def _labels_s2(self):
        raise NotImplementedError

    def _labels_s3(self):
        raise NotImplementedError

    def _labels_s4(self):
        raise NotImplementedError

    def _rank_scales(self):
        return 1.0, 1.0

    def predict_s2(self, drug_profiles) -> np.ndarray:
        """Score new drugs against every training target: (U, n) -> (U, m)."""
        profiles = _check_profiles(drug_profiles, self.dataset.n, "drug")
        return _one_side_scores(profiles, self._labels_s2(), self.k, self.eta)

    def predict_s3(self, target_profiles) -> np.ndarray:
        """Score new targets against every training drug: (V, m) -> (V, n)."""
        profiles = _check_profiles(target_profiles, self.dataset.m, "target")
        return _one_side_scores(profiles, self._labels_s3().T, self.k, self.eta)

    def predict_s4(self, drug_profiles, target_profiles) -> np.ndarray:
        """Score new drugs x new targets: (U, n), (V, m) -> (U, V)."""
        dp = _check_profiles(drug_profiles, self.dataset.n, "drug")
        tp = _check_profiles(target_profiles, self.dataset.m, "target")
        r_drug, r_target = self._rank_scales()
        return _pair_grid_scores(dp, tp, self._labels_s4(), self.k, self.eta, r_drug, r_target)

    def predict(self, q: PairQuery) -> float:
        di, dp, tj, tp = split_query(q, self.dataset.n, self.dataset.m)
        if tj is not None:
            return float(self.predict_s2(dp[None, :])[0, tj])
        if di is not None:
            return float(self.predict_s3(tp[None, :])[0, di])
        return float(self.predict_s4(dp[None, :], tp[None, :])[0, 0])


@dataclass(frozen=True, eq=False)
class WkNNModel(_NeighborPredictor):
    """Lazy weighted-kNN predictor; fitting just validates and stores."""

    dataset: DtiDataset
    k: int
    eta: float

    def _labels_s2(self):
        return self.dataset.interactions

    _labels_s3 = _labels_s2
    _labels_s4 = _labels_s2


@dataclass(frozen=True, eq=False)
class RecoverySet:
    """Completed interaction matrices, element-wise >= the original.

    ``y_drug`` is rebuilt row-wise from drug neighbors, ``y_target``
    column-wise from target neighbors, ``y_joint`` blends the two raw
    recoveries weighted by (1 - LI) per side; all three are then maxed
    with the original matrix so known interactions stay at 1.
    """

    y_drug: np.ndarray
    y_target: np.ndarray
    y_joint: np.ndarray
    li_drug: float
    li_target: float

    def __post_init__(self):
        for name in ("y_drug", "y_target", "y_joint"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _recover_rows(sim, Y, k, eta):
    """Rebuild each row of Y from its k nearest rows under ``sim``.

    Row i becomes sum_h eta^(h'-1) * sim[i, h] * Y[h, :] / sum_h sim[i, h]
    over the self-excluded neighbors h of i; a zero normalizer (or no
    neighbors at all) leaves the original row.
    """
    n = sim.shape[0]
    out = np.array(Y, dtype=float)
    if n < 2:
        return out
    idx, sims = neighbor_table(sim, min(k, n - 1))
    w = sims * eta ** np.arange(idx.shape[1], dtype=float)
    num = np.zeros_like(out)
    for a in range(idx.shape[1]):
        num += w[:, a][:, None] * Y[idx[:, a], :]
    z = sims.sum(axis=1)[:, None]
    np.divide(num, z, out=out, where=z > 0)
    return out


def _local_imbalance_or_zero(ds, k):
    # Degenerate inputs (one entity on a side, or no interactions) carry
    # no disagreement evidence; treat their imbalance as zero.
    if ds.n < 2 or ds.m < 2 or ds.interactions.sum() == 0:
        return 0.0, 0.0
    return dataset_local_imbalance(ds, min(k, ds.n - 1, ds.m - 1))


def build_recovery(ds: DtiDataset, k: int, eta: float) -> RecoverySet:
    """Complete the interaction matrix three ways at one (k, eta)."""
    _check_params(k, eta)
    Y = ds.interactions
    y_drug_raw = _recover_rows(ds.drug_sim, Y, k, eta)
    y_target_raw = _recover_rows(ds.target_sim, Y.T, k, eta).T
    li_drug, li_target = _local_imbalance_or_zero(ds, k)
    y_joint_raw = ((1.0 - li_drug) * y_drug_raw + (1.0 - li_target) * y_target_raw) / 2.0
    return RecoverySet(
        y_drug=np.maximum(y_drug_raw, Y),
        y_target=np.maximum(y_target_raw, Y),
        y_joint=np.maximum(y_joint_raw, Y),
        li_drug=li_drug,
        li_target=li_target,
    )


@dataclass(frozen=True, eq=False)
class WkNNIRModel(_NeighborPredictor):
    """WkNN over recovered interactions with imbalance-scaled S4 decay."""

    dataset: DtiDataset
    k: int
    eta: float
    recovery: RecoverySet
    r_drug: float
    r_target: float

    def _labels_s2(self):
        # New drug: target similarities did the recovery, drug similarities rank.
        return self.recovery.y_target

    def _labels_s3(self):
        return self.recovery.y_drug

    def _labels_s4(self):
        return self.recovery.y_joint

    def _rank_scales(self):
        return self.r_drug, self.r_target


def fit_wknn(ds: DtiDataset, k: int, eta: float) -> WkNNModel:
    """Validate parameters and bind them to the dataset; no training."""
    _check_params(k, eta)
    return WkNNModel(ds, int(k), float(eta))


def predict_wknn(model: WkNNModel, q: PairQuery) -> float:
    return model.predict(q)


def fit_wknnir(ds: DtiDataset, k: int, eta: float) -> WkNNIRModel:
    """Precompute the recovery set and the per-side decay rescalers."""
    recovery = build_recovery(ds, k, eta)
    li_drug = max(recovery.li_drug, LI_FLOOR)
    li_target = max(recovery.li_target, LI_FLOOR)
    return WkNNIRModel(
        ds,
        int(k),
        float(eta),
        recovery,
        r_drug=min(1.0, li_drug / li_target),
        r_target=min(1.0, li_target / li_drug),
    )


def predict_wknnir(model: WkNNIRModel, q: PairQuery) -> float:
    return model.predict(q)
