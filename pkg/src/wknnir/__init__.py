"""Weighted nearest-neighbor drug-target interaction prediction.

Predicts missing drug-target interactions from precomputed similarity
matrices: a decay-weighted kNN baseline, a variant that first recovers
likely missing interactions from neighbor rows and columns, and a
sampling ensemble over entity subsets. Includes the cross-validation and
AUPR harness used to benchmark them.
"""

from .data import (
    DatasetError,
    DatasetStats,
    DtiDataset,
    Finding,
    dataset_stats,
    load_dataset,
    save_dataset,
    subset,
    validate_dataset,
    write_matrix,
)
from .ensemble import (
    EnsembleMember,
    EnsembleModel,
    SamplingStrategy,
    predict_ensemble,
    sample_without_replacement,
    sampling_probabilities,
    train_ensemble,
)
from .evaluation import (
    DEFAULT_GRID,
    INNER_FOLDS,
    OUTER_FOLDS,
    SETTINGS,
    CvPlan,
    CvResult,
    Fold,
    FoldResult,
    ParamGrid,
    aupr,
    base_factory,
    ensemble_factory,
    fixed_learner,
    generate_folds,
    rank_novel,
    run_cv,
    tune_hyperparameters,
    tuned_learner,
)
from .imbalance import (
    ImbalanceReport,
    dataset_local_imbalance,
    entity_importance,
    imbalance_report,
    pair_imbalance_matrices,
    pair_local_imbalance,
)
from .models import (
    TRANSDUCTIVE_ERROR,
    PairQuery,
    RecoverySet,
    WkNNIRModel,
    WkNNModel,
    build_recovery,
    fit_wknn,
    fit_wknnir,
    predict_wknn,
    predict_wknnir,
    split_query,
)
from .neighbors import NeighborList, knn, neighbor_table, project

__version__ = "0.1.0"

__all__ = [
    "DatasetError",
    "DatasetStats",
    "DtiDataset",
    "Finding",
    "dataset_stats",
    "load_dataset",
    "save_dataset",
    "subset",
    "validate_dataset",
    "write_matrix",
    "NeighborList",
    "knn",
    "neighbor_table",
    "project",
    "ImbalanceReport",
    "dataset_local_imbalance",
    "entity_importance",
    "imbalance_report",
    "pair_imbalance_matrices",
    "pair_local_imbalance",
    "PairQuery",
    "RecoverySet",
    "WkNNModel",
    "WkNNIRModel",
    "TRANSDUCTIVE_ERROR",
    "build_recovery",
    "fit_wknn",
    "fit_wknnir",
    "predict_wknn",
    "predict_wknnir",
    "split_query",
    "SamplingStrategy",
    "EnsembleMember",
    "EnsembleModel",
    "sampling_probabilities",
    "sample_without_replacement",
    "train_ensemble",
    "predict_ensemble",
    "SETTINGS",
    "OUTER_FOLDS",
    "INNER_FOLDS",
    "CvPlan",
    "CvResult",
    "Fold",
    "FoldResult",
    "ParamGrid",
    "DEFAULT_GRID",
    "generate_folds",
    "aupr",
    "run_cv",
    "tune_hyperparameters",
    "rank_novel",
    "base_factory",
    "ensemble_factory",
    "fixed_learner",
    "tuned_learner",
    "__version__",
]
