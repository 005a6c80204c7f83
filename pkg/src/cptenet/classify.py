"""Classifier training, repeated stratified cross-validation and threshold sweeps.

Group B (the smaller cohort) is the positive class throughout.  All
randomness derives positionally from one explicit seed: repeat r's fold
shuffle and the model seed of (repeat r, fold f) are functions of (seed, r,
f) only, so reports are byte-identical across runs and schedules.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .features import FeatureTable, GROUP_OF_LABEL, MEASURE_ORDER, build_feature_table
from .forest import RandomForest

#: The canonical sweep grid: 0 to 1 in steps of 0.1.
DEFAULT_THRESHOLDS = tuple(k / 10 for k in range(11))


def _scale_to_train_range(train: np.ndarray, test: np.ndarray):
    """Map every column onto the training min-max range.

    Keeps heterogeneous features commensurate under the Euclidean metric
    (raw subgraph centrality spans orders of magnitude more than the [0, 1]
    measures).  Constant training columns are dropped from the distance.
    """
    lo = train.min(axis=0)
    span = train.max(axis=0) - lo
    span[span == 0] = np.inf
    return (train - lo) / span, (test - lo) / span


def knn_classify(train: FeatureTable, rows: np.ndarray, k: int = 5) -> np.ndarray:
    """k-nearest-neighbour labels for ``rows``.

    Euclidean distance on range-scaled features, majority vote among the k
    nearest training rows.  Distance ties resolve toward the earlier
    training row; a tied vote falls back to the single nearest neighbour's
    label.
    """
    if train.n_rows == 0:
        raise ValueError("empty training set")
    if not (1 <= k <= train.n_rows):
        raise ValueError(f"k must lie in [1, {train.n_rows}], got {k}")
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    tr, te = _scale_to_train_range(train.features, rows)
    d2 = (te * te).sum(1)[:, None] + (tr * tr).sum(1)[None, :] - 2.0 * (te @ tr.T)
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    neighbour_labels = train.labels[order]
    ones = neighbour_labels.sum(axis=1)
    pred = np.where(ones * 2 > k, 1, 0).astype(np.int8)
    tie = ones * 2 == k
    if tie.any():
        pred[tie] = neighbour_labels[tie, 0]
    return pred


def rf_train(train: FeatureTable, n_trees: int = 100, seed: int = 0) -> RandomForest:
    """Fit a random forest on a feature table (Gini, unlimited depth)."""
    return RandomForest(n_trees=n_trees, seed=seed).fit(train.features, train.labels)


def rf_predict(model: RandomForest, rows: np.ndarray) -> np.ndarray:
    return model.predict(np.atleast_2d(np.asarray(rows, dtype=np.float64)))


@dataclass
class FoldResult:
    repeat: int
    fold: int
    tp: int
    fn: int
    tn: int
    fp: int

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / (self.tp + self.tn + self.fp + self.fn)

    @property
    def sensitivity(self) -> float:
        return self.tp / (self.tp + self.fn)

    @property
    def specificity(self) -> float:
        return self.tn / (self.tn + self.fp)


@dataclass
class CvReport:
    """Aggregated repeated-CV metrics with per-fold confusion counts."""

    classifier: str
    band: str
    threshold: float
    measures: tuple
    folds: int
    repeats: int
    seed: int
    feature_count: int
    positive_class: str
    accuracy_mean: float
    accuracy_std: float
    sensitivity_mean: float
    sensitivity_std: float
    specificity_mean: float
    specificity_std: float
    fold_results: list = field(default_factory=list)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["measures"] = list(self.measures)
        return doc


def _stratified_folds(keys: np.ndarray, labels: np.ndarray, folds: int,
                      rng: np.random.Generator, what: str) -> np.ndarray:
    """Fold index per row, stratified by class over distinct ``keys``.

    With per-row keys this is plain stratified CV; with subject keys every
    subject's rows land in one fold.  Per fold and class the key count
    differs from the proportional share by at most 1.
    """
    uniq_keys, first = np.unique(keys, return_index=True)
    key_label = labels[first]
    fold_of_key = {}
    for cls in (0, 1):
        cls_keys = uniq_keys[key_label == cls]
        if cls_keys.size < folds:
            raise ValueError(
                f"class {GROUP_OF_LABEL[cls]} has {cls_keys.size} {what}, "
                f"fewer than {folds} folds"
            )
        for f, part in enumerate(np.array_split(rng.permutation(cls_keys), folds)):
            for key in part:
                fold_of_key[key] = f
    return np.array([fold_of_key[k] for k in keys])


def _fold_seed(seed: int, repeat: int, fold: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(repeat, fold)).generate_state(1)[0])


def cross_validate(table: FeatureTable, classifier: str = "rf", folds: int = 10,
                   repeats: int = 10, seed: int = 0, knn_k: int = 5,
                   rf_trees: int = 100, group_by_subject: bool = False) -> CvReport:
    """Repeated stratified k-fold evaluation of one classifier.

    Folds are stratified at epoch granularity by default; the epochs of one
    subject then spread across folds, which lets subject identity leak
    between train and test.  ``group_by_subject`` keeps each subject's
    epochs in a single fold instead.
    """
    if classifier not in ("rf", "knn"):
        raise ValueError(f"unknown classifier {classifier!r}")
    labels = table.labels
    if np.unique(labels).size < 2:
        raise ValueError("feature table holds a single class")

    keys = (np.asarray(table.subject_ids) if group_by_subject
            else np.arange(table.n_rows))
    what = "subjects" if group_by_subject else "rows"

    results = []
    for r in range(repeats):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
        fold_of = _stratified_folds(keys, labels, folds, rng, what)
        for f in range(folds):
            test_mask = fold_of == f
            train = FeatureTable(
                features=table.features[~test_mask],
                labels=labels[~test_mask],
                subject_ids=[s for s, m in zip(table.subject_ids, test_mask) if not m],
                epoch_indices=table.epoch_indices[~test_mask],
                band=table.band,
                threshold=table.threshold,
                measures=table.measures,
                column_names=table.column_names,
            )
            if classifier == "rf":
                model = RandomForest(n_trees=rf_trees, seed=_fold_seed(seed, r, f))
                model.fit(train.features, train.labels)
                pred = model.predict(table.features[test_mask])
            else:
                pred = knn_classify(train, table.features[test_mask], k=knn_k)
            truth = labels[test_mask]
            results.append(FoldResult(
                repeat=r, fold=f,
                tp=int(((pred == 1) & (truth == 1)).sum()),
                fn=int(((pred == 0) & (truth == 1)).sum()),
                tn=int(((pred == 0) & (truth == 0)).sum()),
                fp=int(((pred == 1) & (truth == 0)).sum()),
            ))

    acc = np.array([fr.accuracy for fr in results])
    sens = np.array([fr.sensitivity for fr in results])
    spec = np.array([fr.specificity for fr in results])
    return CvReport(
        classifier=classifier,
        band=table.band,
        threshold=table.threshold,
        measures=table.measures,
        folds=folds,
        repeats=repeats,
        seed=seed,
        feature_count=table.n_features,
        positive_class="B",
        accuracy_mean=float(acc.mean()),
        accuracy_std=float(acc.std()),
        sensitivity_mean=float(sens.mean()),
        sensitivity_std=float(sens.std()),
        specificity_mean=float(spec.mean()),
        specificity_std=float(spec.std()),
        fold_results=[asdict(fr) for fr in results],
    )


@dataclass
class SweepResult:
    """RF accuracy across the binarization threshold grid."""

    band: str
    classifier: str
    thresholds: tuple
    accuracy_means: tuple
    accuracy_stds: tuple
    best_th: float
    folds: int
    repeats: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def threshold_sweep(matrices, measures=MEASURE_ORDER, grid=DEFAULT_THRESHOLDS,
                    classifier: str = "rf", folds: int = 10, repeats: int = 10,
                    seed: int = 0, knn_k: int = 5, rf_trees: int = 100) -> SweepResult:
    """Cross-validate at every grid threshold and pick the most accurate one.

    Ties resolve toward the smaller threshold.
    """
    grid = tuple(grid)
    if not grid:
        raise ValueError("empty threshold grid")
    matrices = list(matrices)
    means, stds = [], []
    band = matrices[0].band if matrices else ""
    for th in grid:
        table = build_feature_table(matrices, th, measures)
        report = cross_validate(table, classifier=classifier, folds=folds,
                                repeats=repeats, seed=seed, knn_k=knn_k,
                                rf_trees=rf_trees)
        means.append(report.accuracy_mean)
        stds.append(report.accuracy_std)
    best = int(np.argmax(means))
    return SweepResult(
        band=band,
        classifier=classifier,
        thresholds=grid,
        accuracy_means=tuple(means),
        accuracy_stds=tuple(stds),
        best_th=float(grid[best]),
        folds=folds,
        repeats=repeats,
        seed=seed,
    )
