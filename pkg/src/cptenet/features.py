"""Per-epoch feature tables built from thresholded synchronization matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import binarize, clustering_coefficients, eigenvector_centrality, subgraph_centrality

#: Canonical measure order; feature columns are node-major within measure.
MEASURE_ORDER = ("CC", "SC", "EC")

#: Group label encoding used throughout classification.
LABEL_OF_GROUP = {"A": 0, "B": 1}
GROUP_OF_LABEL = {v: k for k, v in LABEL_OF_GROUP.items()}


@dataclass
class FeatureTable:
    """Rows = epochs; columns = per-node network measures.

    ``labels`` holds 0 for group A and 1 for group B; group B (the smaller
    clinical cohort) is the positive class for sensitivity/specificity.
    """

    features: np.ndarray
    labels: np.ndarray
    subject_ids: list[str]
    epoch_indices: np.ndarray
    band: str
    threshold: float
    measures: tuple
    column_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {self.features.shape}")
        if not np.isfinite(self.features).all():
            raise ValueError("NaN/Inf in feature table")
        n = self.features.shape[0]
        if not (len(self.labels) == len(self.subject_ids) == len(self.epoch_indices) == n):
            raise ValueError("feature table row metadata lengths disagree")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def feature_values(self, name: str) -> np.ndarray:
        """One column by name, or a measure's per-row node average."""
        if name in self.column_names:
            return self.features[:, self.column_names.index(name)]
        if name in self.measures:
            cols = [i for i, c in enumerate(self.column_names) if c.startswith(name + "_")]
            return self.features[:, cols].mean(axis=1)
        raise KeyError(f"unknown feature {name!r}")


def build_feature_table(matrices, th: float, measures=MEASURE_ORDER) -> FeatureTable:
    """Binarize each epoch matrix at ``th`` and compute its node measures.

    Produces one row per epoch with 19 x np columns for 19-channel data,
    node-major within measure, measures ordered CC, SC, EC (subsets keep
    that order).
    """
    matrices = list(matrices)
    if not matrices:
        raise ValueError("empty matrix set")
    measures = tuple(m for m in MEASURE_ORDER if m in set(measures))
    if not measures:
        raise ValueError("no valid measures requested")
    n_ch = matrices[0].n_channels
    names = matrices[0].channel_names
    if any(m.n_channels != n_ch for m in matrices):
        raise ValueError("inconsistent channel counts across epochs")

    rows = np.empty((len(matrices), n_ch * len(measures)))
    for r, m in enumerate(matrices):
        g = binarize(m, th)
        blocks = []
        for meas in measures:
            if meas == "CC":
                blocks.append(clustering_coefficients(g))
            elif meas == "SC":
                blocks.append(subgraph_centrality(g))
            else:
                blocks.append(eigenvector_centrality(g))
        rows[r] = np.concatenate(blocks)

    column_names = [f"{meas}_{ch}" for meas in measures for ch in names]
    return FeatureTable(
        features=rows,
        labels=np.array([LABEL_OF_GROUP[m.group] for m in matrices], dtype=np.int8),
        subject_ids=[m.subject_id for m in matrices],
        epoch_indices=np.array([m.epoch_index for m in matrices]),
        band=matrices[0].band,
        threshold=float(th),
        measures=measures,
        column_names=column_names,
    )
