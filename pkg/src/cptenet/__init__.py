"""Cross-plot transition entropy synchronization matrices and network analysis.

The package turns multichannel recordings into per-epoch channel-pair
synchronization matrices (cross-plot transition entropy), derives
complex-network measures from thresholded versions of those matrices, and
runs group statistics and two-group classification on the resulting feature
tables.  A seeded coupled-signal generator provides ground-truth cohorts for
end-to-end verification.
"""

from .crossplot import (
    DEFAULT_PARTITION,
    PartitionConfig,
    SyncMatrix,
    cpte,
    encode_states,
    epoch_matrix,
    transition_distribution,
)
from .classify import (
    CvReport,
    DEFAULT_THRESHOLDS,
    SweepResult,
    cross_validate,
    knn_classify,
    rf_predict,
    rf_train,
    threshold_sweep,
)
from .features import FeatureTable, MEASURE_ORDER, build_feature_table
from .forest import RandomForest
from .io import (
    Band,
    CohortManifest,
    DEFAULT_BANDS,
    ManifestEntry,
    Recording,
    load_manifest,
    load_recording,
    save_manifest,
    save_recording,
)
from .network import (
    BinaryNetwork,
    NodeMeasures,
    binarize,
    clustering_coefficients,
    connectivity_density,
    eigenvector_centrality,
    estrada_index,
    node_measures,
    subgraph_centrality,
)
from .pipeline import (
    RunConfig,
    compute_cohort_matrices,
    density_rows,
    group_mean_matrices,
    worker_count,
)
from .preprocessing import (
    BandFilter,
    Epoch,
    design_bandpass,
    epochs_per_recording,
    filter_recording,
    filtfilt,
    segment,
)
from .stats import (
    GroupSummary,
    TTestResult,
    group_summary,
    regularized_incomplete_beta,
    t_two_sided_pvalue,
    welch_ttest,
)
from .synth import CouplingSpec, gen_cohort, gen_coupled_pair, gen_channels, gen_henon_pair

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BandFilter",
    "BinaryNetwork",
    "CohortManifest",
    "CouplingSpec",
    "CvReport",
    "DEFAULT_BANDS",
    "DEFAULT_PARTITION",
    "DEFAULT_THRESHOLDS",
    "Epoch",
    "FeatureTable",
    "GroupSummary",
    "ManifestEntry",
    "MEASURE_ORDER",
    "NodeMeasures",
    "PartitionConfig",
    "RandomForest",
    "Recording",
    "RunConfig",
    "SweepResult",
    "SyncMatrix",
    "TTestResult",
    "binarize",
    "build_feature_table",
    "clustering_coefficients",
    "compute_cohort_matrices",
    "connectivity_density",
    "cpte",
    "cross_validate",
    "density_rows",
    "design_bandpass",
    "eigenvector_centrality",
    "encode_states",
    "epoch_matrix",
    "epochs_per_recording",
    "estrada_index",
    "filter_recording",
    "filtfilt",
    "gen_channels",
    "gen_cohort",
    "gen_coupled_pair",
    "gen_henon_pair",
    "group_mean_matrices",
    "group_summary",
    "knn_classify",
    "load_manifest",
    "load_recording",
    "node_measures",
    "regularized_incomplete_beta",
    "rf_predict",
    "rf_train",
    "save_manifest",
    "save_recording",
    "segment",
    "subgraph_centrality",
    "t_two_sided_pvalue",
    "threshold_sweep",
    "transition_distribution",
    "welch_ttest",
    "worker_count",
]
