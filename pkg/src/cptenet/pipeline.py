"""Cohort-level orchestration: per-epoch matrices, caching, group summaries.

Matrix computation is pure per (subject, band) and may fan out over a worker
pool (``CPTENET_WORKERS``); results keep the canonical order (manifest entry
order x band order x epoch index) no matter the schedule, and per-epoch
matrices are cached content-addressed by (subject, band, partition/segment
configuration hash).
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from .classify import DEFAULT_THRESHOLDS
from .crossplot import PartitionConfig, SyncMatrix, epoch_matrix
from .features import MEASURE_ORDER
from .io import Band, CohortManifest, load_recording
from .network import binarize, connectivity_density
from .preprocessing import design_bandpass, filter_recording, segment


def worker_count() -> int:
    """Worker-pool size; set via the CPTENET_WORKERS environment variable."""
    raw = os.environ.get("CPTENET_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class RunConfig:
    """Everything a pipeline command needs; the seed is mandatory.

    Serialized into every artifact so outputs are reproducible byte-for-byte
    from the embedded document alone.
    """

    manifest: str
    seed: int
    out_dir: str
    bands: tuple = ()                 # band names; empty = all manifest bands
    partition: PartitionConfig = field(default_factory=PartitionConfig)
    seg_len: int = 4000
    win_len: int = 2000
    step: int = 500
    filter_order: int = 4
    thresholds: tuple = DEFAULT_THRESHOLDS
    threshold: float = 0.6
    measures: tuple = MEASURE_ORDER
    folds: int = 10
    repeats: int = 10
    knn_k: int = 5
    rf_trees: int = 100
    group_by_subject: bool = False

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("seed is mandatory; no implicit entropy source")

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["bands"] = list(self.bands)
        doc["thresholds"] = list(self.thresholds)
        doc["measures"] = list(self.measures)
        return doc


def _select_bands(manifest: CohortManifest, band_names) -> list[Band]:
    if not band_names:
        return list(manifest.bands)
    return [manifest.band(name) for name in band_names]


def _cache_key(subject_id: str, band: Band, cfg: PartitionConfig,
               seg_len: int, win_len: int, step: int, filter_order: int) -> str:
    doc = {
        "subject": subject_id,
        "band": [band.name, band.low_hz, band.high_hz],
        "partition": asdict(cfg),
        "segmentation": [seg_len, win_len, step],
        "filter_order": filter_order,
    }
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _task_matrices(args) -> list[SyncMatrix]:
    """Matrices for one (subject, band); module-level so pools can pickle it."""
    (path, subject_id, group, band, cfg, seg_len, win_len, step,
     filter_order, cache_dir) = args
    cache_file = None
    if cache_dir is not None:
        key = _cache_key(subject_id, band, cfg, seg_len, win_len, step, filter_order)
        cache_file = Path(cache_dir) / f"{key}.npz"
        if cache_file.exists():
            with np.load(cache_file, allow_pickle=False) as blob:
                names = [str(n) for n in blob["channel_names"]]
                return [
                    SyncMatrix(values=blob["values"][i], subject_id=subject_id,
                               group=group, band=band.name,
                               epoch_index=int(blob["epoch_indices"][i]),
                               channel_names=names,
                               degenerate=bool(blob["degenerate"][i]))
                    for i in range(blob["values"].shape[0])
                ]

    rec = load_recording(path)
    bf = design_bandpass(band.low_hz, band.high_hz, order=filter_order,
                         sampling_rate_hz=rec.sampling_rate_hz)
    filtered = filter_recording(rec, bf)
    epochs = segment(filtered, seg_len=seg_len, win_len=win_len, step=step,
                     band=band.name)
    matrices = [epoch_matrix(ep, cfg) for ep in epochs]

    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache_file.with_suffix(".tmp.npz")
        with open(tmp, "wb") as fh:
            np.savez(
                fh,
                values=np.stack([m.values for m in matrices]),
                epoch_indices=np.array([m.epoch_index for m in matrices]),
                degenerate=np.array([m.degenerate for m in matrices]),
                channel_names=np.array(matrices[0].channel_names),
            )
        tmp.replace(cache_file)
    return matrices


def compute_cohort_matrices(manifest: CohortManifest, band_names=(),
                            cfg: PartitionConfig = None, seg_len: int = 4000,
                            win_len: int = 2000, step: int = 500,
                            filter_order: int = 4, cache_dir=None,
                            workers: int = None) -> list[SyncMatrix]:
    """Normalized CPTE matrices for every (subject, band, epoch) of a cohort.

    The output order is canonical: manifest entry order, then band order,
    then epoch index.  Errors are re-raised with the subject id attached.
    """
    cfg = cfg or PartitionConfig()
    bands = _select_bands(manifest, band_names)
    tasks = [
        (entry.path, entry.subject_id, entry.group, band, cfg,
         seg_len, win_len, step, filter_order, cache_dir)
        for entry in manifest.entries
        for band in bands
    ]
    workers = workers if workers is not None else worker_count()
    try:
        if workers > 1 and len(tasks) > 1:
            with get_context("spawn").Pool(workers) as pool:
                per_task = pool.map(_task_matrices, tasks)
        else:
            per_task = [_task_matrices(t) for t in tasks]
    except Exception as exc:
        raise RuntimeError(f"matrix computation failed: {exc}") from exc
    return [m for task_result in per_task for m in task_result]


@dataclass
class GroupMeanMatrix:
    """Average synchronization matrix of one (band, group) cell."""

    band: str
    group: str
    values: np.ndarray
    epoch_count: int
    channel_names: list[str]


def group_mean_matrices(matrices) -> list[GroupMeanMatrix]:
    """Per-(band, group) averages, ordered by first appearance."""
    sums: dict = {}
    for m in matrices:
        key = (m.band, m.group)
        if key not in sums:
            sums[key] = [np.zeros_like(m.values), 0, m.channel_names]
        sums[key][0] += m.values
        sums[key][1] += 1
    return [
        GroupMeanMatrix(band=band, group=group, values=acc / count,
                        epoch_count=count, channel_names=names)
        for (band, group), (acc, count, names) in sums.items()
    ]


def density_rows(matrices, grid=DEFAULT_THRESHOLDS) -> list[dict]:
    """Mean connectivity density per (band, group, threshold).

    Rows are ordered by first appearance of the (band, group) cell, then by
    threshold; every density column is nondecreasing in the threshold.
    """
    cells: dict = {}
    for m in matrices:
        key = (m.band, m.group)
        densities = [connectivity_density(binarize(m, th)) for th in grid]
        if key not in cells:
            cells[key] = [np.zeros(len(grid)), 0]
        cells[key][0] += densities
        cells[key][1] += 1
    rows = []
    for (band, group), (acc, count) in cells.items():
        for th, total in zip(grid, acc):
            rows.append({
                "band": band, "group": group, "th": th,
                "mean_nd": total / count,
            })
    return rows
