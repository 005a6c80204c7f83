"""Command-line pipeline driver.

Subcommands: ``synth`` (generate a coupled cohort), ``cpte`` (per-epoch
synchronization matrices), ``density`` (connectivity density curves),
``sweep`` (threshold sweep), ``classify`` (cross-validated reports) and
``stats`` (group comparison table).  Every command requires an explicit
--seed and an --out directory; artifacts embed the full run configuration
and are byte-identical across reruns.  Worker-pool size comes from the
CPTENET_WORKERS environment variable (default 1).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .classify import DEFAULT_THRESHOLDS, cross_validate, threshold_sweep
from .crossplot import PartitionConfig
from .features import build_feature_table
from .io import load_manifest
from .pipeline import RunConfig, compute_cohort_matrices, density_rows, group_mean_matrices
from .stats import group_summary
from .synth import gen_cohort


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_json(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n")


def _write_csv(path: Path, config: RunConfig, header: list, rows: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write("# config: " + json.dumps(config.to_dict(), sort_keys=True,
                                           default=_json_default) + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _parse_group(text: str) -> tuple:
    try:
        n, c = text.split(":")
        n, c = int(n), float(c)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected N:COUPLING (e.g. 36:0.2), got {text!r}"
        ) from exc
    if n < 1:
        raise argparse.ArgumentTypeError(f"subject count must be >= 1, got {n}")
    return n, c


def _parse_band(text: str) -> tuple:
    try:
        low, high = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected LOW:HIGH in Hz (e.g. 0.5:44), got {text!r}"
        ) from exc
    return low, high


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="cohort manifest JSON")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", required=True, type=int,
                        help="master seed; all randomness derives from it")
    parser.add_argument("--bands", nargs="*", default=(),
                        help="band names to process (default: all manifest bands)")
    parser.add_argument("--angular-ruler", type=float, default=18.0,
                        help="sector width in degrees (default 18 -> 5 sectors)")
    parser.add_argument("--radial-mode", choices=("normalized", "absolute"),
                        default="normalized")
    parser.add_argument("--radial-rings", type=int, default=5)
    parser.add_argument("--radial-ruler", type=float, default=10.0,
                        help="ring width in amplitude units (absolute mode)")
    parser.add_argument("--seg-len", type=int, default=4000)
    parser.add_argument("--win-len", type=int, default=2000)
    parser.add_argument("--step", type=int, default=500)
    parser.add_argument("--filter-order", type=int, default=4)


def _config_from(args, **overrides) -> RunConfig:
    fields = dict(
        manifest=args.manifest,
        seed=args.seed,
        out_dir=args.out,
        bands=tuple(args.bands),
        partition=PartitionConfig(
            angular_ruler_deg=args.angular_ruler,
            radial_mode=args.radial_mode,
            radial_rings=args.radial_rings,
            radial_ruler=args.radial_ruler,
        ),
        seg_len=args.seg_len,
        win_len=args.win_len,
        step=args.step,
        filter_order=args.filter_order,
    )
    fields.update(overrides)
    return RunConfig(**fields)


def _cohort_matrices(config: RunConfig):
    manifest = load_manifest(config.manifest)
    cache_dir = Path(config.out_dir) / "cache"
    return compute_cohort_matrices(
        manifest, band_names=config.bands, cfg=config.partition,
        seg_len=config.seg_len, win_len=config.win_len, step=config.step,
        filter_order=config.filter_order, cache_dir=cache_dir,
    )


def cmd_synth(args) -> int:
    out = Path(args.out)
    gen_cohort(
        group_a=args.group_a, group_b=args.group_b, out_dir=out,
        seed=args.seed, n_channels=args.channels, n_samples=args.samples,
        sampling_rate_hz=args.rate, source_band=args.source_band,
        noise_amplitude=args.noise_amplitude,
    )
    print(out / "manifest.json")
    return 0


def cmd_cpte(args) -> int:
    config = _config_from(args)
    matrices = _cohort_matrices(config)
    out = Path(config.out_dir)
    for m in matrices:
        doc = {
            "config": config.to_dict(),
            "subject_id": m.subject_id,
            "group": m.group,
            "band": m.band,
            "epoch_index": m.epoch_index,
            "channel_names": m.channel_names,
            "degenerate": m.degenerate,
            "values": m.values.tolist(),
        }
        _write_json(out / "matrices" / f"{m.subject_id}_{m.band}_e{m.epoch_index:03d}.json", doc)
    for gm in group_mean_matrices(matrices):
        doc = {
            "config": config.to_dict(),
            "band": gm.band,
            "group": gm.group,
            "epoch_count": gm.epoch_count,
            "channel_names": gm.channel_names,
            "values": gm.values.tolist(),
        }
        _write_json(out / "group_means" / f"{gm.band}_{gm.group}.json", doc)
    print(out / "matrices")
    return 0


def cmd_density(args) -> int:
    config = _config_from(args)
    rows = density_rows(_cohort_matrices(config), grid=config.thresholds)
    out = Path(config.out_dir)
    _write_csv(out / "density.csv", config,
               ["band", "group", "th", "mean_nd"],
               [[r["band"], r["group"], r["th"], r["mean_nd"]] for r in rows])
    _write_json(out / "density.json", {"config": config.to_dict(), "rows": rows})
    print(out / "density.csv")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from(args, measures=tuple(args.measures),
                          folds=args.folds, repeats=args.repeats,
                          rf_trees=args.rf_trees)
    matrices = _cohort_matrices(config)
    out = Path(config.out_dir)
    bands = config.bands or sorted({m.band for m in matrices})
    csv_rows = []
    for band in bands:
        band_matrices = [m for m in matrices if m.band == band]
        result = threshold_sweep(
            band_matrices, measures=config.measures, grid=config.thresholds,
            folds=config.folds, repeats=config.repeats, seed=config.seed,
            rf_trees=config.rf_trees,
        )
        _write_json(out / f"sweep_{band}.json",
                    {"config": config.to_dict(), "result": result.to_dict()})
        for th, mean, std in zip(result.thresholds, result.accuracy_means,
                                 result.accuracy_stds):
            csv_rows.append([band, result.classifier, th, mean, std])
    _write_csv(out / "sweep.csv", config,
               ["band", "classifier", "th", "accuracy_mean", "accuracy_std"], csv_rows)
    print(out / "sweep.csv")
    return 0


def cmd_classify(args) -> int:
    config = _config_from(args, measures=tuple(args.measures),
                          threshold=args.th, folds=args.folds,
                          repeats=args.repeats, knn_k=args.knn_k,
                          rf_trees=args.rf_trees,
                          group_by_subject=args.group_cv)
    matrices = _cohort_matrices(config)
    out = Path(config.out_dir)
    bands = config.bands or sorted({m.band for m in matrices})
    csv_rows = []
    for band in bands:
        band_matrices = [m for m in matrices if m.band == band]
        table = build_feature_table(band_matrices, config.threshold, config.measures)
        for clf in ("rf", "knn"):
            report = cross_validate(
                table, classifier=clf, folds=config.folds, repeats=config.repeats,
                seed=config.seed, knn_k=config.knn_k, rf_trees=config.rf_trees,
                group_by_subject=config.group_by_subject,
            )
            _write_json(out / f"report_{band}_{clf}.json",
                        {"config": config.to_dict(), "report": report.to_dict()})
            csv_rows.append([
                band, clf, "+".join(config.measures), report.feature_count,
                report.accuracy_mean, report.accuracy_std,
                report.sensitivity_mean, report.sensitivity_std,
                report.specificity_mean, report.specificity_std,
            ])
    _write_csv(out / "classify.csv", config,
               ["band", "classifier", "measures", "feature_count",
                "accuracy_mean", "accuracy_std", "sensitivity_mean",
                "sensitivity_std", "specificity_mean", "specificity_std"],
               csv_rows)
    print(out / "classify.csv")
    return 0


def cmd_stats(args) -> int:
    config = _config_from(args, threshold=args.th)
    matrices = _cohort_matrices(config)
    out = Path(config.out_dir)
    bands = config.bands or sorted({m.band for m in matrices})
    rows, docs = [], []
    for band in bands:
        band_matrices = [m for m in matrices if m.band == band]
        table = build_feature_table(band_matrices, config.threshold)
        for measure in config.measures:
            summary = group_summary(table, measure,
                                    per_subject_means=args.per_subject_means)
            rows.append([measure, band, summary.median_a, summary.median_b,
                         summary.t_statistic, summary.degrees_of_freedom,
                         summary.p_value])
            docs.append(summary.__dict__ | {"band": band})
    _write_csv(out / "stats.csv", config,
               ["measure", "band", "median_a", "median_b", "t_statistic",
                "degrees_of_freedom", "p_value"], rows)
    _write_json(out / "stats.json", {"config": config.to_dict(), "rows": docs})
    print(out / "stats.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cptenet",
        description="Cross-plot transition entropy synchronization and network analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic two-group cohort")
    p.add_argument("--group-a", required=True, type=_parse_group, metavar="N:COUPLING")
    p.add_argument("--group-b", required=True, type=_parse_group, metavar="N:COUPLING")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--channels", type=int, default=19)
    p.add_argument("--samples", type=int, default=120000)
    p.add_argument("--rate", type=float, default=500.0)
    p.add_argument("--source-band", type=_parse_band, default=(0.5, 44.0),
                   metavar="LOW:HIGH")
    p.add_argument("--noise-amplitude", type=float, default=1.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("cpte", help="per-epoch synchronization matrices")
    _add_common(p)
    p.set_defaults(func=cmd_cpte)

    p = sub.add_parser("density", help="connectivity density versus threshold")
    _add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sweep", help="threshold sweep of RF accuracy")
    _add_common(p)
    p.add_argument("--measures", nargs="*", default=("CC", "SC", "EC"))
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--rf-trees", type=int, default=100)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="cross-validated RF and kNN reports")
    _add_common(p)
    p.add_argument("--th", type=float, default=0.6)
    p.add_argument("--measures", nargs="*", default=("CC", "SC", "EC"))
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--knn-k", type=int, default=5)
    p.add_argument("--rf-trees", type=int, default=100)
    p.add_argument("--group-cv", action="store_true",
                   help="keep each subject's epochs in a single fold")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("stats", help="per-measure group comparison table")
    _add_common(p)
    p.add_argument("--th", type=float, default=0.6)
    p.add_argument("--per-subject-means", action="store_true",
                   help="collapse epochs to per-subject means before testing")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        record = {
            "command": args.command,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
