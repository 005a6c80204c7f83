"""Recording and cohort-manifest I/O.

On-disk recording format: a little-endian float32 binary payload holding the
channel-major (row-major) sample matrix, next to a JSON sidecar with the same
basename and a ``.json`` suffix carrying subject id, group, sampling rate,
channel names and declared sample count.  A plain-text alternative (one
comma-separated row per channel, ``.csv`` suffix) is accepted for hand-made
fixtures; it uses the same sidecar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GROUPS = ("A", "B")

PAYLOAD_DTYPE = np.dtype("<f4")


@dataclass
class Recording:
    """One multichannel recording plus acquisition metadata.

    ``samples`` has shape (n_channels, n_samples); amplitude units are
    arbitrary (microvolts for clinical data).
    """

    subject_id: str
    group: str
    sampling_rate_hz: float
    channel_names: list[str]
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        if self.sampling_rate_hz <= 0:
            raise ValueError(f"sampling_rate_hz must be positive, got {self.sampling_rate_hz}")
        if self.samples.ndim != 2:
            raise ValueError(f"samples must be 2-D (channels x samples), got shape {self.samples.shape}")
        n_ch, n_samp = self.samples.shape
        if n_ch < 2:
            raise ValueError(f"channel count mismatch: need at least 2 channels, got {n_ch}")
        if n_samp < 1:
            raise ValueError("recording holds no samples")
        if len(self.channel_names) != n_ch:
            raise ValueError(
                f"channel count mismatch: {len(self.channel_names)} names for {n_ch} rows"
            )
        if len(set(self.channel_names)) != len(self.channel_names):
            raise ValueError("channel_names must be unique")
        if not np.isfinite(self.samples).all():
            raise ValueError("NaN/Inf detected in samples")

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class Band:
    """A named frequency band (Hz)."""

    name: str
    low_hz: float
    high_hz: float

    def __post_init__(self):
        if not (0 < self.low_hz < self.high_hz):
            raise ValueError(
                f"malformed band spec {self.name!r}: need 0 < low < high, "
                f"got ({self.low_hz}, {self.high_hz})"
            )


#: The five clinical bands plus the wide pass band used for whole-spectrum runs.
DEFAULT_BANDS = (
    Band("all", 0.5, 44.0),
    Band("delta", 0.5, 4.0),
    Band("theta", 4.0, 8.0),
    Band("alpha", 8.0, 13.0),
    Band("beta", 13.0, 30.0),
    Band("gamma", 31.0, 44.0),
)


@dataclass(frozen=True)
class ManifestEntry:
    subject_id: str
    group: str
    path: Path


@dataclass
class CohortManifest:
    entries: list[ManifestEntry]
    bands: list[Band] = field(default_factory=lambda: list(DEFAULT_BANDS))

    def __post_init__(self):
        ids = [e.subject_id for e in self.entries]
        dupes = {s for s in ids if ids.count(s) > 1}
        if dupes:
            raise ValueError(f"duplicate subject id(s): {sorted(dupes)}")
        names = [b.name for b in self.bands]
        if len(set(names)) != len(names):
            raise ValueError("duplicate band name in manifest")

    def band(self, name: str) -> Band:
        for b in self.bands:
            if b.name == name:
                return b
        raise KeyError(f"unknown band {name!r}")


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def save_recording(rec: Recording, path) -> Path:
    """Write the binary payload at ``path`` and its JSON sidecar; returns ``path``.

    The payload is the float32 little-endian channel-major sample matrix, so a
    save/load round trip reproduces float32 samples bit-exactly.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = np.ascontiguousarray(rec.samples, dtype=PAYLOAD_DTYPE)
    path.write_bytes(payload.tobytes())
    sidecar = {
        "subject_id": rec.subject_id,
        "group": rec.group,
        "sampling_rate_hz": rec.sampling_rate_hz,
        "channel_names": list(rec.channel_names),
        "n_samples": rec.n_samples,
        "payload_format": "float32-le-channel-major",
    }
    _sidecar_path(path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


def _load_sidecar(path: Path) -> dict:
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        raise FileNotFoundError(f"missing sidecar {sidecar} for recording {path}")
    meta = json.loads(sidecar.read_text())
    for key in ("subject_id", "group", "sampling_rate_hz", "channel_names", "n_samples"):
        if key not in meta:
            raise ValueError(f"sidecar {sidecar} lacks required field {key!r}")
    return meta


def load_recording(path) -> Recording:
    """Load a recording (binary payload or ``.csv`` fixture) with its sidecar."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"recording file not found: {path}")
    meta = _load_sidecar(path)
    n_ch = len(meta["channel_names"])
    n_samp = int(meta["n_samples"])
    if n_ch < 2:
        raise ValueError(f"channel count mismatch: sidecar declares {n_ch} channels")
    if path.suffix == ".csv":
        samples = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float32)
        if samples.shape[0] != n_ch:
            raise ValueError(
                f"channel count mismatch: sidecar declares {n_ch}, file has {samples.shape[0]} rows"
            )
        if samples.shape[1] != n_samp:
            raise ValueError(
                f"truncated payload: sidecar declares {n_samp} samples, file has {samples.shape[1]}"
            )
    else:
        raw = np.frombuffer(path.read_bytes(), dtype=PAYLOAD_DTYPE)
        if raw.size != n_ch * n_samp:
            raise ValueError(
                f"truncated payload: expected {n_ch * n_samp} float32 values, got {raw.size}"
            )
        samples = raw.reshape(n_ch, n_samp)
    return Recording(
        subject_id=meta["subject_id"],
        group=meta["group"],
        sampling_rate_hz=float(meta["sampling_rate_hz"]),
        channel_names=list(meta["channel_names"]),
        samples=samples,
    )


def save_manifest(manifest: CohortManifest, path) -> Path:
    """Write a cohort manifest as JSON; entry paths are stored as given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "entries": [
            {"subject_id": e.subject_id, "group": e.group, "path": str(e.path)}
            for e in manifest.entries
        ],
        "bands": [
            {"name": b.name, "low_hz": b.low_hz, "high_hz": b.high_hz}
            for b in manifest.bands
        ],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def load_manifest(path) -> CohortManifest:
    """Load and validate a cohort manifest.

    Relative entry paths are resolved against the manifest's directory.  Every
    referenced payload file must exist; bands default to :data:`DEFAULT_BANDS`
    when the document has none.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"manifest not found: {path}")
    doc = json.loads(path.read_text())
    if "entries" not in doc or not isinstance(doc["entries"], list):
        raise ValueError(f"manifest {path} lacks an 'entries' list")
    entries = []
    for item in doc["entries"]:
        p = Path(item["path"])
        if not p.is_absolute():
            p = path.parent / p
        if item["group"] not in GROUPS:
            raise ValueError(f"manifest entry {item['subject_id']!r} has bad group {item['group']!r}")
        entries.append(ManifestEntry(item["subject_id"], item["group"], p))
    bands = [Band(b["name"], float(b["low_hz"]), float(b["high_hz"]))
             for b in doc.get("bands", [])] or list(DEFAULT_BANDS)
    manifest = CohortManifest(entries=entries, bands=bands)
    missing = [str(e.path) for e in manifest.entries if not e.path.exists()]
    if missing:
        raise FileNotFoundError(f"manifest references missing file(s): {missing}")
    return manifest
