import hashlib
import json

import numpy as np
import pytest

from cptenet.io import (
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


def test_round_trip_is_bit_exact(tmp_path, make_recording):
    rec = make_recording(n_ch=3, n_samp=1234, seed=42)
    path = save_recording(rec, tmp_path / "rec.f32")
    loaded = load_recording(path)
    assert loaded.samples.dtype == np.float32
    assert np.array_equal(loaded.samples, rec.samples)
    assert loaded.subject_id == rec.subject_id
    assert loaded.group == rec.group
    assert loaded.sampling_rate_hz == rec.sampling_rate_hz
    assert loaded.channel_names == rec.channel_names


def test_loading_does_not_mutate_files(tmp_path, make_recording):
    path = save_recording(make_recording(), tmp_path / "rec.f32")
    sidecar = tmp_path / "rec.json"
    digests = [hashlib.sha256(p.read_bytes()).hexdigest() for p in (path, sidecar)]
    load_recording(path)
    load_recording(path)
    assert digests == [hashlib.sha256(p.read_bytes()).hexdigest() for p in (path, sidecar)]


def test_paper_scale_recording_shape(tmp_path):
    # 19 channels x 120000 samples at 500 Hz = a 4-minute recording
    rec = Recording(
        subject_id="s01", group="A", sampling_rate_hz=500.0,
        channel_names=[f"ch{i:02d}" for i in range(19)],
        samples=np.zeros((19, 120000), dtype=np.float32) + np.arange(19, dtype=np.float32)[:, None],
    )
    loaded = load_recording(save_recording(rec, tmp_path / "big.f32"))
    assert loaded.n_channels == 19
    assert loaded.n_samples == 120000


def test_missing_sidecar(tmp_path):
    payload = tmp_path / "orphan.f32"
    payload.write_bytes(b"\x00" * 16)
    with pytest.raises(FileNotFoundError, match="sidecar"):
        load_recording(payload)


def test_truncated_payload(tmp_path, make_recording):
    rec = make_recording(n_ch=2, n_samp=100)
    path = save_recording(rec, tmp_path / "rec.f32")
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match="truncated payload"):
        load_recording(path)


def test_channel_count_mismatch(tmp_path, make_recording):
    path = save_recording(make_recording(n_ch=3, n_samp=50), tmp_path / "rec.f32")
    sidecar = tmp_path / "rec.json"
    meta = json.loads(sidecar.read_text())
    meta["channel_names"] = []
    sidecar.write_text(json.dumps(meta))
    with pytest.raises(ValueError, match="channel count mismatch"):
        load_recording(path)


def test_nan_rejected():
    samples = np.zeros((2, 10), dtype=np.float32)
    samples[1, 3] = np.nan
    with pytest.raises(ValueError, match="NaN/Inf"):
        Recording("s", "A", 500.0, ["c1", "c2"], samples)


def test_recording_invariants():
    good = np.zeros((2, 5), dtype=np.float32)
    with pytest.raises(ValueError, match="channel count"):
        Recording("s", "A", 500.0, ["c1"], good[:1])
    with pytest.raises(ValueError, match="unique"):
        Recording("s", "A", 500.0, ["c1", "c1"], good)
    with pytest.raises(ValueError, match="group"):
        Recording("s", "C", 500.0, ["c1", "c2"], good)
    with pytest.raises(ValueError, match="sampling_rate"):
        Recording("s", "A", -1.0, ["c1", "c2"], good)


def test_csv_fixture_round_trip(tmp_path):
    rows = "0.0,1.5,2.5\n3.0,4.0,5.0\n"
    (tmp_path / "fix.csv").write_text(rows)
    meta = {
        "subject_id": "f1", "group": "B", "sampling_rate_hz": 100.0,
        "channel_names": ["a", "b"], "n_samples": 3,
    }
    (tmp_path / "fix.json").write_text(json.dumps(meta))
    rec = load_recording(tmp_path / "fix.csv")
    assert rec.samples.shape == (2, 3)
    assert rec.samples[1, 2] == 5.0
    assert rec.group == "B"


def _write_cohort(tmp_path, n_a, n_b, make_recording):
    entries = []
    for group, count in (("A", n_a), ("B", n_b)):
        for i in range(count):
            sid = f"{group.lower()}{i:03d}"
            rec = make_recording(n_ch=2, n_samp=8, seed=i, group=group, subject_id=sid)
            save_recording(rec, tmp_path / f"{sid}.f32")
            entries.append({"subject_id": sid, "group": group, "path": f"{sid}.f32"})
    return entries


def test_manifest_paper_scale_cohort(tmp_path, make_recording):
    entries = _write_cohort(tmp_path, 36, 23, make_recording)
    doc = {"entries": entries}
    (tmp_path / "manifest.json").write_text(json.dumps(doc))
    manifest = load_manifest(tmp_path / "manifest.json")
    assert len(manifest.entries) == 59
    assert [b.name for b in manifest.bands] == [b.name for b in DEFAULT_BANDS]


def test_manifest_duplicate_subject(tmp_path, make_recording):
    entries = _write_cohort(tmp_path, 2, 0, make_recording)
    entries.append(dict(entries[0]))
    (tmp_path / "manifest.json").write_text(json.dumps({"entries": entries}))
    with pytest.raises(ValueError, match="duplicate subject"):
        load_manifest(tmp_path / "manifest.json")


def test_manifest_missing_file(tmp_path, make_recording):
    entries = _write_cohort(tmp_path, 2, 0, make_recording)
    entries[0]["path"] = "nope.f32"
    (tmp_path / "manifest.json").write_text(json.dumps({"entries": entries}))
    with pytest.raises(FileNotFoundError, match="missing file"):
        load_manifest(tmp_path / "manifest.json")


def test_manifest_bad_band(tmp_path, make_recording):
    entries = _write_cohort(tmp_path, 2, 0, make_recording)
    doc = {"entries": entries, "bands": [{"name": "x", "low_hz": 8.0, "high_hz": 4.0}]}
    (tmp_path / "manifest.json").write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="malformed band"):
        load_manifest(tmp_path / "manifest.json")


def test_band_validation():
    with pytest.raises(ValueError, match="malformed band"):
        Band("bad", 10.0, 10.0)
    with pytest.raises(ValueError, match="malformed band"):
        Band("bad", 0.0, 10.0)


def test_manifest_round_trip(tmp_path, make_recording):
    save_recording(make_recording(subject_id="s1"), tmp_path / "s1.f32")
    manifest = CohortManifest(
        entries=[ManifestEntry("s1", "A", tmp_path / "s1.f32")],
        bands=[Band("low", 1.0, 10.0)],
    )
    save_manifest(manifest, tmp_path / "m.json")
    loaded = load_manifest(tmp_path / "m.json")
    assert loaded.entries[0].subject_id == "s1"
    assert loaded.band("low").high_hz == 10.0
    with pytest.raises(KeyError):
        loaded.band("gamma")
