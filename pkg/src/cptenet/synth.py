"""Seeded synthetic recordings with known coupling strength.

The common-drive generator mixes one shared band-limited source into every
channel: channel_k = (1 - c) * noise_k + c * source, all components unit
variance before mixing, so any two channels share the source with the same
coupling c.  Mean CPTE decreases as c rises, which makes these cohorts a
ground-truth harness for the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .io import (Band, CohortManifest, DEFAULT_BANDS, ManifestEntry, Recording,
                 load_manifest, save_manifest, save_recording)
from .preprocessing import design_bandpass, filtfilt

#: Samples discarded on each side when band-limiting white noise, so filter
#: edge effects never reach the returned window.
_GUARD = 2000


@dataclass(frozen=True)
class CouplingSpec:
    """Parameters of one coupled-signal draw; ``seed`` is mandatory."""

    coupling: float
    seed: int
    n_channels: int = 19
    n_samples: int = 120000
    sampling_rate_hz: float = 500.0
    source_band: tuple = (0.5, 44.0)
    noise_amplitude: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.coupling <= 1.0):
            raise ValueError(f"coupling must lie in [0, 1], got {self.coupling}")
        low, high = self.source_band
        if not (0 < low < high < self.sampling_rate_hz / 2):
            raise ValueError(
                f"invalid band {self.source_band} for rate {self.sampling_rate_hz}"
            )
        if self.n_channels < 2:
            raise ValueError(f"need >= 2 channels, got {self.n_channels}")
        if self.n_samples < 1:
            raise ValueError(f"need >= 1 sample, got {self.n_samples}")


def _band_noise(rng: np.random.Generator, n: int, bf) -> np.ndarray:
    """Unit-variance band-limited noise of length n."""
    white = rng.standard_normal(n + 2 * _GUARD)
    shaped = filtfilt(white, bf)[_GUARD:-_GUARD]
    return shaped / shaped.std()


def gen_channels(spec: CouplingSpec) -> np.ndarray:
    """All channels of one subject: (n_channels, n_samples) common-drive mix."""
    bf = design_bandpass(spec.source_band[0], spec.source_band[1],
                         sampling_rate_hz=spec.sampling_rate_hz)
    rng = np.random.default_rng(spec.seed)
    c = spec.coupling
    source = _band_noise(rng, spec.n_samples, bf)
    channels = np.empty((spec.n_channels, spec.n_samples))
    for k in range(spec.n_channels):
        channels[k] = (1.0 - c) * _band_noise(rng, spec.n_samples, bf) + c * source
    return channels * spec.noise_amplitude


def gen_coupled_pair(spec: CouplingSpec) -> tuple[np.ndarray, np.ndarray]:
    """One coupled pair (x, y); ``spec.n_channels`` is ignored (always 2)."""
    pair_spec = CouplingSpec(
        coupling=spec.coupling, seed=spec.seed, n_channels=2,
        n_samples=spec.n_samples, sampling_rate_hz=spec.sampling_rate_hz,
        source_band=spec.source_band, noise_amplitude=spec.noise_amplitude,
    )
    channels = gen_channels(pair_spec)
    return channels[0], channels[1]


def gen_henon_pair(coupling: float, n_samples: int, seed: int,
                   discard: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """Unidirectionally coupled Henon maps as a nonlinear stressor.

    The driver x runs the classic map (a=1.4, b=0.3); the response y replaces
    a share ``coupling`` of its own quadratic feedback with the driver's
    state.  At coupling 1 the identical-synchronization manifold y = x is
    invariant.  Initial conditions are redrawn from the seeded generator if
    an orbit escapes.
    """
    if not (0.0 <= coupling <= 1.0):
        raise ValueError(f"coupling must lie in [0, 1], got {coupling}")
    rng = np.random.default_rng(seed)
    a, b = 1.4, 0.3
    for _ in range(100):
        x = np.empty(n_samples + discard)
        y = np.empty(n_samples + discard)
        x[0], x[1] = rng.uniform(0.0, 0.5, size=2)
        y[0], y[1] = rng.uniform(0.0, 0.5, size=2)
        ok = True
        for i in range(1, n_samples + discard - 1):
            x[i + 1] = a - x[i] ** 2 + b * x[i - 1]
            drive = coupling * x[i] + (1.0 - coupling) * y[i]
            y[i + 1] = a - drive * y[i] + b * y[i - 1]
            if abs(x[i + 1]) > 1e6 or abs(y[i + 1]) > 1e6:
                ok = False
                break
        if ok:
            return x[discard:], y[discard:]
    raise RuntimeError("could not find a bounded Henon orbit")


def _subject_seed(master_seed: int, group_index: int, subject_index: int) -> int:
    seq = np.random.SeedSequence(entropy=master_seed,
                                 spawn_key=(group_index, subject_index))
    return int(seq.generate_state(1)[0])


def gen_cohort(group_a: tuple, group_b: tuple, out_dir, seed: int,
               n_channels: int = 19, n_samples: int = 120000,
               sampling_rate_hz: float = 500.0, source_band: tuple = (0.5, 44.0),
               noise_amplitude: float = 1.0,
               bands=DEFAULT_BANDS) -> CohortManifest:
    """Write a two-group cohort of recordings plus its manifest.

    ``group_a``/``group_b`` are (n_subjects, coupling) tuples.  Each subject
    is generated from a positionally derived seed, so cohorts are fully
    reproducible and subjects could be produced in any order.  Default sizes
    give 150 epochs per subject under default segmentation.

    Returns the manifest; it is also saved as ``out_dir/manifest.json``.
    """
    for name, (n_sub, c) in (("group_a", group_a), ("group_b", group_b)):
        if n_sub < 1:
            raise ValueError(f"{name} needs at least one subject, got {n_sub}")
        if not (0.0 <= c <= 1.0):
            raise ValueError(f"{name} coupling must lie in [0, 1], got {c}")
    out_dir = Path(out_dir)
    rec_dir = out_dir / "recordings"
    rec_dir.mkdir(parents=True, exist_ok=True)

    channel_names = [f"ch{k:02d}" for k in range(n_channels)]
    entries = []
    for gi, (group, (n_sub, c)) in enumerate((("A", group_a), ("B", group_b))):
        for s in range(n_sub):
            spec = CouplingSpec(
                coupling=c, seed=_subject_seed(seed, gi, s),
                n_channels=n_channels, n_samples=n_samples,
                sampling_rate_hz=sampling_rate_hz, source_band=source_band,
                noise_amplitude=noise_amplitude,
            )
            subject_id = f"{group.lower()}{s + 1:03d}"
            rec = Recording(
                subject_id=subject_id,
                group=group,
                sampling_rate_hz=sampling_rate_hz,
                channel_names=channel_names,
                samples=gen_channels(spec).astype(np.float32),
            )
            save_recording(rec, rec_dir / f"{subject_id}.f32")
            # Manifest paths stay relative to the manifest's directory so the
            # cohort folder can be moved or shipped as-is.
            entries.append(ManifestEntry(subject_id, group,
                                         Path("recordings") / f"{subject_id}.f32"))

    save_manifest(CohortManifest(entries=entries, bands=list(bands)),
                  out_dir / "manifest.json")
    return load_manifest(out_dir / "manifest.json")
