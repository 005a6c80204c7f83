"""Band-pass filtering and sliding-window segmentation.

Filtering is zero-phase (forward-backward Butterworth cascade) and is applied
to the full recording before segmentation, so window edges carry no filter
transients.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import signal as sps

from .io import Recording


@dataclass(frozen=True)
class BandFilter:
    """Butterworth band-pass as a cascade of second-order sections.

    ``order`` is the analog prototype order; the band-pass cascade holds
    ``order`` sections (two per band edge for the default order 4).
    """

    low_hz: float
    high_hz: float
    order: int
    sampling_rate_hz: float
    sos: np.ndarray


def design_bandpass(low_hz: float, high_hz: float, order: int = 4,
                    sampling_rate_hz: float = 500.0) -> BandFilter:
    """Design a maximally flat band-pass filter.

    Parameters
    ----------
    low_hz, high_hz : float
        Pass-band edges; must satisfy 0 < low < high < Nyquist.
    order : int
        Even prototype order (default 4).
    sampling_rate_hz : float
        Sampling rate of the signals the filter will run on.

    Returns
    -------
    BandFilter
        Stable second-order-section cascade.
    """
    nyquist = 0.5 * sampling_rate_hz
    if not (0 < low_hz < high_hz):
        raise ValueError(f"band edges must satisfy 0 < low < high, got ({low_hz}, {high_hz})")
    if high_hz >= nyquist:
        raise ValueError(
            f"band outside (0, Nyquist): high edge {high_hz} Hz >= {nyquist} Hz"
        )
    if order < 2 or order % 2:
        raise ValueError(f"order must be a positive even integer, got {order}")
    sos = sps.butter(order, [low_hz, high_hz], btype="bandpass",
                     output="sos", fs=sampling_rate_hz)
    # Every feedback polynomial must have its roots strictly inside the unit
    # circle, otherwise the design is numerically unusable.
    for section in sos:
        roots = np.roots(section[3:])
        if np.any(np.abs(roots) >= 1.0):
            raise ValueError(
                f"unstable design for band ({low_hz}, {high_hz}) at "
                f"{sampling_rate_hz} Hz, order {order}"
            )
    return BandFilter(low_hz, high_hz, order, sampling_rate_hz, sos)


def filtfilt(x: np.ndarray, bf: BandFilter) -> np.ndarray:
    """Zero-phase application of ``bf`` to a single channel.

    Runs the cascade forward then backward with odd-symmetric reflection
    padding of length 3 * (order + 1), so the output has the input's length
    and no phase shift.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"filtfilt expects one channel, got shape {x.shape}")
    padlen = 3 * (bf.order + 1)
    if x.size <= padlen:
        raise ValueError(
            f"sequence too short for edge padding: length {x.size} <= padlen {padlen}"
        )
    return sps.sosfiltfilt(bf.sos, x, padtype="odd", padlen=padlen)


def filter_recording(rec: Recording, bf: BandFilter) -> Recording:
    """Return a copy of ``rec`` with every channel filtered by ``bf``."""
    if bf.sampling_rate_hz != rec.sampling_rate_hz:
        raise ValueError(
            f"filter designed for {bf.sampling_rate_hz} Hz, recording sampled at "
            f"{rec.sampling_rate_hz} Hz"
        )
    filtered = np.vstack([filtfilt(ch, bf) for ch in rec.samples])
    return Recording(rec.subject_id, rec.group, rec.sampling_rate_hz,
                     list(rec.channel_names), filtered)


@dataclass
class Epoch:
    """One sliding window (all channels x window length) of a recording."""

    subject_id: str
    group: str
    band: str
    epoch_index: int
    samples: np.ndarray
    channel_names: list[str] = None

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]


def epochs_per_recording(n_samples: int, seg_len: int = 4000,
                         win_len: int = 2000, step: int = 500) -> int:
    """Epoch count produced by :func:`segment` for a recording of ``n_samples``."""
    windows_per_seg = (seg_len - win_len) // step + 1
    return (n_samples // seg_len) * windows_per_seg


def segment(rec: Recording, seg_len: int = 4000, win_len: int = 2000,
            step: int = 500, band: str = "all") -> list[Epoch]:
    """Split a recording into sliding-window epochs.

    The recording is cut into consecutive non-overlapping segments of
    ``seg_len`` samples (trailing samples beyond the last whole segment are
    dropped); each segment yields ``(seg_len - win_len) // step + 1`` windows
    of ``win_len`` samples advanced by ``step``.  Windows never cross segment
    boundaries.  Defaults give 150 epochs for a 120000-sample recording.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if win_len > seg_len:
        raise ValueError(f"window length {win_len} exceeds segment length {seg_len}")
    if rec.n_samples < seg_len:
        raise ValueError(
            f"recording shorter than one segment: {rec.n_samples} < {seg_len}"
        )
    windows_per_seg = (seg_len - win_len) // step + 1
    epochs = []
    index = 0
    for seg_start in range(0, rec.n_samples - seg_len + 1, seg_len):
        for w in range(windows_per_seg):
            start = seg_start + w * step
            epochs.append(Epoch(
                subject_id=rec.subject_id,
                group=rec.group,
                band=band,
                epoch_index=index,
                samples=rec.samples[:, start:start + win_len],
                channel_names=list(rec.channel_names),
            ))
            index += 1
    return epochs
