"""Cross-plot transition entropy (CPTE) between paired sequences.

Two equal-length sequences are shifted to the first quadrant by subtracting
each one's minimum and scattered as points (x_i, y_i).  The quadrant is
partitioned into radial rings and angular sectors; each point gets a discrete
state, and the entropy of the empirical distribution of consecutive-state
transitions is the CPTE.  Lower values mean stronger coupling: points of a
tightly coupled pair hug the diagonal and visit few states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .preprocessing import Epoch


@dataclass(frozen=True)
class PartitionConfig:
    """Cross-plot partition parameters.

    The default 18-degree angular ruler with 5 normalized rings yields the
    5x5 state grid (rings A..E by radius, sectors 1..5 by angle).  A
    10-degree ruler (9 sectors, 45 states) is one field away for finer
    angular resolution.

    ``radial_mode`` selects how rings are cut:

    * ``"normalized"`` (default): radii are rescaled by the pair's maximum
      radius, giving ``radial_rings`` equal-width rings.  CPTE is then
      invariant to a common positive rescaling of both inputs.
    * ``"absolute"``: rings have fixed width ``radial_ruler`` in input
      amplitude units, so the ring count follows the data's extent.
    """

    angular_ruler_deg: float = 18.0
    radial_mode: str = "normalized"
    radial_rings: int = 5
    radial_ruler: float = 10.0

    def __post_init__(self):
        if not (0 < self.angular_ruler_deg <= 90):
            raise ValueError(
                f"angular ruler must lie in (0, 90] degrees, got {self.angular_ruler_deg}"
            )
        if self.radial_mode not in ("normalized", "absolute"):
            raise ValueError(f"unknown radial_mode {self.radial_mode!r}")
        if self.radial_rings < 1:
            raise ValueError(f"radial_rings must be >= 1, got {self.radial_rings}")
        if self.radial_ruler <= 0:
            raise ValueError(f"radial_ruler must be positive, got {self.radial_ruler}")

    @property
    def n_sectors(self) -> int:
        return math.ceil(90.0 / self.angular_ruler_deg)


DEFAULT_PARTITION = PartitionConfig()


def _rings_and_sectors(x: np.ndarray, y: np.ndarray, cfg: PartitionConfig):
    """Per-point (ring, sector, ring_count) for the min-shifted cross plot."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("inputs must be one-dimensional sequences")
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError(f"need at least 2 samples, got {x.size}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("NaN/Inf in input sequence")

    dx = x - x.min()
    dy = y - y.min()
    r = np.hypot(dx, dy)
    theta = np.degrees(np.arctan2(dy, dx))
    n_sec = cfg.n_sectors
    sector = np.minimum((theta / cfg.angular_ruler_deg).astype(np.int64), n_sec - 1)

    r_max = r.max()
    if cfg.radial_mode == "normalized":
        n_ring = cfg.radial_rings
        if r_max > 0:
            ring = np.minimum((r * (n_ring / r_max)).astype(np.int64), n_ring - 1)
        else:
            ring = np.zeros(r.size, dtype=np.int64)
    else:
        n_ring = max(1, math.ceil(r_max / cfg.radial_ruler))
        ring = np.minimum((r / cfg.radial_ruler).astype(np.int64), n_ring - 1)

    # The angle is undefined at the origin; pin such points to ring 0, sector 0.
    origin = r == 0
    if origin.any():
        ring[origin] = 0
        sector[origin] = 0
    return ring, sector, n_ring


def encode_states(x, y, cfg: PartitionConfig = DEFAULT_PARTITION) -> np.ndarray:
    """Encode a pair of sequences as cross-plot states.

    Returns an (N, 2) integer array whose columns are the ring and sector
    index of each point.
    """
    ring, sector, _ = _rings_and_sectors(x, y, cfg)
    return np.column_stack([ring, sector])


def _transition_counts(x, y, cfg: PartitionConfig) -> np.ndarray:
    """Sorted positive counts of consecutive state transitions."""
    ring, sector, n_ring = _rings_and_sectors(x, y, cfg)
    code = ring * cfg.n_sectors + sector
    n_states = n_ring * cfg.n_sectors
    trans = code[:-1] * n_states + code[1:]
    counts = np.bincount(trans)
    counts = counts[counts > 0]
    # Sorting fixes the summation order, which keeps the entropy bit-exact
    # under state relabelings (the swap x<->y mirrors sectors bijectively).
    counts.sort()
    return counts


def transition_distribution(states: np.ndarray) -> dict:
    """Empirical distribution of consecutive state transitions.

    Parameters
    ----------
    states : (N, 2) integer array
        Output of :func:`encode_states`.

    Returns
    -------
    dict
        Maps ordered pairs ((ring_a, sector_a), (ring_b, sector_b)) to the
        transition probability count / (N - 1); self-transitions included.
    """
    states = np.asarray(states)
    if states.ndim != 2 or states.shape[1] != 2:
        raise ValueError(f"expected an (N, 2) state array, got shape {states.shape}")
    n = states.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 states for a transition, got {n}")
    dist: dict = {}
    for a, b in zip(map(tuple, states[:-1]), map(tuple, states[1:])):
        key = (a, b)
        dist[key] = dist.get(key, 0) + 1
    total = n - 1
    return {k: v / total for k, v in dist.items()}


def cpte(x, y, cfg: PartitionConfig = DEFAULT_PARTITION) -> float:
    """Cross-plot transition entropy of two equal-length sequences, in bits.

    Shannon entropy (base 2) of the consecutive-state transition
    distribution; bounded by [0, log2(N - 1)] for inputs of length N and
    symmetric in its arguments.
    """
    x = np.asarray(x, dtype=np.float64)
    counts = _transition_counts(x, np.asarray(y, dtype=np.float64), cfg)
    p = counts / (x.size - 1)
    return float(-(p * np.log2(p)).sum())


@dataclass
class SyncMatrix:
    """Per-epoch synchronization matrix of min-max-normalized CPTE values.

    Symmetric with a zero diagonal; off-diagonal values lie in [0, 1] with
    the epoch minimum at 0 and maximum at 1 unless the epoch is degenerate
    (all pairwise CPTE values equal), in which case all values are 0 and
    ``degenerate`` is set.
    """

    values: np.ndarray
    subject_id: str
    group: str
    band: str
    epoch_index: int
    channel_names: list[str]
    degenerate: bool = False

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]


def epoch_matrix(epoch: Epoch, cfg: PartitionConfig = DEFAULT_PARTITION) -> SyncMatrix:
    """Compute the normalized CPTE matrix of one epoch.

    Raw CPTE is computed for each of the n(n-1)/2 channel pairs, mirrored to
    the lower triangle, then min-max normalized over the off-diagonal values;
    the diagonal stays 0.
    """
    samples = np.asarray(epoch.samples, dtype=np.float64)
    n_ch, n = samples.shape
    if n_ch < 2:
        raise ValueError(f"epoch needs >= 2 channels, got {n_ch}")

    n_pairs = n_ch * (n_ch - 1) // 2
    vals = np.empty(n_pairs)
    idx = 0
    for i in range(n_ch):
        for j in range(i + 1, n_ch):
            counts = _transition_counts(samples[i], samples[j], cfg)
            p = counts / (n - 1)
            vals[idx] = -(p * np.log2(p)).sum()
            idx += 1

    lo = vals.min()
    hi = vals.max()
    degenerate = hi == lo
    norm = np.zeros_like(vals) if degenerate else (vals - lo) / (hi - lo)

    matrix = np.zeros((n_ch, n_ch))
    iu = np.triu_indices(n_ch, 1)
    matrix[iu] = norm
    matrix = matrix + matrix.T
    names = list(epoch.channel_names) if epoch.channel_names else [
        f"ch{k:02d}" for k in range(n_ch)
    ]
    return SyncMatrix(
        values=matrix,
        subject_id=epoch.subject_id,
        group=epoch.group,
        band=epoch.band,
        epoch_index=epoch.epoch_index,
        channel_names=names,
        degenerate=degenerate,
    )
