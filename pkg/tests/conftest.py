import numpy as np
import pytest

from cptenet.crossplot import SyncMatrix
from cptenet.io import Recording


@pytest.fixture
def make_recording():
    """Factory for small seeded recordings."""

    def factory(n_ch=4, n_samp=5000, seed=0, group="A", subject_id="s01",
                rate=500.0):
        rng = np.random.default_rng(seed)
        return Recording(
            subject_id=subject_id,
            group=group,
            sampling_rate_hz=rate,
            channel_names=[f"ch{i:02d}" for i in range(n_ch)],
            samples=rng.standard_normal((n_ch, n_samp)).astype(np.float32),
        )

    return factory


def make_sync_matrix(values, subject_id="s01", group="A", band="all",
                     epoch_index=0, degenerate=False):
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    return SyncMatrix(
        values=values,
        subject_id=subject_id,
        group=group,
        band=band,
        epoch_index=epoch_index,
        channel_names=[f"ch{i:02d}" for i in range(n)],
        degenerate=degenerate,
    )


def random_sync_values(rng, n=19):
    """A valid normalized synchronization matrix: symmetric, zero diagonal,
    off-diagonal min 0 and max 1."""
    iu = np.triu_indices(n, 1)
    vals = rng.random(iu[0].size)
    vals = (vals - vals.min()) / (vals.max() - vals.min())
    m = np.zeros((n, n))
    m[iu] = vals
    return m + m.T
