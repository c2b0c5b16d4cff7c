"""Containers for swept-frequency measurement data."""
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError

GRID_RTOL = 1e-9


def check_uniform_grid(freqs):
    """Raise ``FormatError`` unless ``freqs`` is strictly increasing and uniform."""
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or freqs.size < 2:
        raise FormatError("frequency grid needs at least two points")
    steps = np.diff(freqs)
    if np.any(steps <= 0):
        raise FormatError("frequency grid must be strictly increasing")
    df = (freqs[-1] - freqs[0]) / (freqs.size - 1)
    if np.max(np.abs(steps - df)) > GRID_RTOL * max(abs(freqs[-1]), df):
        raise FormatError("frequency grid is not uniform")
    return df


def same_grid(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a.shape == b.shape and np.allclose(a, b, rtol=GRID_RTOL, atol=0.0)


@dataclass
class FrequencySweep:
    """Complex transfer function sampled on a uniform frequency grid (one look angle)."""

    freqs: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != self.freqs.shape:
            raise FormatError(
                f"sample count {self.samples.shape} does not match grid {self.freqs.shape}")
        check_uniform_grid(self.freqs)

    @property
    def df(self):
        return (self.freqs[-1] - self.freqs[0]) / (self.freqs.size - 1)

    def __len__(self):
        return self.freqs.size


@dataclass
class AzimuthScan:
    """Sweeps for a sequence of azimuth angles on one shared frequency grid.

    ``samples`` has shape ``(n_angles, n_freqs)``.
    """

    angles: np.ndarray
    freqs: np.ndarray
    samples: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != (self.angles.size, self.freqs.size):
            raise FormatError(
                f"samples shape {self.samples.shape} != ({self.angles.size}, {self.freqs.size})")
        check_uniform_grid(self.freqs)

    def __len__(self):
        return self.angles.size

    def sweep(self, i):
        return FrequencySweep(self.freqs, self.samples[i])

    @property
    def sweeps(self):
        return [self.sweep(i) for i in range(len(self))]

    @classmethod
    def from_sweeps(cls, angles, sweeps, metadata=None):
        if not sweeps:
            raise FormatError("scan needs at least one sweep")
        freqs = sweeps[0].freqs
        for s in sweeps[1:]:
            if not same_grid(s.freqs, freqs):
                raise FormatError("all sweeps in a scan must share a frequency grid")
        return cls(angles, freqs, np.stack([s.samples for s in sweeps]), dict(metadata or {}))
