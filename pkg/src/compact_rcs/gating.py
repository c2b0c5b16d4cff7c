"""Software range gating and background subtraction.

Sweeps go to the time domain with a zero-padded inverse DFT (1/N on the
inverse), a Tukey window is applied over the target's delay span, and a
forward DFT truncated to the original length brings the data back to the
frequency grid. All transforms act on the last axis, so the ``*_scan``
helpers process every azimuth at once.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError
from .sweeps import AzimuthScan, FrequencySweep, check_uniform_grid, same_grid

DEFAULT_ZERO_PAD = 8
DEFAULT_ALPHA = 0.5
# tolerance, in units of the time step, when deciding if a sample is inside a gate
_EDGE_TOL = 1e-9


@dataclass
class TimeProfile:
    """Complex range profile on the grid ``times = m * dt``.

    ``freq_start``, ``df`` and ``n_freqs`` describe the sweep the profile came
    from so the frequency grid can be rebuilt.
    """

    times: np.ndarray
    samples: np.ndarray
    freq_start: float
    df: float
    n_freqs: int
    zero_pad_factor: int

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape[-1] != self.times.size:
            raise FormatError("profile samples and time grid lengths differ")
        if self.times.size != self.n_freqs * self.zero_pad_factor:
            raise FormatError("profile length inconsistent with its sweep metadata")

    @property
    def dt(self):
        return self.times[1] - self.times[0] if self.times.size > 1 else 1.0 / (self.n_freqs * self.df)

    @property
    def max_time(self):
        return float(self.times[-1])


def tukey_window(length, alpha=DEFAULT_ALPHA):
    """Symmetric tapered-cosine window of ``length`` points.

    ``alpha`` is the fraction of the window inside the two cosine tapers:
    0 gives a rectangle, 1 a Hann window with zero end points.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    length = int(length)
    if length < 1:
        raise DomainError("window length must be >= 1")
    if length == 1 or alpha == 0.0:
        return np.ones(length)
    n = np.arange(length)
    edge = alpha * (length - 1) / 2.0
    w = np.ones(length)
    left = n < edge
    right = n > (length - 1) - edge
    w[left] = 0.5 * (1.0 + np.cos(np.pi * (n[left] / edge - 1.0)))
    w[right] = 0.5 * (1.0 + np.cos(np.pi * ((n[right] - (length - 1)) / edge + 1.0)))
    return w


def _ifft_padded(samples, zero_pad_factor):
    n = samples.shape[-1]
    return np.fft.ifft(samples, n=n * zero_pad_factor, axis=-1)


def _time_grid(n_freqs, df, zero_pad_factor):
    n_total = n_freqs * zero_pad_factor
    return np.arange(n_total) / (n_total * df)


def to_time_domain(sweep, zero_pad_factor=DEFAULT_ZERO_PAD, taper_alpha=None):
    """Zero-padded inverse DFT of a sweep.

    ``taper_alpha`` applies an optional Tukey taper across the band before the
    transform; it is not undone on the way back, so target and calibration
    data must be processed alike.
    """
    if int(zero_pad_factor) != zero_pad_factor or zero_pad_factor < 1:
        raise DomainError("zero_pad_factor must be an integer >= 1")
    zero_pad_factor = int(zero_pad_factor)
    df = check_uniform_grid(sweep.freqs)
    samples = sweep.samples
    if taper_alpha is not None:
        samples = samples * tukey_window(samples.shape[-1], taper_alpha)
    n = sweep.freqs.size
    return TimeProfile(
        times=_time_grid(n, df, zero_pad_factor),
        samples=_ifft_padded(samples, zero_pad_factor),
        freq_start=float(sweep.freqs[0]),
        df=float(df),
        n_freqs=n,
        zero_pad_factor=zero_pad_factor,
    )


def gate_weights(times, gate_start, gate_stop, alpha):
    """Tukey weights over the samples of ``times`` inside [gate_start, gate_stop], zero elsewhere."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    t_max = float(times[-1])
    dt = float(times[1] - times[0]) if times.size > 1 else 1.0
    tol = _EDGE_TOL * dt
    if not (0.0 <= gate_start < gate_stop <= t_max + tol):
        raise DomainError(
            f"gate [{gate_start!r}, {gate_stop!r}] must satisfy 0 <= start < stop <= {t_max!r}")
    inside = np.flatnonzero((times >= gate_start - tol) & (times <= gate_stop + tol))
    w = np.zeros(times.size)
    if inside.size:
        w[inside] = tukey_window(inside.size, alpha)
    return w


def range_gate(profile, gate_start, gate_stop, alpha=DEFAULT_ALPHA):
    """Multiply the profile by a Tukey gate spanning [gate_start, gate_stop] seconds."""
    w = gate_weights(profile.times, gate_start, gate_stop, alpha)
    return TimeProfile(profile.times, profile.samples * w, profile.freq_start, profile.df,
                       profile.n_freqs, profile.zero_pad_factor)


def to_frequency_domain(profile, original_length=None):
    """Forward DFT truncated to the original sweep length."""
    if original_length is None:
        original_length = profile.n_freqs
    if original_length > profile.samples.shape[-1]:
        raise FormatError("original_length exceeds profile length")
    if original_length != profile.n_freqs:
        raise FormatError(
            f"original_length {original_length} does not match profile metadata ({profile.n_freqs})")
    samples = np.fft.fft(profile.samples, axis=-1)[..., :original_length]
    freqs = profile.freq_start + profile.df * np.arange(original_length)
    return FrequencySweep(freqs, samples)


def background_subtract(sweep, background):
    """Complex, pointwise sweep - background."""
    if not same_grid(sweep.freqs, background.freqs):
        raise FormatError("sweep and background frequency grids differ")
    return FrequencySweep(sweep.freqs, sweep.samples - background.samples)


def peak_time(profile):
    """Time of the strongest sample in a 1-D profile."""
    return float(profile.times[int(np.argmax(np.abs(profile.samples)))])


def gate_sweep(sweep, gate_start, gate_stop, alpha=DEFAULT_ALPHA,
               zero_pad_factor=DEFAULT_ZERO_PAD, taper_alpha=None):
    """Frequency -> time -> gate -> frequency for one sweep."""
    profile = to_time_domain(sweep, zero_pad_factor, taper_alpha)
    return to_frequency_domain(range_gate(profile, gate_start, gate_stop, alpha), sweep.freqs.size)


def background_subtract_scan(scan, background):
    """Subtract a background scan angle-for-angle, or one background sweep from every angle.

    A single-angle scan (e.g. the calibration sphere) against a multi-angle
    background uses the angle-averaged background, since the chamber itself
    does not rotate.
    """
    if isinstance(background, FrequencySweep):
        if not same_grid(scan.freqs, background.freqs):
            raise FormatError("scan and background frequency grids differ")
        bg = background.samples[np.newaxis, :]
    else:
        if not same_grid(scan.freqs, background.freqs):
            raise FormatError("scan and background frequency grids differ")
        if background.angles.size == 1:
            bg = background.samples
        elif scan.angles.size == 1:
            bg = background.samples.mean(axis=0, keepdims=True)
        elif background.angles.shape == scan.angles.shape and np.allclose(background.angles, scan.angles):
            bg = background.samples
        else:
            raise FormatError("background angles do not match scan angles")
    return AzimuthScan(scan.angles, scan.freqs, scan.samples - bg, dict(scan.metadata))


def scan_to_time_domain(scan, zero_pad_factor=DEFAULT_ZERO_PAD, taper_alpha=None):
    """Profiles for every angle of a scan; ``samples`` has shape (n_angles, n_times)."""
    if int(zero_pad_factor) != zero_pad_factor or zero_pad_factor < 1:
        raise DomainError("zero_pad_factor must be an integer >= 1")
    zero_pad_factor = int(zero_pad_factor)
    df = check_uniform_grid(scan.freqs)
    n = scan.freqs.size
    samples = scan.samples
    if taper_alpha is not None:
        samples = samples * tukey_window(n, taper_alpha)
    return TimeProfile(_time_grid(n, df, zero_pad_factor), _ifft_padded(samples, zero_pad_factor),
                       float(scan.freqs[0]), float(df), n, zero_pad_factor)


def scan_from_time_domain(profile, scan):
    """Inverse of :func:`scan_to_time_domain`, reusing the angles and grid of ``scan``."""
    if profile.n_freqs != scan.freqs.size:
        raise FormatError("profile metadata does not match the scan grid")
    samples = np.fft.fft(profile.samples, axis=-1)[..., :profile.n_freqs]
    return AzimuthScan(scan.angles, scan.freqs, samples, dict(scan.metadata))


def profile_energy(profile):
    return float(np.sum(np.abs(profile.samples) ** 2))


def gate_scan(scan, gate_start, gate_stop, alpha=DEFAULT_ALPHA,
              zero_pad_factor=DEFAULT_ZERO_PAD, taper_alpha=None):
    """Gate every sweep of a scan; returns the gated scan and the kept-energy ratio.

    The ratio is gated-profile energy over ungated-profile energy, summed over angles.
    """
    profile = scan_to_time_domain(scan, zero_pad_factor, taper_alpha)
    gated = range_gate(profile, gate_start, gate_stop, alpha)
    total = profile_energy(profile)
    ratio = profile_energy(gated) / total if total > 0 else 0.0
    return scan_from_time_domain(gated, scan), ratio
