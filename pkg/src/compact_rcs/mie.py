"""Monostatic RCS of a perfectly conducting sphere.

The exact value comes from the Mie series written with Riccati-Hankel
functions of the second kind; the Rayleigh and optical approximations are
provided alongside for region checks and quick estimates.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .units import wavelength, wavenumber

# extra terms beyond the Wiscombe cutoff; keeps truncation error below 1e-12
GUARD_TERMS = 10


class ScatteringRegion(str, enum.Enum):
    RAYLEIGH = "Rayleigh"
    MIE = "Mie"
    OPTICAL = "Optical"


@dataclass(frozen=True)
class SphereSpec:
    """PEC sphere of the given radius in meters."""

    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"sphere radius must be positive and finite, got {self.radius!r}")


def _check_freq(freq):
    f = np.asarray(freq, dtype=float)
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise DomainError("frequency must be positive and finite")
    return f


def riccati_hankel2_sequence(x, n_max):
    """Riccati-Hankel functions of the second kind for orders 1..n_max.

    Returns ``(h, dh)``: complex arrays of length ``n_max`` where ``h[n-1]``
    is x*h_n^(2)(x) and ``dh[n-1]`` its derivative with respect to x.
    """
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"x must be positive and finite, got {x!r}")
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    h, dh = kernels.riccati_hankel2(float(x), int(n_max))
    return h[1:], dh[1:]


def wiscombe_terms(ka):
    """Wiscombe series cutoff ceil(ka + 4 ka^(1/3) + 2)."""
    ka = np.asarray(ka, dtype=float)
    return np.ceil(ka + 4.0 * np.cbrt(ka) + 2.0).astype(np.int64)


def series_terms(ka):
    """Number of terms actually summed: the Wiscombe cutoff plus a guard band."""
    return wiscombe_terms(ka) + GUARD_TERMS


def backscatter_amplitude(sphere, freq, n_terms=None):
    """Complex backscatter amplitude with |A|^2 equal to the exact RCS.

    The phase is referenced to the sphere centre, so the specular return
    leads the centre by 2ka.
    """
    f = _check_freq(freq)
    ka = wavenumber(f) * sphere.radius
    nt = series_terms(ka) if n_terms is None else np.broadcast_to(np.asarray(n_terms, dtype=np.int64), ka.shape)
    s = kernels.mie_backscatter_sums(np.atleast_1d(ka), np.atleast_1d(nt))
    amp = wavelength(np.atleast_1d(f)) / math.sqrt(4.0 * math.pi) * s
    return complex(amp[0]) if f.ndim == 0 else amp.reshape(f.shape)


def sphere_rcs_exact(sphere, freq, n_terms=None):
    """Exact monostatic RCS in m^2 from the Mie series.

    ``freq`` may be a scalar or an array. ``n_terms`` overrides the default
    truncation (Wiscombe cutoff plus ``GUARD_TERMS``).
    """
    amp = backscatter_amplitude(sphere, freq, n_terms)
    return np.abs(amp) ** 2 if isinstance(amp, np.ndarray) else abs(amp) ** 2


def sphere_rcs_rayleigh(sphere, freq):
    """Small-sphere limit 9 lambda^2 / (4 pi) * (ka)^6, valid only for ka << 1."""
    f = _check_freq(freq)
    lam = wavelength(f)
    ka = wavenumber(f) * sphere.radius
    out = 9.0 * lam**2 / (4.0 * np.pi) * ka**6
    return float(out) if out.ndim == 0 else out


def sphere_rcs_optical(sphere):
    """Geometric-optics plateau pi a^2."""
    return math.pi * sphere.radius**2


def classify_region(sphere, freq):
    f = float(_check_freq(freq))
    lam = float(wavelength(f))
    if 2.0 * math.pi * sphere.radius / lam <= 0.5:
        return ScatteringRegion.RAYLEIGH
    if sphere.radius > 2.0 * lam:
        return ScatteringRegion.OPTICAL
    return ScatteringRegion.MIE


def sphere_rcs(sphere, freq, model="exact"):
    """Dispatch on ``model`` in {"exact", "rayleigh", "optical"}."""
    if model == "exact":
        return sphere_rcs_exact(sphere, freq)
    if model == "rayleigh":
        return sphere_rcs_rayleigh(sphere, freq)
    if model == "optical":
        f = _check_freq(freq)
        return np.full(f.shape, sphere_rcs_optical(sphere)) if f.ndim else sphere_rcs_optical(sphere)
    raise DomainError(f"unknown sphere model {model!r}")
