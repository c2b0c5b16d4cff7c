"""Absolute RCS calibration against a PEC sphere reference."""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateReferenceError, DomainError, FormatError
from .mie import ScatteringRegion, SphereSpec, classify_region, sphere_rcs_exact
from .sweeps import same_grid
from .units import to_dbsm


class RegionWarning(UserWarning):
    """The calibration sphere is not in the optical region at some frequencies."""


@dataclass
class CalibrationReference:
    """Per-frequency factor C(f) such that sigma(f) = C(f) |S(f)|^2."""

    factor: np.ndarray
    sphere: SphereSpec
    freqs: np.ndarray
    regions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        self.factor = np.asarray(self.factor, dtype=float)
        self.freqs = np.asarray(self.freqs, dtype=float)
        if self.factor.shape != self.freqs.shape:
            raise FormatError("calibration factor and frequency grid lengths differ")
        if not np.all(np.isfinite(self.factor)) or np.any(self.factor <= 0):
            raise DegenerateReferenceError("calibration factors must be positive and finite")

    @property
    def region_warning(self):
        return any(r != ScatteringRegion.OPTICAL for r in self.regions)


@dataclass
class RcsPattern:
    """Calibrated RCS per azimuth angle (degrees, m^2)."""

    angles: np.ndarray
    rcs: np.ndarray
    freq_label: str = ""

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.rcs = np.asarray(self.rcs, dtype=float)
        if self.angles.shape != self.rcs.shape:
            raise FormatError("pattern angles and rcs lengths differ")
        if np.any(self.rcs < 0):
            raise DomainError("pattern rcs must be non-negative")
        if np.any(self.angles < 0) or np.any(self.angles >= 360):
            raise DomainError("pattern angles must lie in [0, 360)")
        if np.any(np.diff(self.angles) <= 0):
            raise DomainError("pattern angles must be strictly increasing")

    @property
    def rcs_dbsm(self):
        return to_dbsm(self.rcs)


def build_calibration(sphere_sweep_gated, sphere):
    """C(f) = sigma_exact(f) / |S_sphere(f)|^2 from a processed sphere record.

    Emits a :class:`RegionWarning` when the sphere leaves the optical region
    somewhere on the grid; the reference then has ``region_warning`` set.
    """
    freqs = sphere_sweep_gated.freqs
    power = np.abs(sphere_sweep_gated.samples) ** 2
    if np.any(power == 0):
        raise DegenerateReferenceError("sphere sweep has zero magnitude at some frequency")
    regions = tuple(classify_region(sphere, f) for f in freqs)
    ref = CalibrationReference(sphere_rcs_exact(sphere, freqs) / power, sphere, freqs, regions)
    if ref.region_warning:
        warnings.warn(
            f"calibration sphere (a={sphere.radius} m) is outside the optical region on part of the band",
            RegionWarning, stacklevel=2)
    return ref


def apply_calibration(target_sweep_gated, cal):
    """Per-frequency RCS sigma(f) = C(f) |S(f)|^2 in m^2."""
    if not same_grid(target_sweep_gated.freqs, cal.freqs):
        raise FormatError("target sweep grid does not match the calibration grid")
    return cal.factor * np.abs(target_sweep_gated.samples) ** 2


def band_mask(freqs, band):
    f1, f2 = band
    if f2 < f1:
        raise DomainError("band must satisfy f1 <= f2")
    tol = 1e-9 * max(abs(f2), 1.0)
    if f1 < freqs[0] - tol or f2 > freqs[-1] + tol:
        raise DomainError(f"band {band!r} lies outside the sweep grid")
    mask = (freqs >= f1 - tol) & (freqs <= f2 + tol)
    if not mask.any():
        raise DomainError(f"band {band!r} contains no grid frequencies")
    return mask


def _band_label(band):
    f1, f2 = band
    if f1 == f2:
        return f"{f1 / 1e9:g} GHz"
    return f"{f1 / 1e9:g}-{f2 / 1e9:g} GHz"


def pattern_from_scan(scan_gated, cal, band):
    """Band-averaged (linear m^2) calibrated RCS for every angle of a scan.

    Angles are wrapped into [0, 360) and sorted.
    """
    if not same_grid(scan_gated.freqs, cal.freqs):
        raise FormatError("scan grid does not match the calibration grid")
    mask = band_mask(cal.freqs, band)
    sigma = cal.factor[mask] * np.abs(scan_gated.samples[:, mask]) ** 2
    values = sigma.mean(axis=1)
    angles = np.mod(scan_gated.angles, 360.0)
    order = np.argsort(angles, kind="stable")
    return RcsPattern(angles[order], values[order], _band_label(band))


def average_rcs(pattern):
    """Mean over angles in linear m^2 and the same mean in dBsm."""
    if pattern.rcs.size == 0:
        raise DomainError("empty pattern")
    mean = float(np.mean(pattern.rcs))
    return mean, to_dbsm(mean, floor=False)
