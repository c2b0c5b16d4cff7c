"""Physical constants and unit conversions."""
import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
FOOT = 0.3048  # m
INCH = 0.0254  # m

# dBsm floor used whenever a log conversion must stay finite
DBSM_FLOOR = -60.0
RCS_FLOOR = 1e-6  # m^2, 10**(DBSM_FLOOR / 10)


def wavelength(freq):
    return SPEED_OF_LIGHT / np.asarray(freq, dtype=float)


def wavenumber(freq):
    return 2.0 * np.pi * np.asarray(freq, dtype=float) / SPEED_OF_LIGHT


def to_dbsm(rcs_m2, floor=True):
    """10*log10(sigma); clamps at ``RCS_FLOOR`` unless ``floor`` is False."""
    rcs = np.asarray(rcs_m2, dtype=float)
    if floor:
        rcs = np.maximum(rcs, RCS_FLOOR)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(rcs)
    return float(out) if out.ndim == 0 else out


def from_dbsm(dbsm):
    out = 10.0 ** (np.asarray(dbsm, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def range_to_delay(range_m):
    """Two-way delay for a monostatic range: tau = 2R/c."""
    return 2.0 * np.asarray(range_m, dtype=float) / SPEED_OF_LIGHT


def delay_to_range(delay_s):
    return np.asarray(delay_s, dtype=float) * SPEED_OF_LIGHT / 2.0
