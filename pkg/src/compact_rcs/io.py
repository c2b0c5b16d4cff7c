"""CSV and JSON interchange formats.

Sweep CSV      ``angle_deg,freq_hz,re,im``  rows sorted by (angle, freq)
Pattern CSV    ``angle_deg,rcs_m2,rcs_dbsm``
Plot-data CSV  ``angle_deg,rcs_dbsm``       dBsm clamped at -60
Sphere CSV     ``freq_hz,rcs_m2,rcs_dbsm,region``

Floats are written with ``repr`` so files round-trip exactly and identical
inputs give byte-identical outputs.
"""
import csv
import json
from pathlib import Path

import numpy as np

from .calibration import RcsPattern
from .errors import FormatError
from .sweeps import AzimuthScan, FrequencySweep
from .units import to_dbsm

SWEEP_HEADER = ["angle_deg", "freq_hz", "re", "im"]
PATTERN_HEADER = ["angle_deg", "rcs_m2", "rcs_dbsm"]
PLOT_HEADER = ["angle_deg", "rcs_dbsm"]
SPHERE_HEADER = ["freq_hz", "rcs_m2", "rcs_dbsm", "region"]


def fmt(v):
    return repr(float(v))


def _write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if [h.strip() for h in got] != header:
            raise FormatError(f"{path}: expected header {','.join(header)}, got {','.join(got)}")
        rows = [r for r in reader if r]
    for i, r in enumerate(rows, start=2):
        if len(r) != len(header):
            raise FormatError(f"{path}:{i}: expected {len(header)} fields, got {len(r)}")
    return rows


def _floats(rows, path):
    try:
        return np.array([[float(v) for v in r] for r in rows], dtype=float).reshape(len(rows), -1)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_scan_csv(path, scan):
    order = np.argsort(scan.angles, kind="stable")
    rows = []
    for i in order:
        a = fmt(scan.angles[i])
        for f, s in zip(scan.freqs, scan.samples[i]):
            rows.append([a, fmt(f), fmt(s.real), fmt(s.imag)])
    _write_rows(path, SWEEP_HEADER, rows)


def write_sweep_csv(path, sweep, angle=0.0):
    write_scan_csv(path, AzimuthScan([angle], sweep.freqs, sweep.samples[np.newaxis, :]))


def read_scan_csv(path):
    rows = _read_rows(path, SWEEP_HEADER)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    data = _floats(rows, path)
    angles, inverse = np.unique(data[:, 0], return_inverse=True)
    n_freq = data.shape[0] // angles.size
    if n_freq * angles.size != data.shape[0]:
        raise FormatError(f"{path}: angles do not all have the same number of frequencies")
    freqs = None
    samples = np.empty((angles.size, n_freq), dtype=np.complex128)
    for j in range(angles.size):
        block = data[inverse == j]
        if block.shape[0] != n_freq:
            raise FormatError(f"{path}: angle {angles[j]} has {block.shape[0]} rows, expected {n_freq}")
        block = block[np.argsort(block[:, 1], kind="stable")]
        if freqs is None:
            freqs = block[:, 1]
        elif not np.array_equal(block[:, 1], freqs):
            raise FormatError(f"{path}: angle {angles[j]} uses a different frequency grid")
        samples[j] = block[:, 2] + 1j * block[:, 3]
    return AzimuthScan(angles, freqs, samples)


def read_sweep_csv(path):
    """Read a single-sweep file; several angles are averaged coherently."""
    scan = read_scan_csv(path)
    return FrequencySweep(scan.freqs, scan.samples.mean(axis=0))


def write_pattern_csv(path, pattern):
    db = to_dbsm(pattern.rcs)
    _write_rows(path, PATTERN_HEADER,
                [[fmt(a), fmt(s), fmt(d)] for a, s, d in zip(pattern.angles, pattern.rcs, np.atleast_1d(db))])


def read_pattern_csv(path):
    rows = _read_rows(path, PATTERN_HEADER)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    data = _floats(rows, path)
    return RcsPattern(data[:, 0], data[:, 1])


def emit_plot_data(pattern, path):
    """Write ``angle_deg,rcs_dbsm`` rows in ascending angle, clamping at -60 dBsm."""
    order = np.argsort(pattern.angles, kind="stable")
    db = np.atleast_1d(to_dbsm(pattern.rcs))
    _write_rows(path, PLOT_HEADER, [[fmt(pattern.angles[i]), fmt(db[i])] for i in order])


def read_plot_data(path):
    data = _floats(_read_rows(path, PLOT_HEADER), path)
    return data[:, 0], data[:, 1]


def write_sphere_csv(path_or_file, freqs, rcs, regions):
    rows = [[fmt(f), fmt(s), fmt(to_dbsm(s, floor=False)), str(r.value if hasattr(r, "value") else r)]
            for f, s, r in zip(freqs, rcs, regions)]
    if hasattr(path_or_file, "write"):
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(SPHERE_HEADER)
        w.writerows(rows)
    else:
        _write_rows(path_or_file, SPHERE_HEADER, rows)


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(obj))


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
