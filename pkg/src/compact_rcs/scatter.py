"""Point-scatterer target model and synthetic compact-range sweeps.

A target is a set of isotropic scattering centers in the turntable plane.
Its monostatic return at wavenumber k and look angle phi is the coherent sum
``sum_i sqrt(sigma_i) exp(-j 2 k R_i)`` with R_i measured along the
(collimated) incidence axis. The synthesized chamber record adds leakage,
antenna coupling, fixed background scatterers, a complex system gain and
seeded receiver noise.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError
from .mie import SphereSpec, backscatter_amplitude
from .sweeps import AzimuthScan, FrequencySweep
from .units import FOOT, wavenumber

# noise stream tags, so target, background and sphere records never share noise
STREAM_TARGET = 0
STREAM_BACKGROUND = 1
STREAM_SPHERE = 2


@dataclass(frozen=True)
class ScatteringCenter:
    rcs: float
    position: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not (self.rcs >= 0 and math.isfinite(self.rcs)):
            raise DomainError(f"scattering center rcs must be >= 0, got {self.rcs!r}")
        x, y = self.position
        object.__setattr__(self, "position", (float(x), float(y)))


@dataclass(frozen=True)
class TargetModel:
    centers: tuple
    name: str = "target"

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(self.centers))
        if not self.centers:
            raise DomainError("target model needs at least one scattering center")

    @property
    def amplitudes(self):
        return np.sqrt([c.rcs for c in self.centers])

    @property
    def positions(self):
        return np.array([c.position for c in self.centers], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class ScanGeometry:
    """Turntable geometry. Azimuths are in degrees; ``azimuth_stop`` is inclusive."""

    antenna_range: float = 6 * FOOT
    azimuth_start: float = 0.0
    azimuth_stop: float = 358.0
    azimuth_step: float = 2.0

    def __post_init__(self):
        if not self.azimuth_step > 0:
            raise DomainError("azimuth_step must be positive")
        if self.azimuth_stop < self.azimuth_start:
            raise DomainError("azimuth_stop must not precede azimuth_start")
        steps = (self.azimuth_stop - self.azimuth_start) / self.azimuth_step
        if abs(steps - round(steps)) > 1e-9:
            raise DomainError("azimuth span must be an integer multiple of azimuth_step")

    @property
    def angles(self):
        n = int(round((self.azimuth_stop - self.azimuth_start) / self.azimuth_step)) + 1
        return self.azimuth_start + self.azimuth_step * np.arange(n)


@dataclass(frozen=True)
class SweepConfig:
    freq_start: float
    freq_stop: float
    n_points: int

    def __post_init__(self):
        if not (self.freq_stop > self.freq_start > 0):
            raise DomainError("need freq_stop > freq_start > 0")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise DomainError("n_points must be an integer >= 2")

    @property
    def freqs(self):
        return np.linspace(self.freq_start, self.freq_stop, int(self.n_points))


@dataclass(frozen=True)
class ChamberArtifacts:
    """Chamber and receiver impairments.

    ``leakage`` and ``coupling`` are ``(amplitude, delay_seconds)`` pairs;
    ``gain`` is a frequency-flat complex system gain applied to everything
    except the receiver noise.
    """

    leakage: tuple = (0.0, 0.0)
    coupling: tuple = (0.0, 0.0)
    background_centers: tuple = ()
    noise_std: float = 0.0
    seed: int = 0
    gain: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "background_centers", tuple(self.background_centers))
        for name in ("leakage", "coupling"):
            amp, delay = getattr(self, name)
            if amp < 0 or delay < 0:
                raise DomainError(f"{name} amplitude and delay must be >= 0")
        if self.noise_std < 0:
            raise DomainError("noise_std must be >= 0")


def rotated_ranges(positions, look_angle, antenna_range):
    """Plane-wave ranges R_i = antenna_range - x_i' after rotating by ``look_angle`` degrees.

    ``look_angle`` may be an array; the result then has shape (n_angles, n_centers).
    """
    phi = np.deg2rad(np.asarray(look_angle, dtype=float))
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    x_rot = np.multiply.outer(np.cos(phi), positions[:, 0]) - np.multiply.outer(np.sin(phi), positions[:, 1])
    return antenna_range - x_rot


def coherent_rcs(target, freq, look_angle, geometry):
    """Coherent RCS |sum sqrt(sigma_i) exp(-j 2 k R_i)|^2 in m^2.

    ``freq`` may be a scalar or 1-D array of frequencies.
    """
    if not target.centers:
        raise DomainError("empty target")
    f = np.asarray(freq, dtype=float)
    if np.any(f <= 0):
        raise DomainError("frequency must be positive")
    ranges = rotated_ranges(target.positions, look_angle, geometry.antenna_range)
    field_ = kernels.coherent_field(target.amplitudes, ranges, np.atleast_1d(wavenumber(f)))
    out = np.abs(field_) ** 2
    return float(out[0]) if f.ndim == 0 else out


def _tone(freqs, amp_delay):
    amp, delay = amp_delay
    return amp * np.exp(-2j * np.pi * freqs * delay)


def _noise(artifacts, stream, index, n):
    if artifacts.noise_std == 0:
        return np.zeros(n, dtype=np.complex128)
    rng = np.random.default_rng([int(artifacts.seed), stream, int(index)])
    z = rng.standard_normal((2, n))
    return artifacts.noise_std / math.sqrt(2.0) * (z[0] + 1j * z[1])


def chamber_field(freqs, geometry, artifacts):
    """Leakage + coupling + fixed background scatterers (no gain, no noise)."""
    out = _tone(freqs, artifacts.leakage) + _tone(freqs, artifacts.coupling)
    if artifacts.background_centers:
        amps = np.sqrt([c.rcs for c in artifacts.background_centers])
        pos = np.array([c.position for c in artifacts.background_centers], dtype=float)
        ranges = geometry.antenna_range - pos[:, 0]
        out = out + kernels.coherent_field(amps, ranges, wavenumber(freqs))
    return out


def target_field(target, look_angle, geometry, freqs):
    ranges = rotated_ranges(target.positions, look_angle, geometry.antenna_range)
    return kernels.coherent_field(target.amplitudes, ranges, wavenumber(freqs))


def synth_sweep(target, look_angle, geometry, sweep, artifacts, *, stream=STREAM_TARGET, index=0):
    """One swept-frequency record at ``look_angle``.

    ``target`` may be None for an empty-chamber record. Noise is drawn from a
    generator keyed on ``(artifacts.seed, stream, index)``.
    """
    freqs = sweep.freqs
    clean = chamber_field(freqs, geometry, artifacts)
    if target is not None:
        clean = clean + target_field(target, look_angle, geometry, freqs)
    samples = artifacts.gain * clean + _noise(artifacts, stream, index, freqs.size)
    return FrequencySweep(freqs, samples)


def synth_scan(target, geometry, sweep, artifacts, *, stream=None):
    """One sweep per azimuth of ``geometry``; angle ``i`` uses noise index ``i``."""
    if stream is None:
        stream = STREAM_TARGET if target is not None else STREAM_BACKGROUND
    angles = geometry.angles
    sweeps = [synth_sweep(target, a, geometry, sweep, artifacts, stream=stream, index=i)
              for i, a in enumerate(angles)]
    meta = {"target": target.name if target is not None else None}
    return AzimuthScan.from_sweeps(angles, sweeps, meta)


def synth_background_scan(geometry, sweep, artifacts):
    """The same chamber with the turntable empty."""
    return synth_scan(None, geometry, sweep, artifacts, stream=STREAM_BACKGROUND)


def synth_sphere_sweep(sphere, geometry, sweep, artifacts):
    """Calibration-sphere record with the sphere centred on the turntable axis.

    The sphere's return uses the exact Mie amplitude, so |S|^2 equals the
    exact RCS in an artifact-free, unit-gain chamber.
    """
    freqs = sweep.freqs
    k = wavenumber(freqs)
    sphere_term = backscatter_amplitude(sphere, freqs) * np.exp(-2j * k * geometry.antenna_range)
    clean = chamber_field(freqs, geometry, artifacts) + sphere_term
    samples = artifacts.gain * clean + _noise(artifacts, STREAM_SPHERE, 0, freqs.size)
    return FrequencySweep(freqs, samples)


@dataclass
class Scene:
    """Everything the simulator needs; maps one-to-one onto the scene JSON."""

    target: TargetModel
    geometry: ScanGeometry = field(default_factory=ScanGeometry)
    sweep: SweepConfig = field(default_factory=lambda: SweepConfig(24e9, 26e9, 401))
    artifacts: ChamberArtifacts = field(default_factory=ChamberArtifacts)
    sphere: SphereSpec | None = None


def _center(d):
    if "position" in d:
        pos = d["position"]
    else:
        pos = (d.get("x", 0.0), d.get("y", 0.0))
    return ScatteringCenter(float(d["rcs"]), tuple(pos))


def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    return complex(v)


def scene_from_dict(d, seed=None):
    """Build a :class:`Scene` from parsed scene JSON.

    A top-level ``seed`` (or the ``seed`` argument) overrides ``artifacts.seed``.
    """
    t = d["target"]
    target = TargetModel(tuple(_center(c) for c in t["centers"]), t.get("name", "target"))
    geometry = ScanGeometry(**d.get("geometry", {}))
    sw = d.get("sweep", {"freq_start": 24e9, "freq_stop": 26e9, "n_points": 401})
    sweep = SweepConfig(float(sw["freq_start"]), float(sw["freq_stop"]), int(sw["n_points"]))
    a = dict(d.get("artifacts", {}))
    if seed is None:
        seed = d.get("seed", a.get("seed", 0))
    artifacts = ChamberArtifacts(
        leakage=tuple(_leak(a.get("leakage"))),
        coupling=tuple(_leak(a.get("coupling"))),
        background_centers=tuple(_center(c) for c in a.get("background_centers", [])),
        noise_std=float(a.get("noise_std", 0.0)),
        seed=int(seed),
        gain=_complex(a.get("gain", 1.0)),
    )
    sphere = SphereSpec(float(d["sphere"]["radius"])) if d.get("sphere") else None
    return Scene(target, geometry, sweep, artifacts, sphere)


def _leak(v):
    if v is None:
        return (0.0, 0.0)
    if isinstance(v, dict):
        return (float(v.get("amplitude", 0.0)), float(v.get("delay", 0.0)))
    return (float(v[0]), float(v[1]))
