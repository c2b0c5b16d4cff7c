"""End-to-end processing: subtract -> gate -> calibrate -> pattern -> fit.

A run is driven by a :class:`PipelineConfig` (usually loaded from JSON) and
produces ``pattern.csv``, ``plot_data.csv`` and ``report.json`` in the output
directory. When the config names a ``scene`` instead of measured files, the
scene is simulated first and its CSVs are written next to the outputs.
"""
import logging
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import gating, io
from .calibration import RegionWarning, average_rcs, build_calibration, pattern_from_scan
from .errors import CompactRcsError, DomainError, FormatError, StageError
from .mie import SphereSpec
from .scatter import scene_from_dict, synth_background_scan, synth_scan, synth_sphere_sweep
from .stats import MODELS, RcsSamples, ranking_report, select_model
from .sweeps import FrequencySweep
from .units import INCH, RCS_FLOOR, range_to_delay, to_dbsm

log = logging.getLogger(__name__)

PATTERN_FILE = "pattern.csv"
PLOT_FILE = "plot_data.csv"
REPORT_FILE = "report.json"

ORDER_SUBTRACT_FIRST = "subtract-then-gate"
ORDER_GATE_FIRST = "gate-then-subtract"

_GATE_STAGES = ["to_time_domain", "range_gate", "to_frequency_domain"]
_TAIL_STAGES = ["calibration", "pattern", "average_rcs", "select_model", "write"]


@dataclass
class PipelineConfig:
    scan: str | None = None
    background: str | None = None
    sphere: str | None = None
    scene: str | dict | None = None
    sphere_radius: float = 6 * INCH
    gate_start: float | None = None
    gate_stop: float | None = None
    gate_range: tuple | None = None
    alpha: float = gating.DEFAULT_ALPHA
    zero_pad_factor: int = gating.DEFAULT_ZERO_PAD
    taper_alpha: float | None = None
    band: tuple | None = None
    models: tuple = MODELS
    out_dir: str = "out"
    seed: int | None = None
    order: str = ORDER_SUBTRACT_FIRST
    base_dir: str = field(default=".", repr=False)

    def __post_init__(self):
        if self.order not in (ORDER_SUBTRACT_FIRST, ORDER_GATE_FIRST):
            raise DomainError(f"unknown processing order {self.order!r}")
        if self.scene is None and self.scan is None:
            raise DomainError("config needs either 'scene' or 'scan'")
        if self.scene is not None and any(v is not None for v in (self.scan, self.background, self.sphere)):
            raise DomainError("'scene' generates its own inputs; do not combine it with scan/background/sphere")
        if self.band is not None:
            self.band = _parse_band(self.band)
        if self.gate_range is not None:
            self.gate_range = tuple(float(v) for v in self.gate_range)
        self.models = tuple(self.models)

    @classmethod
    def from_dict(cls, d, base_dir="."):
        known = {f for f in cls.__dataclass_fields__ if f != "base_dir"}
        unknown = set(d) - known
        if unknown:
            raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**d, base_dir=str(base_dir))

    @classmethod
    def from_json(cls, path):
        return cls.from_dict(io.read_json(path), base_dir=Path(path).parent)

    def resolve(self, p):
        p = Path(p)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def gate_window(self):
        """(start, stop) in seconds, or None for an all-pass gate."""
        if self.gate_range is not None:
            r1, r2 = self.gate_range
            return float(range_to_delay(r1)), float(range_to_delay(r2))
        if self.gate_start is None and self.gate_stop is None:
            return None
        if self.gate_start is None or self.gate_stop is None:
            raise DomainError("gate_start and gate_stop must be given together")
        return float(self.gate_start), float(self.gate_stop)

    def summary(self):
        """Config as recorded in the report: file names only, no directories."""
        d = asdict(self)
        d.pop("base_dir")
        for key in ("scan", "background", "sphere"):
            if d[key] is not None:
                d[key] = Path(d[key]).name
        if isinstance(d["scene"], str):
            d["scene"] = Path(d["scene"]).name
        d["out_dir"] = Path(d["out_dir"]).name
        d["models"] = list(d["models"])
        for key in ("band", "gate_range"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d


def _parse_band(band):
    if isinstance(band, str):
        parts = band.split(":")
        if len(parts) != 2:
            raise DomainError(f"band must look like f1:f2, got {band!r}")
        band = parts
    f1, f2 = (float(v) for v in band)
    return f1, f2


@dataclass
class RunReport:
    status: str = "running"
    failed_stage: str | None = None
    error: str | None = None
    stages: list = field(default_factory=list)
    pattern: dict | None = None
    model_ranking: dict | None = None
    config: dict = field(default_factory=dict)
    defaults_flagged: list = field(default_factory=list)

    @property
    def stage_names(self):
        return [s["name"] for s in self.stages]

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return io.dump_json(self.to_dict())


class _Run:
    """Mutable state threaded through the stages of one run."""

    def __init__(self, config):
        self.config = config
        self.out_dir = config.resolve(config.out_dir)
        self.paths = {k: None if getattr(config, k) is None else config.resolve(getattr(config, k))
                      for k in ("scan", "background", "sphere")}
        self.sphere_radius = config.sphere_radius
        self.scan = self.sphere = None
        self.profile = self.sphere_profile = None
        self.cal = self.pattern = None


def stage_order(config):
    head = ["simulate"] if config.scene is not None else []
    head.append("load")
    if config.order == ORDER_SUBTRACT_FIRST:
        middle = ["background_subtract"] + _GATE_STAGES
    else:
        middle = _GATE_STAGES + ["background_subtract"]
    return head + middle + _TAIL_STAGES


def run_pipeline(config):
    """Run every stage in order and return the :class:`RunReport`.

    On failure the report (status ``failed``, with the failing stage) is still
    written, no pattern or plot-data file is left behind, and a
    :class:`StageError` carrying the report as ``.report`` is raised.
    """
    if not isinstance(config, PipelineConfig):
        config = PipelineConfig.from_dict(dict(config))
    run = _Run(config)
    report = RunReport(config=config.summary())
    if config.gate_window() is None:
        report.defaults_flagged.append("gate: none given, all-pass gate used")
    if config.band is None:
        report.defaults_flagged.append("band: none given, full sweep used")
    if config.alpha == gating.DEFAULT_ALPHA:
        report.defaults_flagged.append(f"alpha: default {gating.DEFAULT_ALPHA}")
    if config.zero_pad_factor == gating.DEFAULT_ZERO_PAD:
        report.defaults_flagged.append(f"zero_pad_factor: default {gating.DEFAULT_ZERO_PAD}")

    run.out_dir.mkdir(parents=True, exist_ok=True)
    for name in (PATTERN_FILE, PLOT_FILE):
        (run.out_dir / name).unlink(missing_ok=True)

    for name in stage_order(config):
        log.info("stage %s", name)
        try:
            summary = _STAGES[name](run, report)
        except (CompactRcsError, OSError, KeyError, TypeError, ValueError) as exc:
            report.status = "failed"
            report.failed_stage = name
            report.error = f"{type(exc).__name__}: {exc}"
            report.stages.append({"name": name, "status": "failed"})
            for fname in (PATTERN_FILE, PLOT_FILE):
                (run.out_dir / fname).unlink(missing_ok=True)
            io.write_json(run.out_dir / REPORT_FILE, report.to_dict())
            err = StageError(name, exc)
            err.report = report
            raise err from exc
        report.stages.append({"name": name, "status": "ok", **(summary or {})})
    report.status = "ok"
    io.write_json(run.out_dir / REPORT_FILE, report.to_dict())
    return report


# -- stages ------------------------------------------------------------------

def _stage_simulate(run, report):
    cfg = run.config
    scene_d = cfg.scene if isinstance(cfg.scene, dict) else io.read_json(cfg.resolve(cfg.scene))
    scene = scene_from_dict(scene_d, seed=cfg.seed)
    if scene.sphere is None:
        scene.sphere = SphereSpec(cfg.sphere_radius)
    scan = synth_scan(scene.target, scene.geometry, scene.sweep, scene.artifacts)
    bg = synth_background_scan(scene.geometry, scene.sweep, scene.artifacts)
    sph = synth_sphere_sweep(scene.sphere, scene.geometry, scene.sweep, scene.artifacts)
    run.paths = {name: run.out_dir / f"{name}.csv" for name in ("scan", "background", "sphere")}
    io.write_scan_csv(run.paths["scan"], scan)
    io.write_scan_csv(run.paths["background"], bg)
    io.write_sweep_csv(run.paths["sphere"], sph)
    run.sphere_radius = scene.sphere.radius
    return {"n_angles": int(scan.angles.size), "n_freqs": int(scan.freqs.size),
            "seed": int(scene.artifacts.seed), "target": scene.target.name}


def _stage_load(run, report):
    run.scan = io.read_scan_csv(run.paths["scan"])
    if run.paths["sphere"] is None:
        raise FormatError("config names no sphere calibration file")
    run.sphere = io.read_sweep_csv(run.paths["sphere"])
    return {"n_angles": int(run.scan.angles.size), "n_freqs": int(run.scan.freqs.size),
            "freq_start_hz": float(run.scan.freqs[0]), "freq_stop_hz": float(run.scan.freqs[-1])}


def _stage_background_subtract(run, report):
    if run.paths["background"] is None:
        raise FormatError("config names no background file")
    bg = io.read_scan_csv(run.paths["background"])
    gated_already = run.profile is not None
    if gated_already:
        bg = gating.gate_scan(bg, *_gate_args(run))[0]
    run.scan = gating.background_subtract_scan(run.scan, bg)
    # the chamber does not rotate, so the sphere sees the angle-averaged background
    bg_mean = FrequencySweep(bg.freqs, bg.samples.mean(axis=0))
    run.sphere = gating.background_subtract(run.sphere, bg_mean)
    return {"background_angles": int(bg.angles.size)}


def _gate_args(run):
    cfg = run.config
    window = cfg.gate_window()
    alpha = cfg.alpha
    if window is None:
        n_total = run.scan.freqs.size * cfg.zero_pad_factor
        df = (run.scan.freqs[-1] - run.scan.freqs[0]) / (run.scan.freqs.size - 1)
        window = (0.0, (n_total - 1) / (n_total * df))
        alpha = 0.0
    return window[0], window[1], alpha, cfg.zero_pad_factor, cfg.taper_alpha


def _stage_to_time_domain(run, report):
    cfg = run.config
    run.profile = gating.scan_to_time_domain(run.scan, cfg.zero_pad_factor, cfg.taper_alpha)
    run.sphere_profile = gating.to_time_domain(run.sphere, cfg.zero_pad_factor, cfg.taper_alpha)
    return {"n_times": int(run.profile.times.size), "dt_s": float(run.profile.dt),
            "sphere_peak_s": gating.peak_time(run.sphere_profile)}


def _stage_range_gate(run, report):
    start, stop, alpha, _, _ = _gate_args(run)
    before = gating.profile_energy(run.profile)
    run.profile = gating.range_gate(run.profile, start, stop, alpha)
    run.sphere_profile = gating.range_gate(run.sphere_profile, start, stop, alpha)
    ratio = gating.profile_energy(run.profile) / before if before > 0 else 0.0
    return {"gate_start_s": start, "gate_stop_s": stop, "alpha": alpha, "gate_energy_ratio": ratio}


def _stage_to_frequency_domain(run, report):
    run.scan = gating.scan_from_time_domain(run.profile, run.scan)
    run.sphere = gating.to_frequency_domain(run.sphere_profile, run.sphere.freqs.size)
    return {"n_freqs": int(run.scan.freqs.size)}


def _stage_calibration(run, report):
    sphere = SphereSpec(run.sphere_radius)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegionWarning)
        run.cal = build_calibration(run.sphere, sphere)
    n_off = sum(1 for r in run.cal.regions if r.value != "Optical")
    return {"sphere_radius_m": sphere.radius, "region_warning": bool(caught) or run.cal.region_warning,
            "non_optical_freqs": n_off, "factor_min": float(run.cal.factor.min()),
            "factor_max": float(run.cal.factor.max())}


def _stage_pattern(run, report):
    cfg = run.config
    band = cfg.band or (float(run.scan.freqs[0]), float(run.scan.freqs[-1]))
    run.pattern = pattern_from_scan(run.scan, run.cal, band)
    return {"band_hz": list(band), "freq_label": run.pattern.freq_label,
            "n_angles": int(run.pattern.angles.size)}


def _stage_average(run, report):
    mean_m2, _ = average_rcs(run.pattern)
    rcs = run.pattern.rcs
    report.pattern = {
        "freq_label": run.pattern.freq_label,
        "n_angles": int(rcs.size),
        "mean_m2": mean_m2,
        "mean_dbsm": to_dbsm(mean_m2),
        "min_m2": float(rcs.min()),
        "max_m2": float(rcs.max()),
        "min_dbsm": to_dbsm(float(rcs.min())),
        "max_dbsm": to_dbsm(float(rcs.max())),
    }
    return {"mean_dbsm": report.pattern["mean_dbsm"]}


def _stage_select_model(run, report):
    rcs = run.pattern.rcs
    samples = RcsSamples(np.maximum(rcs, RCS_FLOOR))
    ranking = select_model(samples, run.config.models)
    report.model_ranking = ranking_report(ranking, samples.count)
    return {"best": ranking.best.model}


def _stage_write(run, report):
    io.write_pattern_csv(run.out_dir / PATTERN_FILE, run.pattern)
    io.emit_plot_data(run.pattern, run.out_dir / PLOT_FILE)
    return {"files": [PATTERN_FILE, PLOT_FILE, REPORT_FILE]}


_STAGES = {
    "simulate": _stage_simulate,
    "load": _stage_load,
    "background_subtract": _stage_background_subtract,
    "to_time_domain": _stage_to_time_domain,
    "range_gate": _stage_range_gate,
    "to_frequency_domain": _stage_to_frequency_domain,
    "calibration": _stage_calibration,
    "pattern": _stage_pattern,
    "average_rcs": _stage_average,
    "select_model": _stage_select_model,
    "write": _stage_write,
}
