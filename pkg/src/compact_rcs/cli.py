"""Command-line interface: ``compact-rcs <subcommand> ...``.

Global flags ``--config``, ``--seed`` and ``--out-dir`` may appear before or
after the subcommand. For every subcommand except ``process`` the JSON config
supplies defaults for options not given on the command line, either flat or
under a key named after the subcommand. For ``process`` the config is the
pipeline configuration itself.
"""
import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import gating, io
from .calibration import build_calibration, pattern_from_scan
from .errors import CompactRcsError, StageError
from .mie import SphereSpec, classify_region, sphere_rcs
from .pipeline import PipelineConfig, run_pipeline
from .scatter import scene_from_dict, synth_background_scan, synth_scan, synth_sphere_sweep
from .stats import MODELS, RcsSamples, ranking_report, select_model
from .units import RCS_FLOOR

log = logging.getLogger("compact_rcs")

# hard defaults applied after config-file defaults
_DEFAULTS = {
    "sphere-rcs": {"points": 201, "model": "exact"},
    "gate": {"alpha": gating.DEFAULT_ALPHA, "zero_pad": gating.DEFAULT_ZERO_PAD},
    "calibrate": {"radius": 0.1524},
    "fit": {"models": ",".join(MODELS)},
}
_REQUIRED = {
    "sphere-rcs": ["radius", "freq_start", "freq_stop"],
    "simulate": ["scene", "out"],
    "gate": ["input", "gate_start", "gate_stop", "out"],
    "calibrate": ["scan", "sphere", "band", "out"],
    "fit": ["pattern", "out"],
    "plot-data": ["pattern", "out"],
}


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="JSON configuration file")
    parser.add_argument("--seed", type=int, default=default, help="RNG seed override")
    parser.add_argument("--out-dir", dest="out_dir", default=default, help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS if suppress else False)


def build_parser():
    p = argparse.ArgumentParser(prog="compact-rcs", description="Compact-range RCS measurement and modeling chain.")
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sphere-rcs", parents=[common], help="PEC sphere RCS versus frequency (CSV)")
    s.add_argument("--radius", type=float, help="sphere radius in m")
    s.add_argument("--freq-start", type=float)
    s.add_argument("--freq-stop", type=float)
    s.add_argument("--points", type=int)
    s.add_argument("--model", choices=["exact", "rayleigh", "optical"])
    s.add_argument("--out", help="output CSV (default: stdout)")

    s = sub.add_parser("simulate", parents=[common], help="synthesize a chamber scan from a scene JSON")
    s.add_argument("--scene")
    s.add_argument("--out")
    s.add_argument("--background-out")
    s.add_argument("--sphere-out", help="also write a calibration-sphere sweep")

    s = sub.add_parser("gate", parents=[common], help="background-subtract and range-gate a scan")
    s.add_argument("--in", dest="input")
    s.add_argument("--background")
    s.add_argument("--gate-start", type=float, help="seconds (two-way delay)")
    s.add_argument("--gate-stop", type=float, help="seconds (two-way delay)")
    s.add_argument("--alpha", type=float)
    s.add_argument("--zero-pad", type=int)
    s.add_argument("--out")

    s = sub.add_parser("calibrate", parents=[common], help="calibrate a gated scan into an RCS pattern")
    s.add_argument("--scan")
    s.add_argument("--sphere")
    s.add_argument("--radius", type=float)
    s.add_argument("--band", help="f1:f2 in Hz")
    s.add_argument("--out")

    s = sub.add_parser("fit", parents=[common], help="fit RCS models to a pattern and rank by AIC")
    s.add_argument("--pattern")
    s.add_argument("--models", help="comma list from lognormal,rayleigh,gev")
    s.add_argument("--out")

    s = sub.add_parser("plot-data", parents=[common], help="angle/dBsm CSV for polar plotting")
    s.add_argument("--pattern")
    s.add_argument("--out")

    s = sub.add_parser("process", parents=[common], help="run the full pipeline from a config")
    s.add_argument("--scene")
    s.add_argument("--scan")
    s.add_argument("--background")
    s.add_argument("--sphere")
    s.add_argument("--radius", dest="sphere_radius", type=float)
    s.add_argument("--gate-start", type=float)
    s.add_argument("--gate-stop", type=float)
    s.add_argument("--alpha", type=float)
    s.add_argument("--band")
    s.add_argument("--models")
    return p


def _merge_config(args, parser):
    cfg = io.read_json(args.config) if args.config else {}
    if args.command == "process":
        return cfg
    section = cfg.get(args.command, cfg) if isinstance(cfg.get(args.command), dict) else cfg
    for key, value in section.items():
        key = key.replace("-", "_")
        if key == "in":
            key = "input"
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)
    for key, value in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    missing = [k for k in _REQUIRED.get(args.command, []) if getattr(args, k, None) is None]
    if missing:
        parser.error(f"{args.command}: missing " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return cfg


def _out(args, path):
    p = Path(path)
    if args.out_dir and not p.is_absolute():
        p = Path(args.out_dir) / p
    return p


def cmd_sphere_rcs(args):
    sphere = SphereSpec(float(args.radius))
    freqs = np.linspace(float(args.freq_start), float(args.freq_stop), int(args.points))
    rcs = np.atleast_1d(sphere_rcs(sphere, freqs, args.model))
    regions = [classify_region(sphere, f) for f in freqs]
    if args.out:
        io.write_sphere_csv(_out(args, args.out), freqs, rcs, regions)
    else:
        io.write_sphere_csv(sys.stdout, freqs, rcs, regions)
    return 0


def cmd_simulate(args):
    scene = scene_from_dict(io.read_json(args.scene), seed=args.seed)
    io.write_scan_csv(_out(args, args.out), synth_scan(scene.target, scene.geometry, scene.sweep, scene.artifacts))
    if args.background_out:
        io.write_scan_csv(_out(args, args.background_out),
                          synth_background_scan(scene.geometry, scene.sweep, scene.artifacts))
    if args.sphere_out:
        sphere = scene.sphere or SphereSpec(0.1524)
        io.write_sweep_csv(_out(args, args.sphere_out),
                           synth_sphere_sweep(sphere, scene.geometry, scene.sweep, scene.artifacts))
    return 0


def cmd_gate(args):
    scan = io.read_scan_csv(args.input)
    if args.background:
        scan = gating.background_subtract_scan(scan, io.read_scan_csv(args.background))
    gated, ratio = gating.gate_scan(scan, float(args.gate_start), float(args.gate_stop),
                                    float(args.alpha), int(args.zero_pad))
    io.write_scan_csv(_out(args, args.out), gated)
    log.info("gate kept %.4g of the profile energy", ratio)
    return 0


def cmd_calibrate(args):
    scan = io.read_scan_csv(args.scan)
    sphere_sweep = io.read_sweep_csv(args.sphere)
    cal = build_calibration(sphere_sweep, SphereSpec(float(args.radius)))
    band = args.band if not isinstance(args.band, str) else [float(v) for v in args.band.split(":")]
    io.write_pattern_csv(_out(args, args.out), pattern_from_scan(scan, cal, tuple(band)))
    return 0


def cmd_fit(args):
    pattern = io.read_pattern_csv(args.pattern)
    models = args.models.split(",") if isinstance(args.models, str) else list(args.models)
    samples = RcsSamples(np.maximum(pattern.rcs, RCS_FLOOR))
    ranking = select_model(samples, [m.strip() for m in models])
    io.write_json(_out(args, args.out), ranking_report(ranking, samples.count))
    return 0


def cmd_plot_data(args):
    io.emit_plot_data(io.read_pattern_csv(args.pattern), _out(args, args.out))
    return 0


def cmd_process(args, cfg):
    d = dict(cfg)
    for key in ("scene", "scan", "background", "sphere", "sphere_radius", "gate_start", "gate_stop",
                "alpha", "band", "models"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v.split(",") if key == "models" else v
    if args.seed is not None:
        d["seed"] = args.seed
    if args.out_dir:
        # command-line paths are relative to the working directory, config paths to the config file
        d["out_dir"] = str(Path(args.out_dir).resolve())
    for key in ("scene", "scan", "background", "sphere"):
        if getattr(args, key, None) is not None:
            d[key] = str(Path(d[key]).resolve())
    base = Path(args.config).parent if args.config else Path(".")
    config = PipelineConfig.from_dict(d, base_dir=base)
    try:
        report = run_pipeline(config)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"best model: {report.model_ranking['best']}; mean RCS {report.pattern['mean_dbsm']:.2f} dBsm")
    return 0


_COMMANDS = {
    "sphere-rcs": cmd_sphere_rcs,
    "simulate": cmd_simulate,
    "gate": cmd_gate,
    "calibrate": cmd_calibrate,
    "fit": cmd_fit,
    "plot-data": cmd_plot_data,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _merge_config(args, parser)
        if args.command == "process":
            return cmd_process(args, cfg)
        return _COMMANDS[args.command](args)
    except (CompactRcsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
