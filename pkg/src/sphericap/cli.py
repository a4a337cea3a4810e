"""Command-line front door: replay, synth, report, serve.

Exit codes are fixed for scripting: 0 success, 2 bad input data,
3 bad configuration, 4 environment failure (e.g. bind).  Flags mirror
config-file keys one-to-one with precedence flags > file > defaults,
and no subcommand writes outside its --out directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import grid as gridmod
from . import logio, synth
from .errors import ConfigError, SphericapError
from .gate import GateConfig
from .grid import CoverageMatrix, GridSpec
from .rotation import (
    SphericalAngles,
    quat_to_dcm,
    relative_rotation,
    sat_phi,
    to_spherical,
    view_direction,
    wrap_theta,
)
from .session import CaptureSession, SessionConfig, report_to_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_ENV = 4

# config-file keys (JSON), one-to-one with the identically named flags
CONFIG_KEYS = (
    "grid_theta",
    "grid_phi",
    "pole_zone",
    "alpha",
    "a_th",
    "omega_th",
    "hold_ms",
    "recapture",
)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-theta", type=int, default=None, help="longitude bins (default 36)")
    p.add_argument("--grid-phi", type=int, default=None, help="latitude bins (default 18)")
    p.add_argument("--pole-zone", type=float, default=None, help="polar dilation zone, degrees (default 30)")
    p.add_argument("--alpha", type=float, default=None, help="EMA smoothing factor (default 0.9)")
    p.add_argument("--a-th", type=float, default=None, help="acceleration threshold, m/s^2 (default 0.5)")
    p.add_argument("--omega-th", type=float, default=None, help="angular-velocity threshold, rad/s (default 0.3)")
    p.add_argument("--hold-ms", type=int, default=None, help="stability hold window, ms (default 300)")
    p.add_argument("--recapture", choices=["once", "always"], default=None, help="capture policy (default once)")
    p.add_argument("--config", type=Path, default=None, help="JSON config file; flags override it")
    p.add_argument("--out", type=Path, required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphericap",
        description="IMU-gated spherical coverage tracking and capture guidance",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_replay = sub.add_parser("replay", help="replay a JSONL IMU log into a session report")
    p_replay.add_argument("log", type=Path, help="input log (JSONL)")
    _add_common_flags(p_replay)

    p_synth = sub.add_parser("synth", help="generate a synthetic IMU log")
    p_synth.add_argument("pattern", choices=sorted(synth.PATTERNS), help="trajectory pattern")
    p_synth.add_argument("--duration", type=float, default=None, help="seconds (pattern default)")
    p_synth.add_argument("--rate", type=float, default=100.0, help="sample rate, Hz")
    p_synth.add_argument("--settle-ms", type=int, default=500, help="calm settle phase, ms")
    p_synth.add_argument("--accel", type=float, default=0.05, help="calm acceleration magnitude")
    p_synth.add_argument("--omega", type=float, default=0.02, help="calm angular-velocity magnitude")
    p_synth.add_argument("--burst", action="append", default=[], metavar="START:LEN",
                         help="instability window in ms, repeatable")
    p_synth.add_argument("--burst-accel", type=float, default=5.0, help="acceleration during bursts")
    p_synth.add_argument("--phi", type=float, default=0.0, help="orbit latitude, degrees")
    p_synth.add_argument("--revolutions", type=float, default=None, help="longitude sweeps")
    p_synth.add_argument("--phi-start", type=float, default=-89.0, help="spiral start latitude")
    p_synth.add_argument("--phi-end", type=float, default=89.0, help="spiral end latitude")
    p_synth.add_argument("--max-rate", type=float, default=12.0, help="random-walk rate bound, deg/s")
    p_synth.add_argument("--seed", type=int, default=0, help="random-walk seed")
    p_synth.add_argument("--out", type=Path, required=True, help="output directory")

    p_report = sub.add_parser("report", help="offline band/coverage analysis of an orientation CSV")
    p_report.add_argument("csv", type=Path, help="orientation list (image_id,qx,qy,qz,qw)")
    _add_common_flags(p_report)

    p_serve = sub.add_parser("serve", help="run the live session service")
    p_serve.add_argument("--bind", default="127.0.0.1:8787", metavar="HOST:PORT")
    _add_common_flags(p_serve)

    return parser


def load_session_config(args: argparse.Namespace) -> SessionConfig:
    """Merge flags > config file > defaults into a SessionConfig."""
    merged: dict = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}")
        except ValueError as e:
            raise ConfigError(f"config file is not valid JSON: {e}")
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(raw) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(raw)

    for key in CONFIG_KEYS:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = flag_val

    try:
        grid = GridSpec(
            n_theta=int(merged.get("grid_theta", 36)),
            n_phi=int(merged.get("grid_phi", 18)),
            pole_zone_deg=float(merged.get("pole_zone", 30.0)),
        )
        gate = GateConfig(
            alpha=float(merged.get("alpha", 0.9)),
            a_th=float(merged.get("a_th", 0.5)),
            omega_th=float(merged.get("omega_th", 0.3)),
            hold_ms=int(merged.get("hold_ms", 300)),
        )
        return SessionConfig(gate=gate, grid=grid, recapture_policy=merged.get("recapture", "once"))
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e))


def write_session_outputs(session: CaptureSession, out_dir: Path) -> None:
    report = session.finalize()
    raw = session.coverage
    refined = gridmod.refine_display(raw)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(report_to_json(report), encoding="utf-8")
    (out_dir / "bands.csv").write_text(report.bands.to_csv(), encoding="utf-8")
    (out_dir / "coverage.pgm").write_text(gridmod.to_pgm(raw), encoding="utf-8")
    (out_dir / "coverage_refined.pgm").write_text(gridmod.to_pgm(raw, added=refined), encoding="utf-8")


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        cfg = load_session_config(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        samples = logio.read_log(args.log)
    except OSError as e:
        print(f"error: cannot read log: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SphericapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    session = CaptureSession(cfg)
    for sample in samples:
        session.ingest(sample)
    write_session_outputs(session, args.out)
    print(f"replayed {len(samples)} samples: coverage "
          f"{session.snapshot().coverage_pct:.2f}%, {len(session.captures)} captures")
    return EXIT_OK


def _parse_bursts(specs: list[str]) -> tuple[tuple[int, int], ...]:
    windows = []
    for spec in specs:
        try:
            start_s, len_s = spec.split(":")
            start, length = int(start_s), int(len_s)
        except ValueError:
            raise ConfigError(f"burst must be START:LEN in ms, got {spec!r}")
        windows.append((start, start + length))
    return tuple(windows)


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        params = synth.SynthParams(
            rate_hz=args.rate,
            settle_ms=args.settle_ms,
            accel_mag=args.accel,
            omega_mag=args.omega,
            bursts=_parse_bursts(args.burst),
            burst_accel=args.burst_accel,
        )
        if args.pattern == "orbit":
            samples = synth.orbit_samples(
                duration_s=args.duration if args.duration is not None else 10.0,
                phi_deg=args.phi,
                revolutions=args.revolutions if args.revolutions is not None else 1.0,
                params=params,
            )
        elif args.pattern == "spiral":
            samples = synth.spiral_samples(
                duration_s=args.duration if args.duration is not None else 40.0,
                revolutions=args.revolutions if args.revolutions is not None else 40.0,
                phi_start_deg=args.phi_start,
                phi_end_deg=args.phi_end,
                params=params,
            )
        else:
            samples = synth.random_walk_samples(
                duration_s=args.duration if args.duration is not None else 20.0,
                max_rate_deg_s=args.max_rate,
                seed=args.seed,
                params=params,
            )
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{args.pattern}.jsonl"
    logio.write_log(samples, path)
    print(f"wrote {len(samples)} samples to {path}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    try:
        cfg = load_session_config(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        orientations = logio.read_orientations(args.csv)
    except OSError as e:
        print(f"error: cannot read csv: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SphericapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    # Offline lists carry no motion data: poses are taken as pre-validated
    # and aligned to the first record, mirroring the session baseline.
    coverage = CoverageMatrix(cfg.grid)
    captures = []
    baseline = None
    for rec in orientations.records:
        r = quat_to_dcm(rec.q)
        if baseline is None:
            baseline = r
        rel = relative_rotation(baseline, r)
        raw_angles = to_spherical(view_direction(rel))
        angles = SphericalAngles(wrap_theta(raw_angles.theta), sat_phi(raw_angles.phi))
        coverage.mark(gridmod.quantize(angles, cfg.grid))
        captures.append(angles)

    bands = gridmod.band_report(captures, gridmod.DEFAULT_BANDS, coverage)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "bands.csv").write_text(bands.to_csv(), encoding="utf-8")
    (args.out / "coverage.pgm").write_text(gridmod.to_pgm(coverage), encoding="utf-8")
    pct = gridmod.coverage_rate(coverage)
    print(f"analyzed {len(orientations)} orientations: coverage {pct:.2f}%")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        cfg = load_session_config(args)
        host, sep, port_s = args.bind.rpartition(":")
        if not sep or not host:
            raise ConfigError(f"--bind must be HOST:PORT, got {args.bind!r}")
        port = int(port_s)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    from .service import run_server

    args.out.mkdir(parents=True, exist_ok=True)
    try:
        run_server(host, port, cfg, reports_dir=args.out)
    except OSError as e:
        print(f"error: cannot bind {args.bind}: {e}", file=sys.stderr)
        return EXIT_ENV
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "replay": cmd_replay,
        "synth": cmd_synth,
        "report": cmd_report,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
