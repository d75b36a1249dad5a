"""Batch experiment runner.

Subcommands run the toolkit's experiments and persist results as CSV plus
a JSON sidecar (seed, resolved configuration, version, wall time) so any
figure can be regenerated from the sidecar alone. Numeric CSV fields use
scientific notation with six significant digits; rerunning a subcommand
with the same seed reproduces the CSV byte for byte at any parallelism.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 when a
BER record was starved of errors (flagged rows present).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, kalman
from .errors import ConfigError, TrackSimError
from .geometry import DEFAULT_LADDER
from .phy.channel import ChannelModel
from .phy.link import CHANNEL_KINDS, SCHEMES, run_ber_point
from .sim.efficiency import ALGORITHMS, EfficiencyConfig, run_efficiency
from .sim.mobility import MobilityConfig
from .sim.ranging import SPEED_OF_LIGHT, range_from_timestamps, simulate_ranging
from .sim.tracking import run_tracking

OUTPUT_DIR_ENV = "TRACKSIM_OUT"

_FLOAT_FMT = "{:.5e}"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return _FLOAT_FMT.format(value)
    return str(value)


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_sidecar(path: str, args: argparse.Namespace, wall_time: float) -> None:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    meta = {
        "seed": args.seed,
        "config": config,
        "version": __version__,
        "wall_time_s": wall_time,
        "command": args.subcommand,
    }
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
        fh.write("\n")


def emit_plotdata(path: str, columns: list[str], table: list[list[float]]) -> None:
    """Write a whitespace-columnar data file consumable by any plotting tool.

    Zero or missing values are written as nan so the file stays
    log-scale-ready; a comment names the columns.
    """
    if not table:
        raise ConfigError("no records to plot")
    with open(path, "w") as fh:
        fh.write("# " + " ".join(columns) + "\n")
        for row in table:
            fh.write(" ".join("nan" if v is None else _FLOAT_FMT.format(v) for v in row) + "\n")


def parse_grid(spec: str) -> list[float]:
    """Parse start:step:stop (inclusive) Eb/N0 grids like 0:2:16."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:step:stop, got {spec!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"grid values must be numbers: {spec!r}") from exc
    if step <= 0:
        raise ConfigError("grid step must be positive")
    if stop < start:
        raise ConfigError("grid stop must not precede start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def parse_float_list(spec: str) -> list[float]:
    try:
        return [float(p) for p in spec.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {spec!r}") from exc


def load_config_file(path: str, parser: argparse.ArgumentParser, args: argparse.Namespace):
    """Apply key=value lines for options still at their parser default.

    Command-line flags win over file values; unknown keys are rejected.
    """
    known = {a.dest: a for a in parser._actions if a.dest not in ("help", "config")}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(
                f"{path}:{lineno}: unknown key {key!r}; valid keys: {', '.join(sorted(known))}"
            )
        action = known[key]
        if getattr(args, key) != parser.get_default(key):
            continue  # flag given explicitly; it wins
        if action.const is not None and action.nargs == 0:  # store_true/false
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif action.type is not None:
            try:
                setattr(args, key, action.type(value))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
        else:
            setattr(args, key, value)
        if action.choices and getattr(args, key) not in action.choices:
            raise ConfigError(f"{path}:{lineno}: {key} must be one of {action.choices}")


def _out_dir(args: argparse.Namespace) -> str:
    out = args.out or os.environ.get(OUTPUT_DIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _ber_point_job(params):
    scheme, kind, ebn0, min_errors, max_bits, seed = params
    record = run_ber_point(
        scheme,
        ChannelModel(kind=kind),
        ebn0,
        min_errors=min_errors,
        max_bits=max_bits,
        rng_seed=seed,
    )
    return record


def cmd_ber(args: argparse.Namespace) -> int:
    grid = parse_grid(args.ebn0)
    schemes = SCHEMES if args.scheme == "all" else (args.scheme,)
    channels = CHANNEL_KINDS if args.channel == "all" else (args.channel,)
    jobs = [
        (scheme, kind, ebn0, args.min_errors, args.max_bits, args.seed)
        for scheme in schemes
        for kind in channels
        for ebn0 in grid
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_ber_point_job, jobs))
    else:
        records = [_ber_point_job(j) for j in jobs]
    records.sort(key=lambda r: (SCHEMES.index(r.scheme), CHANNEL_KINDS.index(r.channel), r.ebn0_db))

    out = _out_dir(args)
    csv_path = os.path.join(out, "ber.csv")
    rows = [
        (r.scheme, r.channel, r.ebn0_db, r.bits_sent, r.bit_errors, r.ber, r.flagged)
        for r in records
    ]
    write_csv(csv_path, ["scheme", "channel", "ebn0_db", "bits_sent", "bit_errors", "ber", "flagged"], rows)

    overhead_path = os.path.join(out, "ber_overhead.csv")
    write_csv(
        overhead_path,
        ["scheme", "channel", "ebn0_db", "air_bits", "retransmitted_blocks"],
        [(r.scheme, r.channel, r.ebn0_db, r.air_bits, r.retransmitted_blocks) for r in records],
    )

    for kind in channels:
        table = []
        for ebn0 in grid:
            row = [ebn0]
            for scheme in schemes:
                match = [r for r in records if r.scheme == scheme and r.channel == kind and r.ebn0_db == ebn0]
                ber = match[0].ber if match else None
                row.append(ber if ber else None)
            table.append(row)
        emit_plotdata(
            os.path.join(out, f"ber_{kind}.dat"),
            ["ebn0_db"] + [f"ber_{s}" for s in schemes],
            table,
        )
    print(f"wrote {csv_path} ({len(records)} points)")
    return 3 if any(r.flagged for r in records) else 0


def cmd_track(args: argparse.Namespace) -> int:
    mob = MobilityConfig()
    fcfg = kalman.FilterConfig(constrained=args.constrained)
    result = run_tracking(
        mob,
        fcfg,
        steps=args.steps,
        runs=args.runs,
        rng_seed=args.seed,
        measurement_std=args.measurement_std,
    )
    out = _out_dir(args)
    csv_path = os.path.join(out, "track.csv")
    rows = [
        (k + 1, float(result.step_errors[k, 0]), float(result.step_errors[k, 1]))
        for k in range(result.step_errors.shape[0])
    ]
    rows.append((-1, result.north_mean_error, result.east_mean_error))
    write_csv(csv_path, ["step", "north_error_m", "east_error_m"], rows)
    emit_plotdata(
        os.path.join(out, "track_error.dat"),
        ["step", "north_error_m", "east_error_m"],
        [[float(k + 1), float(result.step_errors[k, 0]), float(result.step_errors[k, 1])]
         for k in range(result.step_errors.shape[0])],
    )
    print(
        f"wrote {csv_path} (constrained={args.constrained}, "
        f"north={result.north_mean_error:.3f} m, east={result.east_mean_error:.3f} m)"
    )
    return 0


def cmd_efficiency(args: argparse.Namespace) -> int:
    mob = MobilityConfig()
    algorithms = ALGORITHMS if args.algorithm == "both" else (args.algorithm,)
    records = []
    if args.sweep == "beamwidth":
        values = parse_float_list(args.beamwidths)
        for deg in values:
            cfg = EfficiencyConfig(
                beamwidth=math.radians(deg),
                silent_duration=args.silent,
                experiments=args.trials // 10 or 1,
                trials_per_experiment=10,
            )
            for algorithm in algorithms:
                records.append((deg, run_efficiency(cfg, mob, args.seed, algorithm=algorithm)))
    else:
        values = parse_float_list(args.silences)
        for silent in values:
            cfg = EfficiencyConfig(
                beamwidth=math.radians(args.beamwidth_deg),
                silent_duration=silent,
                experiments=args.trials // 10 or 1,
                trials_per_experiment=10,
            )
            for algorithm in algorithms:
                records.append((silent, run_efficiency(cfg, mob, args.seed, algorithm=algorithm)))

    out = _out_dir(args)
    csv_path = os.path.join(out, "efficiency.csv")
    rows = [
        (
            rec.algorithm,
            math.degrees(rec.beamwidth) if not math.isnan(rec.beamwidth) else -1.0,
            rec.silent_duration,
            rec.successes,
            rec.trials,
            rec.efficiency,
        )
        for _, rec in records
    ]
    write_csv(
        csv_path,
        ["algorithm", "beamwidth_deg", "silent_s", "successes", "trials", "efficiency"],
        rows,
    )
    table = []
    for value in values:
        row = [value]
        for algorithm in algorithms:
            match = [rec for v, rec in records if v == value and rec.algorithm == algorithm]
            row.append(match[0].efficiency if match else None)
        table.append(row)
    axis = "beamwidth_deg" if args.sweep == "beamwidth" else "silent_s"
    emit_plotdata(
        os.path.join(out, f"efficiency_{args.sweep}.dat"),
        [axis] + [f"eff_{a}" for a in algorithms],
        table,
    )
    print(f"wrote {csv_path} ({len(rows)} records)")
    return 0


def cmd_range(args: argparse.Namespace) -> int:
    rng_root = np.random.SeedSequence([args.seed & 0xFFFFFFFF, 0x72616E67])
    rows = []
    for idx, child in enumerate(rng_root.spawn(args.ensembles)):
        rng = np.random.default_rng(child)
        ens = simulate_ranging(args.distance, args.pairs, args.jitter_ns * 1e-9, rng)
        estimate = range_from_timestamps(ens)
        rows.append((idx, len(ens.pairs), ens.late_count, estimate, estimate - args.distance))
    out = _out_dir(args)
    csv_path = os.path.join(out, "range.csv")
    write_csv(csv_path, ["ensemble", "pairs", "late", "range_m", "error_m"], rows)
    mean_est = float(np.mean([r[3] for r in rows]))
    print(f"wrote {csv_path} (mean estimate {mean_est:.3f} m for true {args.distance} m)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracksim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tracksim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", type=str, default=None,
                       help=f"output directory (default ${OUTPUT_DIR_ENV} or cwd)")
        p.add_argument("--config", type=str, default=None, help="flat key=value config file")

    p = sub.add_parser("ber", help="BER versus Eb/N0 sweeps")
    common(p)
    p.add_argument("--scheme", choices=SCHEMES + ("all",), default="all")
    p.add_argument("--channel", choices=CHANNEL_KINDS + ("all",), default="all")
    p.add_argument("--ebn0", type=str, default="0:2:20", help="grid start:step:stop in dB")
    p.add_argument("--min-errors", dest="min_errors", type=int, default=100)
    p.add_argument("--max-bits", dest="max_bits", type=int, default=2_000_000)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("track", help="Kalman tracking-error experiment")
    common(p)
    p.add_argument("--constrained", action="store_true")
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--steps", type=int, default=60)
    p.add_argument("--measurement-std", dest="measurement_std", type=float, default=5.0)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("efficiency", help="zone-prediction efficiency sweeps")
    common(p)
    p.add_argument("--sweep", choices=("beamwidth", "silence"), default="beamwidth")
    p.add_argument("--beamwidths", type=str, default="2,7,10,14,20,28,30",
                   help="beamwidth sweep values in degrees")
    p.add_argument("--silences", type=str, default="9,15,21,27,30",
                   help="silent-duration sweep values in seconds")
    p.add_argument("--silent", type=float, default=15.0,
                   help="silent duration for beamwidth sweeps")
    p.add_argument("--beamwidth-deg", dest="beamwidth_deg", type=float, default=15.0,
                   help="beamwidth for silence sweeps")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--algorithm", choices=ALGORITHMS + ("both",), default="both")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("range", help="packet-timestamp ranging experiment")
    common(p)
    p.add_argument("--distance", type=float, default=30.0, help="true range in meters")
    p.add_argument("--pairs", type=int, default=20, help="packets per ensemble")
    p.add_argument("--jitter-ns", dest="jitter_ns", type=float, default=10.0)
    p.add_argument("--ensembles", type=int, default=100)
    p.set_defaults(func=cmd_range)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            sub_parser = None
            for action in parser._actions:
                if isinstance(action, argparse._SubParsersAction):
                    sub_parser = action.choices[args.subcommand]
            load_config_file(args.config, sub_parser, args)
        start = time.time()
        status = args.func(args)
        out = _out_dir(args)
        write_sidecar(os.path.join(out, f"{args.subcommand}.meta.json"), args, time.time() - start)
        return status
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TrackSimError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
