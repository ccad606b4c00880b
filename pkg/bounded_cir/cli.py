# SPDX-FileCopyrightText: Copyright (c) 2025 The bounded-cir authors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command line front end.

    python -m bounded_cir.cli <command> [options]

Precedence of settings: command-line flags > --config file > built-in defaults.
"""

import argparse
import json
import math
import sys
from dataclasses import asdict
from typing import Any, Callable, Dict, List, Optional

from bounded_cir.channel import (
    evaluate_series,
    peak_sweep,
    t_star,
    t_star_max,
    t_star_sweep,
    unbounded_peak,
)
from bounded_cir.config import Config, config_hash, load_config
from bounded_cir.eigen import ModeTable, find_modes
from bounded_cir.link import ber_sweep, match_absorbed_fraction
from bounded_cir.montecarlo import compare_to_analytic, simulate
from bounded_cir.utils.constant import ExitCode, SeriesKind
from bounded_cir.utils.errors import BoundedCirError
from bounded_cir.utils.logging import logger
from bounded_cir.utils.manifest import RunManifest, manifest_path_for
from bounded_cir.utils.util import parse_float_list, write_csv_file, write_text_atomic


def _float_or_inf(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="TOML or JSON configuration file, or a run manifest to reproduce a previous run.",
    )
    parser.add_argument(
        "--out", type=str, default=None, help="Output file. Results go to stdout if omitted."
    )
    parser.add_argument(
        "--format",
        type=str,
        default="csv",
        choices=["csv", "json"],
        help="Output format, default is csv.",
    )
    parser.add_argument("--seed", type=int, default=None, help="Root seed of all random streams.")
    parser.add_argument(
        "--workers", type=int, default=None, help="Worker processes, 0 uses one per CPU."
    )
    return parser


def _geometry_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("Geometry (um, um^2/s)")
    group.add_argument("--d0", type=float, default=None, help="Receiver radius.")
    group.add_argument(
        "--D0", type=_float_or_inf, default=None, help="Outer reflecting radius, inf for free space."
    )
    group.add_argument("--r0", type=float, default=None, help="Transmitter distance from the center.")
    group.add_argument("--D", type=float, default=None, help="Diffusion coefficient.")
    return parser


def _grid_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("Time grid (s)")
    group.add_argument("--t-start", type=float, default=None, help="First time point.")
    group.add_argument("--t-stop", type=float, default=None, help="Last time point.")
    group.add_argument("--n-points", type=int, default=None, help="Number of time points.")
    group.add_argument(
        "--spacing", type=str, default=None, choices=["linear", "log"], help="Grid spacing."
    )
    group.add_argument(
        "--compare-unbounded",
        action="store_true",
        default=None,
        help="Add the free-space reference as an extra column.",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    geometry = _geometry_parser()
    grid = _grid_parser()
    parser = argparse.ArgumentParser(
        prog="bounded-cir",
        description="Impulse response of a receiver enclosed by a reflecting sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    modes = sub.add_parser("modes", parents=[common, geometry], help="Tabulate eigenmodes.")
    modes.add_argument(
        "--alpha", type=float, default=None, help="Shell ratio d0/D0; defaults to the geometry."
    )
    modes.add_argument("--count", type=int, default=None, help="Number of modes.")

    sub.add_parser("cir", parents=[common, geometry, grid], help="Hitting rate on a time grid.")
    sub.add_parser(
        "cumulative", parents=[common, geometry, grid], help="Absorbed fraction on a time grid."
    )

    peak = sub.add_parser("peak", parents=[common, geometry], help="Peak time and peak rate.")
    peak.add_argument(
        "--r0-sweep", type=str, default=None, help="Transmitter distances, start:stop:step or a,b,c."
    )
    peak.add_argument("--eps", type=float, default=None, help="Residual fraction for t*.")
    peak.add_argument(
        "--compare-unbounded", action="store_true", default=None, help="Add free-space peaks."
    )

    tstar = sub.add_parser("tstar", parents=[common, geometry], help="Time until eps remains.")
    tstar.add_argument("--eps", type=float, default=None, help="Residual fraction.")
    tstar.add_argument(
        "--method", type=str, default=None, choices=["closed", "exact"], help="t* evaluation."
    )
    tstar.add_argument(
        "--r0-sweep", type=str, default=None, help="Transmitter distances, start:stop:step or a,b,c."
    )

    mc = sub.add_parser("montecarlo", parents=[common, geometry], help="Particle simulation.")
    mc.add_argument("--dt", type=float, default=None, help="Time step in s.")
    mc.add_argument("--particles", type=int, default=None, help="Number of molecules.")
    mc.add_argument("--t-end", type=float, default=None, help="Simulated span in s.")
    mc.add_argument("--bins", type=int, default=None, help="Histogram bins.")
    mc.add_argument(
        "--policy",
        type=str,
        default=None,
        choices=["radial_fold", "reject_resample"],
        help="Outer boundary handling.",
    )
    mc.add_argument("--block-size", type=int, default=None, help="Particles per random stream.")
    mc.add_argument(
        "--compare", action="store_true", default=None, help="Compare with the analytic model."
    )

    ber = sub.add_parser("ber", parents=[common, geometry], help="Bit error rate sweep.")
    ber.add_argument("--D0-values", type=str, default=None, help="Bounded outer radii, a,b,c.")
    ber.add_argument("--ts-grid", type=str, default=None, help="Symbol durations in s.")
    ber.add_argument("--molecules", type=int, default=None, help="Molecules per 1 bit.")
    ber.add_argument("--bits", type=int, default=None, help="Bits per BER point.")
    ber.add_argument("--isi-length", type=int, default=None, help="ISI taps, 0 for automatic.")
    ber.add_argument(
        "--threshold-policy", type=str, default=None, choices=["fixed", "trained"], help="Threshold."
    )
    ber.add_argument("--threshold", type=int, default=None, help="Fixed threshold.")
    ber.add_argument("--pilot-bits", type=int, default=None, help="Pilot length for training.")
    ber.add_argument(
        "--no-unbounded", action="store_true", default=None, help="Skip the free-space reference."
    )
    ber.add_argument(
        "--match-fraction",
        type=float,
        default=None,
        help="Report the t_s at which the first D0 absorbs this fraction and the second D0's fraction.",
    )
    ber.add_argument(
        "--expected-fraction", type=float, default=None, help="Expected fraction of the second D0."
    )
    return parser


# (argument name, config path, converter)
_FLAG_MAP = [
    ("seed", ("seed",), None),
    ("workers", ("workers",), None),
    ("d0", ("geometry", "d0"), None),
    ("D0", ("geometry", "D0"), None),
    ("r0", ("geometry", "r0"), None),
    ("D", ("geometry", "D"), None),
    ("t_start", ("grid", "t_start"), None),
    ("t_stop", ("grid", "t_stop"), None),
    ("n_points", ("grid", "n_points"), None),
    ("spacing", ("grid", "spacing"), None),
    ("compare_unbounded", ("compare_unbounded",), None),
    ("count", ("series", "max_modes"), None),
    ("eps", ("epsilon",), None),
    ("method", ("tstar_method",), None),
    ("r0_sweep", ("r0_sweep",), parse_float_list),
    ("dt", ("montecarlo", "dt"), None),
    ("particles", ("montecarlo", "particles"), None),
    ("t_end", ("montecarlo", "t_end"), None),
    ("bins", ("montecarlo", "bins"), None),
    ("policy", ("montecarlo", "reflection_policy"), None),
    ("block_size", ("montecarlo", "block_size"), None),
    ("compare", ("montecarlo", "compare"), None),
    ("D0_values", ("link", "D0_values"), parse_float_list),
    ("ts_grid", ("link", "symbol_durations"), parse_float_list),
    ("molecules", ("link", "molecules_per_bit"), None),
    ("bits", ("link", "n_bits"), None),
    ("isi_length", ("link", "isi_length"), None),
    ("threshold_policy", ("link", "threshold_policy"), None),
    ("threshold", ("link", "threshold"), None),
    ("pilot_bits", ("link", "pilot_bits"), None),
    ("no_unbounded", ("link", "include_unbounded"), lambda flag: not flag),
    ("match_fraction", ("link", "match_fraction"), None),
    ("expected_fraction", ("link", "expected_fraction"), None),
]


def flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for name, path, convert in _FLAG_MAP:
        value = getattr(args, name, None)
        if value is None:
            continue
        node = overrides
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = convert(value) if convert else value
    return overrides


def resolve_config(args: argparse.Namespace) -> Config:
    config = load_config(args.config)
    return config.update(flag_overrides(args))


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(text, out)


def _emit_json(data: Any, out: Optional[str]) -> None:
    _emit(json.dumps(data, indent=4) + "\n", out)


def _mode_table(config: Config, alpha: float) -> ModeTable:
    return find_modes(alpha, count=config.series.max_modes, margin=config.series.shell_margin)


def _params(config: Config) -> Dict[str, Any]:
    return asdict(config.geometry)


def _write_manifest(args: argparse.Namespace, config: Config, notes: Dict[str, Any]) -> None:
    if args.out is None:
        logger.warning("No --out given, the run manifest is not written")
        return
    manifest = RunManifest(
        command=args.command,
        config=config.key_values(),
        config_hash=config_hash(config),
        seed=config.seed,
        outputs=[args.out],
        notes=notes,
    )
    manifest.save(manifest_path_for(args.out))


def run_modes(args: argparse.Namespace, config: Config) -> None:
    alpha = args.alpha if args.alpha is not None else config.geometry.d0 / config.geometry.D0
    table = _mode_table(config, alpha)
    if args.format == "json":
        _emit_json(table.to_dict(), args.out)
        return
    rows = [(m.n, m.beta, m.c, m.norm) for m in table.modes]
    _emit(write_csv_file(["n", "beta", "c", "I"], rows, None), args.out)


def _run_series(args: argparse.Namespace, config: Config, kind: SeriesKind) -> None:
    geom = config.geometry.to_geometry()
    times = config.grid.times()
    modes = _mode_table(config, geom.alpha) if geom.bounded else None
    series = evaluate_series(
        kind,
        times,
        geom,
        modes,
        clamp=True,
        tail_tolerance=config.series.tail_tolerance,
        tau_floor=config.series.tau_floor,
    )
    columns = [series.values]
    header = ["t_s", "value"]
    reference = None
    if config.compare_unbounded and geom.bounded:
        reference = evaluate_series(kind, times, geom.unbounded())
        columns.append(reference.values)
        header.append("unbounded")
    if args.format == "json":
        data = {"params": _params(config), **series.to_dict()}
        if reference is not None:
            data["unbounded"] = reference.values.tolist()
        _emit_json(data, args.out)
        return
    rows = zip(series.times, *columns)
    _emit(f"# kind: {kind}\n" + write_csv_file(header, rows, None), args.out)


def run_cir(args: argparse.Namespace, config: Config) -> None:
    _run_series(args, config, SeriesKind.RATE)


def run_cumulative(args: argparse.Namespace, config: Config) -> None:
    _run_series(args, config, SeriesKind.CUMULATIVE)


def _sweep_values(config: Config) -> List[float]:
    return list(config.r0_sweep) if config.r0_sweep else [config.geometry.r0]


def run_peak(args: argparse.Namespace, config: Config) -> None:
    base = config.geometry.to_geometry()
    modes = _mode_table(config, base.alpha)
    records = []
    for r0, point in peak_sweep(_sweep_values(config), base, modes):
        record = {
            "r0_um": r0,
            "tau_peak_s": point.tau_peak,
            "n_peak_per_s": point.n_peak,
        }
        if config.compare_unbounded:
            reference = unbounded_peak(base.with_r0(r0))
            record["unbounded_tau_peak_s"] = reference.tau_peak
            record["unbounded_n_peak_per_s"] = reference.n_peak
        records.append(record)

    if args.format == "json":
        if not config.r0_sweep:
            summary = dict(records[0])
            summary["t_star_s"] = t_star(config.epsilon, base, modes, method=config.tstar_method)
            summary["t_star_max_s"] = t_star_max(config.epsilon, base, modes)
            summary["t_star_over_tau_peak"] = summary["t_star_s"] / summary["tau_peak_s"]
            summary["epsilon"] = config.epsilon
            summary["params"] = _params(config)
            _emit_json(summary, args.out)
        else:
            _emit_json(records, args.out)
        return
    header = list(records[0].keys())
    _emit(write_csv_file(header, [list(r.values()) for r in records], None), args.out)


def run_tstar(args: argparse.Namespace, config: Config) -> None:
    base = config.geometry.to_geometry()
    modes = _mode_table(config, base.alpha)
    deadline_bound = t_star_max(config.epsilon, base, modes)
    records = [
        {"r0_um": r0, "t_star_s": value, "t_star_max_s": deadline_bound}
        for r0, value in t_star_sweep(
            _sweep_values(config), config.epsilon, base, modes, method=config.tstar_method
        )
    ]
    if args.format == "json":
        _emit_json(
            {
                "epsilon": config.epsilon,
                "method": config.tstar_method,
                "params": _params(config),
                "points": records,
            },
            args.out,
        )
        return
    header = list(records[0].keys())
    _emit(write_csv_file(header, [list(r.values()) for r in records], None), args.out)


def run_montecarlo(args: argparse.Namespace, config: Config) -> None:
    geom = config.geometry.to_geometry()
    sim_config = config.montecarlo.to_sim_config(geom, config.seed, config.workers)
    histogram = simulate(geom, sim_config)
    notes: Dict[str, Any] = {
        "dt": sim_config.dt,
        "steps_per_bin": sim_config.steps_per_bin,
        "t_span": sim_config.t_span,
        "absorbed_fraction": histogram.absorbed_fraction,
    }
    report = None
    if config.montecarlo.compare:
        modes = _mode_table(config, geom.alpha) if geom.bounded else None
        report = compare_to_analytic(histogram, geom, modes)
        notes["max_abs_z"] = report.max_abs_z
        notes["fraction_within_3sigma"] = report.fraction_within_3sigma
        notes["ks_distance"] = report.ks_distance

    if args.format == "json":
        data = histogram.to_dict()
        if report is not None:
            data["comparison"] = report.to_dict()
        _emit_json(data, args.out)
    else:
        header = ["t_lo_s", "t_hi_s", "count"]
        columns = [histogram.bin_edges[:-1], histogram.bin_edges[1:], histogram.counts]
        if report is not None:
            header += ["expected", "z"]
            columns += [report.expected, report.z_scores]
        _emit(write_csv_file(header, zip(*columns), None), args.out)
    _write_manifest(args, config, notes)


def run_ber(args: argparse.Namespace, config: Config) -> None:
    base = config.geometry.to_geometry()
    link = config.link
    bounded = [base.with_D0(D0) for D0 in link.D0_values]
    notes: Dict[str, Any] = {}
    if link.match_fraction > 0.0:
        if len(bounded) < 2:
            logger.warning("--match-fraction needs two D0 values, skipping the check")
        else:
            match = match_absorbed_fraction(
                bounded[0],
                _mode_table(config, bounded[0].alpha),
                bounded[1],
                _mode_table(config, bounded[1].alpha),
                fraction=link.match_fraction,
                expected=link.expected_fraction,
            )
            notes["fraction_match"] = match.to_dict()
    results = ber_sweep(
        bounded,
        base if link.include_unbounded else None,
        link.symbol_durations,
        link.to_ber_config(config.seed, config.workers),
        max_modes=config.series.max_modes,
    )
    if args.format == "json":
        _emit_json([r.to_dict() for r in results], args.out)
    else:
        header = [
            "t_s_s",
            "channel_kind",
            "D0_um",
            "ber",
            "ci_lo",
            "ci_hi",
            "threshold",
            "errors",
            "n_bits",
            "isi_length",
        ]
        rows = [
            (
                r.t_s,
                r.channel_kind,
                r.D0,
                r.ber,
                r.ci_lo,
                r.ci_hi,
                r.threshold_used,
                r.errors,
                r.n_bits,
                r.isi_length,
            )
            for r in results
        ]
        _emit(write_csv_file(header, rows, None), args.out)
    _write_manifest(args, config, notes)


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], None]] = {
    "modes": run_modes,
    "cir": run_cir,
    "cumulative": run_cumulative,
    "peak": run_peak,
    "tstar": run_tstar,
    "montecarlo": run_montecarlo,
    "ber": run_ber,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        COMMANDS[args.command](args, config)
    except BoundedCirError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return int(e.exit_code)
    return int(ExitCode.OK)


if __name__ == "__main__":
    sys.exit(main())
