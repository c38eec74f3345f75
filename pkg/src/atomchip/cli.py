"""Command-line front end: report, sweep, simulate-gate, optimize-pulse, validate-config.

Exit status: 0 success, 1 a claim failed or a model stage rejected the
scenario, 2 usage or configuration error.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import json
import math
from pathlib import Path
import sys

import numpy as np

from .config import DEFAULT_CONFIG_PATH, ConfigError, ScenarioConfig
from .gates import minimum_gate_error
from .optimize import fit_loglog_slope
from .report import ReportStageError, Scenario, assemble_report, canonical, evaluate_claim, stage_of
from .simulate import cz_sequence

EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2
FORMATS = ("txt", "json", "csv")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    path: str
    minimum: float
    maximum: float
    points: int
    scale: str = "log"
    objective: str = "cz.error_optimized"

    def __post_init__(self):
        if self.points < 2:
            raise UsageError("a sweep needs at least 2 points")
        if not self.minimum < self.maximum:
            raise UsageError("sweep minimum must be below maximum")
        if self.scale not in ("linear", "log"):
            raise UsageError("scale must be linear or log")
        if self.scale == "log" and self.minimum <= 0:
            raise UsageError("a log sweep needs a positive minimum")

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.points).tolist()
        return np.linspace(self.minimum, self.maximum, self.points).tolist()


def _load_config(path):
    return ScenarioConfig.from_file(path or DEFAULT_CONFIG_PATH)


def _emit(text, out_dir, name):
    if out_dir is None:
        sys.stdout.write(text)
        return
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)


# -- subcommands -----------------------------------------------------------

def cmd_report(args):
    cfg = _load_config(args.config)
    report = assemble_report(cfg, seed=args.seed)
    if args.out is None:
        sys.stdout.write(report.render(args.format or "txt"))
    else:
        for fmt in ([args.format] if args.format else FORMATS):
            _emit(report.render(fmt), args.out, f"report.{fmt}")
        c = report.counts
        print(f"wrote report to {args.out}: {c['pass']} pass, {c['fail']} fail, "
              f"{c['advisory']} advisory")
    for row in report.failed:
        print(f"claim failed: {row.claim_id} = {canonical(row.value)} {row.unit} "
              f"(tolerance {row.tolerance})", file=sys.stderr)
    return EXIT_CLAIM if report.failed else EXIT_OK


def sweep_point(config_json, path, value, objective, seed):
    cfg = ScenarioConfig.from_json(config_json).with_value(path, value)
    return evaluate_claim(cfg, objective, seed)


def run_sweep(cfg, spec, jobs=1, seed=None):
    """Objective at each sweep point, in sweep order whatever the completion order."""
    try:
        cfg.raw(spec.path)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    try:
        stage_of(spec.objective)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    xs = spec.values()
    args = (cfg.to_json(), spec.path, spec.objective, seed)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ys = list(pool.map(sweep_point, *zip(*[(args[0], args[1], x, args[2], args[3])
                                                    for x in xs])))
    else:
        ys = [sweep_point(args[0], args[1], x, args[2], args[3]) for x in xs]
    return list(zip(xs, ys))


def sweep_csv(spec, rows):
    lines = [f"{spec.path},{spec.objective}"]
    lines += [f"{canonical(x)},{canonical(y)}" for x, y in rows]
    return "\n".join(lines) + "\n"


def gnuplot_script(spec, csv_name):
    logscale = "set logscale xy\n" if spec.scale == "log" else ""
    return (f"set datafile separator ','\n{logscale}"
            f"set xlabel '{spec.path}'\nset ylabel '{spec.objective}'\n"
            f"set key off\nplot '{csv_name}' using 1:2 skip 1 with linespoints\n")


def cmd_sweep(args):
    cfg = _load_config(args.config)
    spec = SweepSpec(args.param, args.min, args.max, args.points, args.scale, args.objective)
    rows = run_sweep(cfg, spec, jobs=args.jobs, seed=args.seed)
    _emit(sweep_csv(spec, rows), args.out, "sweep.csv")
    if args.out is not None:
        _emit(gnuplot_script(spec, "sweep.csv"), args.out, "sweep.gp")
    xs, ys = zip(*rows)
    if all(v is not None and v > 0 for v in xs + ys):
        print(f"log-log slope: {canonical(fit_loglog_slope(xs, ys))}",
              file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK


def cmd_simulate_gate(args):
    s = Scenario(_load_config(args.config), args.seed)
    rep = s.cz_fixed
    doc = rep.to_dict()
    doc["pulse_sequence"] = [seg.to_dict() for seg in cz_sequence(2 * math.pi * rep.rabi_hz)]
    if (args.format or "json") == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"CZ ({rep.protocol}) gate duration {canonical(rep.gate_duration)} s, "
                 f"blockade {canonical(rep.blockade_hz)} Hz",
                 f"gate error {canonical(rep.gate_error)}"]
        lines += [f"  {k}: {canonical(v)}" for k, v in sorted(rep.error_breakdown.items())]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out, f"gate.{args.format or 'json'}")
    return EXIT_OK


def cmd_optimize_pulse(args):
    s = Scenario(_load_config(args.config), args.seed)
    opt = s.cz_optimum
    formula = (minimum_gate_error(s.cz_blockade_hz, s.gate_level.lifetime)
               if math.isfinite(s.cz_blockade_hz) else 0.0)
    doc = {"optimal_duration_s": opt.duration, "simulated_error": opt.error,
           "formula_error": formula, "method": opt.method, "evaluations": opt.evaluations,
           "advisory": opt.advisory, "blockade_hz": s.cz_blockade_hz,
           "lifetime_s": s.gate_level.lifetime}
    if (args.format or "txt") == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(f"{k}: {canonical(v) if isinstance(v, float) else v}\n"
                       for k, v in doc.items())
    _emit(text, args.out, f"optimum.{args.format or 'txt'}")
    return EXIT_OK


def cmd_validate_config(args):
    path = args.config or DEFAULT_CONFIG_PATH
    ScenarioConfig.from_file(path)
    print(f"ok: {path}")
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario JSON (default: bundled)")
    common.add_argument("--out", type=Path, help="output directory (default: stdout)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, help="Monte-Carlo seed (overrides the config)")

    p = argparse.ArgumentParser(prog="atomchip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("report", parents=[common], help="full claim-by-claim design report")
    sw = sub.add_parser("sweep", parents=[common], help="sweep one config value")
    sw.add_argument("--param", required=True, help="dotted config path, e.g. cz.blockade")
    sw.add_argument("--min", type=float, required=True)
    sw.add_argument("--max", type=float, required=True)
    sw.add_argument("--points", type=int, default=5)
    sw.add_argument("--scale", choices=("linear", "log"), default="log")
    sw.add_argument("--objective", default="cz.error_optimized", help="claim identifier")
    sub.add_parser("simulate-gate", parents=[common], help="simulate the CZ gate")
    sub.add_parser("optimize-pulse", parents=[common], help="optimise the CZ gate time")
    sub.add_parser("validate-config", parents=[common], help="check a scenario file")
    return p


COMMANDS = {
    "report": cmd_report,
    "sweep": cmd_sweep,
    "simulate-gate": cmd_simulate_gate,
    "optimize-pulse": cmd_optimize_pulse,
    "validate-config": cmd_validate_config,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        for line in exc.diagnostics:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReportStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLAIM


if __name__ == "__main__":
    sys.exit(main())
