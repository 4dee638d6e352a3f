"""Command-line front end: simulate, optimize, sweep, fit, bounds, verify.

Every subcommand writes plot-ready CSV (12 significant digits) or a JSON object
``{"meta": ..., "rows": [...]}``. Flags may also come from a flat ``key = value``
config file (``--config``); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict

import numpy as np

from . import __version__
from .bounds import alpha_grid, saturation_table
from .errors import InvalidArgument
from .fitting import FQ_OPT_MODELS, T_OPT_MODELS, ScalingModel, fit_amplitude
from .protocols import CRITERIA, KINDS, ProtocolRun, ProtocolSpec, find_optimal
from .verification import SUITES, bruteforce_qfi_series, run_suite

SIMULATE_COLUMNS = ["t", "syy", "szz", "cross", "theta_opt", "f_q", "xi2"]
SWEEP_COLUMNS = ["protocol", "n", "t_opt", "f_q_opt", "theta_opt", "evaluations", "xi2_opt", "status"]
FIT_COLUMNS = ["protocol", "quantity", "model", "amplitude", "std_error", "residual_rms", "n_points"]
BOUNDS_COLUMNS = [
    "alpha", "d", "gamma", "beta_bound", "bound_regime", "beta_protocol", "protocol_regime", "saturated",
]
VERIFY_COLUMNS = ["suite", "trials", "passed_trials", "max_violation", "passed"]

GLOBAL_DEFAULTS = {"seed": 0, "jobs": 1, "format": None, "out": None, "config": None}
_NOT_ECHOED = ("func", "out", "config")


class UsageError(Exception):
    pass


# --- parsing helpers -----------------------------------------------------------

def parse_range(text: str, cast=float) -> list:
    """'a:b:step' (inclusive) or a comma-separated list."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise UsageError(f"bad range {text!r}")
        if cast is int:
            return list(range(int(start), int(stop) + 1, int(step)))
        return [float(a) for a in alpha_grid(start, stop, step)]
    return [cast(p) for p in text.split(",") if p.strip()]


def read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.floating, float)):
        f = float(value)
        return f if math.isfinite(f) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render(rows: list[dict], columns: list[str], fmt: str, args) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])
        return buf.getvalue()
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}
    meta = {"version": __version__, "command": args.command, "seed": args.seed, "config": config}
    return json.dumps(_json_safe({"meta": meta, "rows": rows}), indent=2) + "\n"


def emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _spec_from_args(args, kind=None, n=None) -> ProtocolSpec:
    kind = kind or args.protocol
    b = args.b_field if kind == "tnt" else None
    return ProtocolSpec(kind, n or args.n, args.chi, b, args.direction)


# --- commands --------------------------------------------------------------------

def cmd_simulate(args) -> tuple[list[dict], list[str], int]:
    spec = _spec_from_args(args)
    t_max = args.t_max if args.t_max is not None else 2.0 * spec.guess_time()
    times = np.linspace(0.0, t_max, args.t_points)
    records = ProtocolRun(spec).records(times)
    rows = [
        {
            "t": r.t, "syy": r.covariance.syy, "szz": r.covariance.szz, "cross": r.covariance.cross,
            "theta_opt": r.theta_opt, "f_q": r.f_q, "xi2": r.xi2,
        }
        for r in records
    ]
    columns = list(SIMULATE_COLUMNS)
    if args.oracle_check:
        brute = bruteforce_qfi_series(spec, times)
        for row, b in zip(rows, brute):
            row["oracle_discrepancy"] = abs(row["f_q"] - b) / max(1.0, abs(b))
        columns.append("oracle_discrepancy")
    return rows, columns, 0


def _optimize_job(job):
    kind, n, chi, b_field, direction, criterion = job
    try:
        spec = ProtocolSpec(kind, n, chi, b_field if kind == "tnt" else None, direction)
        res = find_optimal(spec, criterion=criterion)
        return {"protocol": kind, "n": n, **asdict(res), "status": "ok"}
    except Exception as exc:  # per-row failures are reported, not fatal
        return {"protocol": kind, "n": n, "status": f"error: {exc}"}


def _run_jobs(jobs: list, n_workers: int) -> list[dict]:
    if n_workers <= 1 or len(jobs) <= 1:
        return [_optimize_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_optimize_job, jobs))


def cmd_optimize(args):
    rows = _run_jobs([(args.protocol, args.n, args.chi, args.b_field, args.direction, args.criterion)], 1)
    return rows, SWEEP_COLUMNS, int(any(r["status"] != "ok" for r in rows))


def cmd_sweep(args):
    kinds = [k.strip().lower() for k in args.protocols.split(",") if k.strip()]
    for k in kinds:
        if k not in KINDS:
            raise UsageError(f"unknown protocol {k!r}")
    n_values = parse_range(args.n, int)
    jobs = [(k, n, args.chi, args.b_field, args.direction, args.criterion) for k in kinds for n in n_values]
    rows = _run_jobs(jobs, args.jobs)
    return rows, SWEEP_COLUMNS, int(any(r["status"] != "ok" for r in rows))


def _read_rows(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["rows"]
    return list(csv.DictReader(io.StringIO(text)))


def fit_sweep_rows(rows: list[dict], t_model: str | None = None, fq_model: str | None = None) -> list[dict]:
    """Fit t_opt and f_q_opt against N for each protocol present in sweep rows."""
    out = []
    kinds = [k for k in KINDS if any(r["protocol"] == k for r in rows)]
    for kind in kinds:
        good = [r for r in rows if r["protocol"] == kind and r.get("status", "ok") == "ok"]
        n = np.array([float(r["n"]) for r in good])
        for quantity, models, override in (
            ("t_opt", T_OPT_MODELS, t_model),
            ("f_q_opt", FQ_OPT_MODELS, fq_model),
        ):
            model = ScalingModel.parse(override) if override else models[kind]
            y = np.array([float(r[quantity]) for r in good])
            fit = fit_amplitude(n, y, model)
            out.append({"protocol": kind, "quantity": quantity, "model": model.describe(), **asdict(fit)})
    return out


def cmd_fit(args):
    rows = fit_sweep_rows(_read_rows(args.input), args.t_model, args.fq_model)
    return rows, FIT_COLUMNS, 0


def cmd_bounds(args):
    rows = []
    for d in parse_range(args.d, int):
        for gamma in parse_range(args.gammas):
            for row in saturation_table(d, gamma, parse_range(args.alphas)):
                r = asdict(row)
                r["d"] = r.pop("dim")
                rows.append(r)
    return rows, BOUNDS_COLUMNS, 0


def cmd_verify(args):
    names = SUITES if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}")
    results = [run_suite(name, seed=args.seed, trials=args.trials) for name in names]
    rows = [r.as_dict() for r in results]
    return rows, VERIFY_COLUMNS, int(not all(r.passed for r in results))


DEFAULT_FORMAT = {"fit": "json", "verify": "json"}


# --- parser ------------------------------------------------------------------------

def _add_globals(p: argparse.ArgumentParser):
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    g.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="parallel worker processes")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value config file")


def _add_protocol_flags(p: argparse.ArgumentParser, single: bool = True):
    if single:
        p.add_argument("--protocol", choices=KINDS, default="tat")
        p.add_argument("--n", type=int, default=100, help="number of spins")
    p.add_argument("--chi", type=float, default=1.0)
    p.add_argument("--b-field", type=float, default=None, help="TnT transverse field (default chi*N/2)")
    p.add_argument("--direction", choices=("+x", "-x"), default="-x", help="initial polarisation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezetime", description=__doc__.splitlines()[0])
    _add_globals(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="QFI trajectory of one protocol")
    _add_protocol_flags(p)
    p.add_argument("--t-max", type=float, default=None, help="default: twice the optimal-time scale")
    p.add_argument("--t-points", type=int, default=2001)
    p.add_argument("--oracle-check", action="store_true", help="add a brute-force discrepancy column")
    p.set_defaults(func=cmd_simulate)

    for name, func, help_ in (
        ("optimize", cmd_optimize, "optimal time and QFI for one protocol"),
        ("sweep", cmd_sweep, "optimal time and QFI over protocols x N"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_protocol_flags(p, single=name == "optimize")
        if name == "sweep":
            p.add_argument("--protocols", default="tat,tnt,oat")
            p.add_argument("--n", default="400:1000:50", help="start:stop:step or comma list")
        p.add_argument("--criterion", choices=CRITERIA, default="squeezing")
        p.set_defaults(func=func)

    p = sub.add_parser("fit", help="fit scaling amplitudes to a sweep file")
    p.add_argument("--input", required=True, help="sweep output (CSV or JSON)")
    p.add_argument("--t-model", default=None, help="override, e.g. power:-2/3 or log_over_n")
    p.add_argument("--fq-model", default=None, help="override, e.g. power:2")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("bounds", help="bound vs protocol exponent table")
    p.add_argument("--d", default="1", help="lattice dimension(s)")
    p.add_argument("--gammas", default="1,0.5")
    p.add_argument("--alphas", default="0:4:0.1")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", default="all", help=f"all or comma list of {','.join(SUITES)}")
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    for sp_ in sub.choices.values():
        _add_globals(sp_)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        cfg = read_config(cfg_path)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        explicit = set()
        for action in sub._actions + parser._actions:
            if any(opt in argv or any(a.startswith(opt + "=") for a in argv) for opt in action.option_strings):
                explicit.add(action.dest)
        for action in sub._actions:
            if action.dest in cfg and action.dest not in explicit:
                raw = cfg[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes", "on")
                elif action.type is not None:
                    value = action.type(raw)
                else:
                    value = raw
                if action.choices is not None and value not in action.choices:
                    raise UsageError(f"config value {raw!r} not allowed for {action.dest}")
                setattr(args, action.dest, value)
    for key, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    if args.format is None:
        args.format = DEFAULT_FORMAT.get(args.command, "csv")
    return args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        rows, columns, status = args.func(args)
    except (UsageError, InvalidArgument, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"squeezetime: error: {exc}", file=sys.stderr)
        return 2
    emit(render(rows, columns, args.format, args), args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
