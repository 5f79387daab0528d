"""Command-line driver: score a dataset, run an experiment, tabulate bounds.

Output files go under ``--out`` or, when that is omitted, the directory named
by ``AVGCLASS_OUT`` (default: the current directory). Each command writes a
``manifest.json`` beside its outputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .core import (
    abstention_threshold,
    log_ratios,
    predict_many,
    schedule_params,
    uniform_abstention_threshold,
)
from .experiments import SCENARIOS, ExperimentConfig, format_number, run_experiment
from .formats import FormatError, load_json, read_dataset, read_points, read_space
from .hypotheses import empirical_errors

OUT_ENV = "AVGCLASS_OUT"
PARAM_FLAGS = ("lam", "m", "class_size", "epsilon", "gamma", "eta", "delta", "volume", "delta_conf", "theta")
INT_PARAMS = ("m",)


class UsageError(ValueError):
    pass


@dataclass
class RunManifest:
    command: str
    config: dict
    version: str
    master_seed: int | None
    started: str
    finished: str = ""
    outputs: list = field(default_factory=list)

    def write(self, directory: Path) -> Path:
        path = directory / "manifest.json"
        self.outputs.append(str(path))
        self.finished = _now()
        path.write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")
        return path


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _out_dir(arg: str | None) -> Path:
    d = Path(arg or os.environ.get(OUT_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _number_or_auto(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


# ---------------------------------------------------------------------------
# score
# ---------------------------------------------------------------------------


def cmd_score(args) -> int:
    sample = read_dataset(args.dataset)
    space = read_space(args.space)
    points = read_points(args.points) if args.points else sample.X
    m = sample.m
    eta = args.eta
    if eta == "auto":
        eta = schedule_params(m, len(space), args.delta_conf, args.theta)[0]
    if args.delta == "auto":
        if args.uniform_delta:
            delta = uniform_abstention_threshold(m, len(space), args.delta_conf, eta)
        else:
            delta = abstention_threshold(m, args.delta_conf, eta)
    else:
        delta = args.delta
        if delta < 0:
            raise UsageError("delta must be nonnegative")
    errs = empirical_errors(space, sample)
    lhat = log_ratios(errs, space.prediction_matrix(points), eta, space.prior)
    pred = predict_many(lhat, delta)

    out_dir = _out_dir(args.out)
    path = out_dir / "scores.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "lhat", "prediction"])
        for i, (v, p) in enumerate(zip(lhat, pred)):
            w.writerow([i, format_number(v), int(p)])

    manifest = RunManifest(
        "score",
        dict(dataset=str(args.dataset), space=str(args.space), points=args.points and str(args.points),
             m=m, class_size=len(space), eta=eta, delta=delta, delta_mode=args.delta if args.delta == "auto" else "fixed",
             uniform_delta=bool(args.uniform_delta), delta_conf=args.delta_conf, theta=args.theta),
        _version(), None, _now(), [str(path)],
    )
    manifest.write(out_dir)

    print(f"m={m} hypotheses={len(space)} eta={format_number(eta)} delta={format_number(delta)}")
    counts = {k: int(np.count_nonzero(pred == k)) for k in (1, -1, 0)}
    print(f"predicted +1: {counts[1]}  predicted -1: {counts[-1]}  abstained: {counts[0]}")
    if not args.points:
        wrong = int(np.count_nonzero((pred != 0) & (pred != sample.y)))
        print(f"mistakes on the dataset: {wrong}")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------


def _experiment_config(args) -> ExperimentConfig:
    doc = load_json(args.config) if args.config else {}
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    scenario = args.scenario or doc.pop("scenario", None)
    doc.pop("scenario", None)
    if scenario is None:
        raise UsageError(f"no scenario given; valid scenarios: {', '.join(SCENARIOS)}")
    if args.seed is not None:
        doc["master_seed"] = args.seed
    if args.trials is not None:
        doc["trials"] = args.trials
    if args.workers is not None:
        doc["workers"] = args.workers
    return ExperimentConfig.for_scenario(scenario, **doc)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    started = _now()
    report = run_experiment(cfg)
    out_dir = _out_dir(args.out)
    json_path = out_dir / "report.json"
    csv_path = out_dir / "report.csv"
    json_path.write_text(report.to_json(), encoding="utf-8")
    csv_path.write_text(report.to_csv(), encoding="utf-8")
    RunManifest("experiment", cfg.as_dict(), _version(), cfg.master_seed, started,
                outputs=[str(json_path), str(csv_path)]).write(out_dir)
    print(f"scenario={cfg.scenario} trials={cfg.trials} seed={cfg.master_seed}")
    for k, v in report.aggregate.items():
        if isinstance(v, (int, float, bool, np.floating, np.integer)):
            print(f"{k}: {format_number(v)}")
    print(f"wrote {json_path} and {csv_path}")
    return 0


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def parse_sweep(text: str) -> tuple[str, list[float]]:
    """``name=start:stop:count`` (evenly spaced, inclusive) or ``name=v1,v2,...``."""
    name, sep, body = text.partition("=")
    name = name.strip().replace("-", "_")
    if not sep or not body:
        raise UsageError(f"sweep must look like name=start:stop:count or name=v1,v2; got {text!r}")
    try:
        if ":" in body:
            start, stop, count = body.split(":")
            values = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            values = [float(v) for v in body.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse sweep values {body!r}") from None
    if not values:
        raise UsageError("sweep has no values")
    return name, values


def _coerce(name: str, value: float):
    if name in INT_PARAMS:
        if not float(value).is_integer():
            raise UsageError(f"{name} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def cmd_bounds(args) -> int:
    name = args.bound
    if name not in bnd.BOUND_PARAMS:
        raise UsageError(f"unknown bound {name!r}; supported bounds: {', '.join(bnd.BOUND_PARAMS)}")
    needed = bnd.BOUND_PARAMS[name]
    fixed = {p: getattr(args, p) for p in PARAM_FLAGS if getattr(args, p) is not None}
    sweep_name, values = parse_sweep(args.sweep) if args.sweep else (None, [None])
    if sweep_name is not None and sweep_name not in needed:
        raise UsageError(f"bound {name!r} takes parameters {', '.join(needed)}; cannot sweep {sweep_name!r}")
    missing = [p for p in needed if p not in fixed and p != sweep_name]
    if missing:
        raise UsageError(f"bound {name!r} needs {', '.join('--' + p.replace('_', '-') for p in missing)}")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bound", *needed, "quantity", "value", "clamped", "valid"])
    for v in values:
        params = {p: _coerce(p, fixed[p]) for p in needed if p != sweep_name}
        if sweep_name is not None:
            params[sweep_name] = _coerce(sweep_name, v)
        for rep in bnd.evaluate(name, **params):
            w.writerow([name, *(format_number(params[p]) for p in needed), rep.name,
                        format_number(rep.value), format_number(rep.clamped), format_number(rep.valid)])
    sys.stdout.write(buf.getvalue())
    if args.out:
        out_dir = _out_dir(args.out)
        path = out_dir / "bounds.csv"
        path.write_text(buf.getvalue(), encoding="utf-8")
        RunManifest("bounds", dict(bound=name, fixed=fixed, sweep=args.sweep), _version(), None, _now(),
                    [str(path)]).write(out_dir)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avgclass", description="Averaged classifier with abstention.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("score", help="score a dataset with the abstaining averaged classifier")
    s.add_argument("--dataset", required=True, help="training CSV (f0..f{k-1},label)")
    s.add_argument("--space", required=True, help="hypothesis-space description (JSON)")
    s.add_argument("--points", help="CSV of instances to score (default: the dataset rows)")
    s.add_argument("--eta", type=_number_or_auto, required=True, help="learning rate, or 'auto' for the sample-size schedule")
    s.add_argument("--delta", type=_number_or_auto, default="auto", help="abstention width or 'auto' (default)")
    s.add_argument("--delta-conf", type=float, default=0.05, help="confidence level for auto widths")
    s.add_argument("--theta", type=float, default=0.25, help="schedule exponent for --eta auto")
    s.add_argument("--uniform-delta", action="store_true",
                   help="with --delta auto, use the width valid for every eta >= 1 at once")
    s.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    s.set_defaults(func=cmd_score)

    e = sub.add_parser("experiment", help="run a named Monte Carlo experiment")
    e.add_argument("--config", help="experiment config (JSON)")
    e.add_argument("--scenario", help=f"scenario name: {', '.join(SCENARIOS)}")
    e.add_argument("--seed", type=int, help="master seed override")
    e.add_argument("--trials", type=int, help="trial count override")
    e.add_argument("--workers", type=int, help="worker threads (output does not depend on this)")
    e.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    e.set_defaults(func=cmd_experiment)

    b = sub.add_parser("bounds", help="tabulate a bound over a parameter sweep (CSV to stdout)")
    b.add_argument("--bound", required=True, help=f"one of: {', '.join(bnd.BOUND_PARAMS)}")
    b.add_argument("--sweep", help="name=start:stop:count or name=v1,v2,...")
    for p in PARAM_FLAGS:
        b.add_argument("--" + p.replace("_", "-"), dest=p, type=float)
    b.add_argument("--out", help="also write bounds.csv and a manifest here")
    b.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bounds":
        # Bound tables share the library defaults for confidence and schedule exponent.
        if args.delta_conf is None and "delta_conf" in bnd.BOUND_PARAMS.get(args.bound, ()):
            args.delta_conf = 0.05
        if args.theta is None and "theta" in bnd.BOUND_PARAMS.get(args.bound, ()):
            args.theta = 0.25
    try:
        return args.func(args)
    except (FormatError, UsageError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"avgclass {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
