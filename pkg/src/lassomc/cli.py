"""Command-line front end: `uq bench <problem> ...`.

Runs a convergence study and writes the records CSV (and optionally JSON).
Flags mirror the keys of a flat key=value config file; explicit flags
override the file. Exit codes: 0 success, 2 configuration error, 3 runtime
or integration failure.
"""

import argparse
import sys

from . import harness, lasso
from .errors import ConfigError, IntegrationError, LassoMcError, ParameterError

_DEFAULTS = {
    "dim": None,
    "methods": "mc,lmc",
    "budgets": "50,100,200",
    "repeats": 20,
    "s_folds": 5,
    "big_m": 10_000,
    "seed": 42,
    "split_fraction": 0.8,
    "candidate_fractions": "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
    "lambda_strategy": "cv",
    "transform": "identity",
    "pce_degree": 3,
    "out": None,
    "json": None,
    "summary": None,
}


def _parse_strategy(text):
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "cv":
        return lasso.CrossValidation(int(arg) if arg else 5)
    if kind == "sparsity":
        return lasso.SparsityTarget(float(arg) if arg else 0.95)
    if kind == "fixed":
        if not arg:
            raise ConfigError("fixed lambda strategy needs a value: fixed:<lambda>")
        return lasso.FixedLambda(float(arg))
    raise ConfigError(f"unknown lambda strategy {text!r} (cv[:folds], sparsity[:frac], fixed:<v>)")


def _parse_transform(text):
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "identity":
        return lasso.IDENTITY
    if kind == "absshift":
        return lasso.AbsShift(float(arg) if arg else 0.5)
    raise ConfigError(f"unknown transform {text!r} (identity, absshift[:center])")


def _read_config_file(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"bad config line (want key=value): {line!r}")
            values[key.strip().replace("-", "_")] = value.strip()
    unknown = set(values) - set(_DEFAULTS) - {"problem"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return values


def _build_parser():
    parser = argparse.ArgumentParser(prog="uq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    bench = sub.add_parser("bench", help="run a convergence study")
    bench.add_argument("problem", nargs="?", help="linear | sobol | fput")
    bench.add_argument("--config", help="flat key=value config file; flags override")
    bench.add_argument("--dim", type=int)
    bench.add_argument("--methods", help="comma list: mc,lasso,lmc,static-mfmc,...")
    bench.add_argument("--budgets", help="comma list of ascending budgets N")
    bench.add_argument("--repeats", type=int)
    bench.add_argument("--s-folds", type=int, dest="s_folds")
    bench.add_argument("--big-m", type=int, dest="big_m")
    bench.add_argument("--seed", type=int)
    bench.add_argument("--split-fraction", type=float, dest="split_fraction")
    bench.add_argument("--candidate-fractions", dest="candidate_fractions")
    bench.add_argument("--lambda-strategy", dest="lambda_strategy")
    bench.add_argument("--transform")
    bench.add_argument("--pce-degree", type=int, dest="pce_degree")
    bench.add_argument("--out", help="records CSV path")
    bench.add_argument("--json", help="records JSON path")
    bench.add_argument("--summary", help="summary CSV path")
    return parser


def _resolve(args):
    values = dict(_DEFAULTS)
    if args.config:
        values.update(_read_config_file(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    problem = args.problem or values.get("problem")
    if not problem:
        raise ConfigError("no problem given (positional argument or config key)")
    return problem, values


def _adjusted_budgets(values, methods):
    budgets = [int(b) for b in str(values["budgets"]).split(",") if b != ""]
    s = int(values["s_folds"])
    if "lmc" not in methods:
        return budgets
    adjusted = []
    for b in budgets:
        down = (b // s) * s
        if down != b:
            print(
                f"warning: budget {b} not divisible by S={s}; running N={down}",
                file=sys.stderr,
            )
        if down >= 2 * s:
            adjusted.append(down)
        else:
            raise ConfigError(f"budget {b} too small for S={s}")
    return adjusted


def run_bench(args):
    problem, values = _resolve(args)
    methods = tuple(
        harness.canonical_method(m) for m in str(values["methods"]).split(",") if m
    )
    budgets = _adjusted_budgets(values, methods)
    cfg = harness.ExperimentConfig(
        problem=problem,
        dim=int(values["dim"]) if values["dim"] is not None else None,
        methods=methods,
        budgets=tuple(budgets),
        repeats=int(values["repeats"]),
        s_folds=int(values["s_folds"]),
        big_m=int(values["big_m"]),
        lambda_strategy=_parse_strategy(str(values["lambda_strategy"])),
        transform=_parse_transform(str(values["transform"])),
        split_fraction=float(values["split_fraction"]),
        candidate_fractions=tuple(
            float(f) for f in str(values["candidate_fractions"]).split(",") if f
        ),
        pce_degree=int(values["pce_degree"]),
        base_seed=int(values["seed"]),
        out=values["out"],
        json_out=values["json"],
    )
    records = harness.run_experiment(cfg)
    problem_obj = harness.make_problem(cfg.problem, cfg.dim)
    if cfg.out:
        harness.write_csv(records, cfg.out)
        print(f"wrote {len(records)} records to {cfg.out}")
    if cfg.json_out:
        harness.write_json(records, cfg.json_out)
        print(f"wrote {len(records)} records to {cfg.json_out}")
    if values["summary"]:
        rows = harness.summarize(records, problem_obj.reference())
        harness.write_csv(rows, values["summary"], kind="summary")
        print(f"wrote {len(rows)} summary rows to {values['summary']}")
    if not (cfg.out or cfg.json_out or values["summary"]):
        for row in harness.summarize(records, problem_obj.reference()):
            print(
                f"{row.problem} {row.method:>14} N={row.N:>6} "
                f"rel_err_mean={row.rel_err_mean_avg:.4e} "
                f"rel_err_std={row.rel_err_std_avg:.4e}"
            )
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            return run_bench(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, LassoMcError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
