"""Command-line front end.

Subcommands: ``gen-instance`` (write a synthetic instance file), ``design``
(solve the optimal design for an instance file), ``run`` (replicated regret
experiments with CSV + per-run records) and ``lower-bound`` (Monte Carlo
verification of the two impossibility constructions).

Exit codes: 0 success, 1 usage/parse error, 2 convergence failure,
3 partial failure (some replica rows errored).  A flat ``key = value``
config file can seed the ``run`` subcommand; explicit flags override it and
the ODPO_SEED environment variable overrides any configured seed.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from .design import format_design, frank_wolfe_design, kw_certificate
from .errors import InstanceParseError
from .evaluation import (
    ExperimentConfig,
    aggregate_table,
    format_hypercube_report,
    format_online_report,
    report_to_csv,
    run_experiment,
    verify_hypercube_lower_bound,
    verify_online_lower_bound,
)
from .instances import (
    make_random_instance,
    make_rare_direction_instance,
    read_instance,
    write_instance,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2
EXIT_PARTIAL_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors, per the exit contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _str_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="odpo",
        description="Optimal-design preference-pair selection toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("gen-instance", help="write a synthetic instance file",
                       formatter_class=fmt)
    p.add_argument("--kind", choices=["random", "rare-direction"], default="random")
    p.add_argument("--N", type=int, default=20, help="number of contexts")
    p.add_argument("--K", type=int, default=4, help="arms per context (random kind)")
    p.add_argument("--d", type=int, default=4, help="embedding dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output instance path")

    p = sub.add_parser("design", help="solve the optimal design for an instance",
                       formatter_class=fmt)
    p.add_argument("--instance", required=True, help="instance file to read")
    p.add_argument("--lambda-design", type=float, default=1e-6,
                   help="ridge added to the design information matrix")
    p.add_argument("--epsilon", type=float, default=0.5,
                   help="approximation slack: stop at g <= (1+epsilon)*d")
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--out", required=True, help="output design path")

    p = sub.add_parser("run", help="replicated regret experiments",
                       formatter_class=fmt)
    p.add_argument("--config", default=None, help="flat key = value config file")
    p.add_argument("--instance", default=None, help="run on this instance file")
    p.add_argument("--generator", choices=["random", "rare-direction"],
                   default=None, help="synthetic instance family")
    p.add_argument("--N", type=int, default=None, help="contexts per instance")
    p.add_argument("--K", type=int, default=None, help="arms per context")
    p.add_argument("--d", type=_int_list, default=None,
                   help="comma list of dimensions")
    p.add_argument("--T", type=_int_list, default=None,
                   help="comma list of duel budgets")
    p.add_argument("--algorithms", type=_str_list, default=None,
                   help="comma list from: odpo,uniform,greedy")
    p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--lambda-design", type=float, default=None)
    p.add_argument("--lambda-est", type=float, default=None,
                   help="estimation ridge (default 1/d)")
    p.add_argument("--jobs", type=int, default=None, help="parallel replicas")
    p.add_argument("--out-dir", default=None, help="directory for CSV and records")

    p = sub.add_parser("lower-bound", help="verify an impossibility construction",
                       formatter_class=fmt)
    p.add_argument("--kind", required=True, help="online or hypercube")
    p.add_argument("--T", type=int, default=5)
    p.add_argument("--d", type=int, default=8, help="dimension (hypercube kind)")
    p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="report path (default stdout only)")

    return parser


RUN_DEFAULTS = {
    "generator": "random",
    "N": 40,
    "K": 4,
    "d": [4],
    "T": [64],
    "algorithms": ["odpo"],
    "replicas": 20,
    "seed": 0,
    "epsilon": 0.5,
    "delta": 0.05,
    "lambda_design": 1e-6,
    "lambda_est": None,
    "jobs": 1,
    "out_dir": "runs",
    "instance": None,
}

_CONFIG_PARSERS = {
    "generator": str,
    "N": int,
    "K": int,
    "d": _int_list,
    "T": _int_list,
    "algorithms": _str_list,
    "replicas": int,
    "seed": int,
    "epsilon": float,
    "delta": float,
    "lambda_design": float,
    "lambda_est": float,
    "jobs": int,
    "out_dir": str,
    "instance": str,
}


def parse_config_file(path: str) -> dict:
    """Flat grammar: one ``key = value`` per line, '#' comments allowed."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_PARSERS[key](value)
    return values


def _cmd_gen_instance(args) -> int:
    try:
        if args.kind == "random":
            inst = make_random_instance(args.N, args.K, args.d, args.seed)
        else:
            inst = make_rare_direction_instance(args.N, args.d, args.seed)
    except ValueError as e:
        print(f"odpo gen-instance: {e}", file=sys.stderr)
        return EXIT_USAGE
    write_instance(inst, args.out)
    print(f"wrote {args.out} (N={inst.num_contexts}, K={inst.max_arms_per_context}, "
          f"d={inst.dimension}, L={inst.num_diff_arms})")
    return EXIT_OK


def _cmd_design(args) -> int:
    try:
        inst = read_instance(args.instance)
    except (OSError, InstanceParseError) as e:
        print(f"odpo design: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        import warnings

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fw = frank_wolfe_design(
                inst.diff_matrix,
                ridge=args.lambda_design,
                epsilon=args.epsilon,
                max_iters=args.max_iters,
            )
        for w in caught:
            print(f"odpo design: warning: {w.message}", file=sys.stderr)
    except Exception as e:
        print(f"odpo design: {e}", file=sys.stderr)
        return EXIT_USAGE
    cert = kw_certificate(fw.design, inst.diff_matrix, args.lambda_design)
    meta = {
        "lambda": args.lambda_design,
        "epsilon": args.epsilon,
        "iterations": fw.iterations,
        "final_g": fw.final_g,
        "logdet": cert.logdet,
        "support_size": cert.support_size,
        "optimal_within_epsilon": fw.converged,
        "span_deficient": fw.span_deficient,
    }
    with open(args.out, "w") as fh:
        fh.write(format_design(fw.design, meta))
    print(f"wrote {args.out}: g={fw.final_g:.6g} after {fw.iterations} iterations "
          f"(support {cert.support_size})")
    if fw.span_deficient:
        print("odpo design: SpanDeficient: pool does not span the space",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    if not fw.converged:
        print("odpo design: MaxIters: best iterate written", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _resolve_run_settings(args) -> dict:
    settings = dict(RUN_DEFAULTS)
    if args.config:
        settings.update(parse_config_file(args.config))
    for key in RUN_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    env_seed = os.environ.get("ODPO_SEED")
    if env_seed is not None:
        settings["seed"] = int(env_seed)
    return settings


def _cmd_run(args) -> int:
    try:
        settings = _resolve_run_settings(args)
    except (OSError, ValueError) as e:
        print(f"odpo run: {e}", file=sys.stderr)
        return EXIT_USAGE

    instance = None
    generator = settings["generator"]
    if settings["instance"]:
        try:
            instance = read_instance(settings["instance"])
        except (OSError, InstanceParseError) as e:
            print(f"odpo run: {e}", file=sys.stderr)
            return EXIT_USAGE
        generator = "file"
        grid = tuple((instance.dimension, T) for T in settings["T"])
    else:
        grid = tuple((d, T) for d in settings["d"] for T in settings["T"])

    for name in ("replicas", "jobs"):
        if settings[name] < 1:
            print(f"odpo run: {name} must be >= 1", file=sys.stderr)
            return EXIT_USAGE

    config = ExperimentConfig(
        grid=grid,
        algorithms=tuple(settings["algorithms"]),
        replicas=settings["replicas"],
        master_seed=settings["seed"],
        generator=generator,
        N=settings["N"],
        K=settings["K"],
        instance=instance,
        lambda_design=settings["lambda_design"],
        lambda_est=settings["lambda_est"],
        epsilon=settings["epsilon"],
        delta=settings["delta"],
        jobs=settings["jobs"],
    )
    try:
        report = run_experiment(config)
    except ValueError as e:
        print(f"odpo run: {e}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = Path(settings["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.csv").write_text(report_to_csv(report))
    with open(out_dir / "runs.jsonl", "w") as fh:
        for rec in report.records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(aggregate_table(report))
    print(f"wrote {out_dir / 'results.csv'} and {out_dir / 'runs.jsonl'}")
    if any(row.status != "ok" for row in report.rows):
        return EXIT_PARTIAL_FAILURE
    return EXIT_OK


def _cmd_lower_bound(args) -> int:
    seed = args.seed
    env_seed = os.environ.get("ODPO_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    if args.kind == "online":
        replicas = args.replicas if args.replicas is not None else 2000
        if args.T < 2 or replicas < 1:
            print("odpo lower-bound: need T >= 2 and replicas >= 1", file=sys.stderr)
            return EXIT_USAGE
        report = verify_online_lower_bound(args.T, replicas=replicas, seed=seed)
        text = format_online_report(report)
    elif args.kind == "hypercube":
        replicas = args.replicas if args.replicas is not None else 200
        if args.d < 1 or args.T < args.d or replicas < 1:
            print("odpo lower-bound: need d >= 1 and T >= d and replicas >= 1",
                  file=sys.stderr)
            return EXIT_USAGE
        report = verify_hypercube_lower_bound(
            args.d, args.T, replicas=replicas, seed=seed
        )
        text = format_hypercube_report(report)
    else:
        print(f"odpo lower-bound: unknown kind {args.kind!r}; "
              "usage: --kind online|hypercube", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen-instance":
        return _cmd_gen_instance(args)
    if args.command == "design":
        return _cmd_design(args)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "lower-bound":
        return _cmd_lower_bound(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
