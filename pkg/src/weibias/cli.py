"""Command-line front end.

Subcommands: ``fit`` (estimate parameters from a data file), ``simulate``
(Monte Carlo benchmark grid to CSV), ``bias-curve`` (shape/scale bias factors
as a function of the uncensored proportion), ``kl`` (divergence between two
models). Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
failure.
"""

import argparse
import sys

from .datasets import DataFileError, load_sample
from .distribution import WeibullParams
from .divergence import kl_censored, kl_complete
from .errors import EstimationError
from .estimators import bias_censored, fit_mlc, fit_ml, fit_mmle, fit_ross, scale_bias_factors, shape_bias_factor
from .simulation import SimulationConfig, run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; the CLI contract reserves 2
    # for data errors, so route usage problems through our own handler
    def error(self, message):
        raise _UsageError(message)


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_FITTERS = {
    "ML": fit_ml,
    "ROSS": fit_ross,
    "MLC": fit_mlc,
    "MMLE": fit_mmle,
}


def _cmd_fit(args) -> int:
    try:
        data = load_sample(args.data)
    except (OSError, DataFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.methods:
        methods = [m.strip().upper() for m in args.methods.split(",") if m.strip()]
        unknown = [m for m in methods if m not in _FITTERS]
        if unknown:
            print(f"error: unknown methods {unknown}", file=sys.stderr)
            return EXIT_USAGE
    else:
        methods = ["ML", "ROSS", "MLC", "MMLE"] if data.is_complete else ["ML", "MLC", "MMLE"]

    lines = ["method,k,lambda,p_hat,converged,iterations"]
    failed = False
    for method in methods:
        try:
            if method == "MMLE":
                rep = fit_mmle(data, p_plugin=args.p_plugin)
            else:
                rep = _FITTERS[method](data)
        except (EstimationError, OverflowError, ArithmeticError) as exc:
            print(f"{method}: {exc}", file=sys.stderr)
            failed = True
            continue
        p_hat = "" if rep.p_hat is None else f"{rep.p_hat:.6g}"
        lines.append(
            f"{rep.method},{rep.params.shape_k:.6g},{rep.params.scale_lambda:.6g},"
            f"{p_hat},{rep.converged},{rep.iterations}"
        )
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.output:
        _write(text, args.output)
    return EXIT_NUMERIC if failed else EXIT_OK


def _cmd_simulate(args) -> int:
    methods = tuple(m.strip().upper() for m in args.methods.split(",") if m.strip())
    if args.grid == "paper-complete":
        config = SimulationConfig.paper_complete(args.replicates, args.seed, methods)
    elif args.grid == "paper-censored":
        config = SimulationConfig.paper_censored(args.replicates, args.seed, methods)
    else:
        if not (args.n_values and args.k_values and args.p_values):
            raise _UsageError("--grid custom requires --n-values, --k-values and --p-values")
        config = SimulationConfig(
            n_values=tuple(int(v) for v in args.n_values.split(",")),
            k_star_values=tuple(float(v) for v in args.k_values.split(",")),
            p_values=tuple(float(v) for v in args.p_values.split(",")),
            replicates=args.replicates,
            master_seed=args.seed,
            methods=methods,
        )
    report = run(config, workers=args.workers)
    _write(report.to_csv(), args.output)
    return EXIT_OK


def _cmd_bias_curve(args) -> int:
    if not (0.0 < args.p_min < args.p_max < 1.0):
        raise _UsageError("need 0 < p-min < p-max < 1")
    if args.steps < 2:
        raise _UsageError("--steps must be >= 2")
    lines = ["p,f,bias_k,f1,f2"]
    for i in range(args.steps):
        p = args.p_min + (args.p_max - args.p_min) * i / (args.steps - 1)
        adj = bias_censored(WeibullParams(args.k, 1.0), args.n, p)
        f = shape_bias_factor(p)
        f1, f2 = scale_bias_factors(p)
        lines.append(f"{p:.6g},{f:.6g},{adj.bias_k:.6g},{f1:.6g},{f2:.6g}")
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_kl(args) -> int:
    generator = WeibullParams(args.k0, args.lambda0)
    candidate = WeibullParams(args.k1, args.lambda1)
    if args.censor_time is None:
        value = kl_complete(generator, candidate)
    else:
        value = kl_censored(generator, candidate, args.censor_time)
    print(f"{value:.12g}")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="weibias", description="Weibull estimation with first-order bias correction")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit estimators to a data file")
    p_fit.add_argument("data", help="data file: value[,indicator] per line, optional '# censor_time=c'")
    p_fit.add_argument("--methods", default=None, help="comma list from ML,ROSS,MLC,MMLE (default: all applicable)")
    p_fit.add_argument("--p-plugin", choices=("model", "d_over_n"), default="model",
                       help="uncensored-proportion plug-in used by censored MMLE")
    p_fit.add_argument("--output", default=None, help="also write the result table to this CSV file")

    p_sim = sub.add_parser("simulate", help="run the Monte Carlo benchmark")
    p_sim.add_argument("--grid", choices=("paper-complete", "paper-censored", "custom"), required=True)
    p_sim.add_argument("--replicates", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--methods", default="ML,MLC,MMLE")
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--n-values", default=None, help="custom grid: comma list of sample sizes")
    p_sim.add_argument("--k-values", default=None, help="custom grid: comma list of true shapes")
    p_sim.add_argument("--p-values", default=None, help="custom grid: comma list of uncensored proportions (1 = complete)")
    p_sim.add_argument("--output", default=None, help="CSV output path (default: stdout)")

    p_curve = sub.add_parser("bias-curve", help="tabulate the censoring bias factors over p")
    p_curve.add_argument("--k", type=float, default=1.0)
    p_curve.add_argument("--n", type=int, default=20)
    p_curve.add_argument("--p-min", type=float, default=0.05)
    p_curve.add_argument("--p-max", type=float, default=0.999)
    p_curve.add_argument("--steps", type=int, default=100)
    p_curve.add_argument("--output", default=None)

    p_kl = sub.add_parser("kl", help="KL divergence between two Weibull models")
    p_kl.add_argument("--k0", type=float, required=True)
    p_kl.add_argument("--lambda0", type=float, required=True)
    p_kl.add_argument("--k1", type=float, required=True)
    p_kl.add_argument("--lambda1", type=float, required=True)
    p_kl.add_argument("--censor-time", type=float, default=None)
    return parser


_COMMANDS = {
    "fit": _cmd_fit,
    "simulate": _cmd_simulate,
    "bias-curve": _cmd_bias_curve,
    "kl": _cmd_kl,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DataFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EstimationError, OverflowError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
