"""
Command-line front end.

    evospec estimate series.csv
    evospec scr series.csv --n 72 --B-n 32 --n-mc 1000
    evospec test stationarity series.csv
    evospec fit-tvarma series.csv --p 1 --q 0 --output model.json
    evospec validate series.csv --model model.json
    evospec simulate --model tvar1 --N 800 --seed 1 --output x.csv
    evospec experiment coverage --model tvar1 --N 400 --n 54 --B-n 32 --seed 1
    evospec experiment validation --model tvar_whittle --N 800 --seed 1

Exit codes: 0 success, 1 usage error, 2 numeric or data error.
"""

import argparse
import sys
import time

import pandas as pd

from . import __version__
from .access import (
    ingest_csv,
    load_model,
    load_model_spec,
    run_record,
    save_model,
    write_csv,
    write_json,
)
from .config import DEFAULT_N_MC, MIN_SERIES_LENGTH, WHITTLE_RESTARTS
from .experiments import TEST_KINDS, coverage_experiment, power_reports, validation_experiment
from .grid import build_grid
from .hypotheses import NULL_BUILDERS, run_test, significance_code, validate_model_spectrum
from .scr import bootstrap_distribution, build_scr, critical_value, gumbel_critical_value
from .simulators import PRESETS, simulate
from .spectral import remove_local_mean, spectral_surface
from .tuning import CONSTRAINTS, mv_select
from .utils import bcolors, bold
from .whittle import (
    aic_table,
    best_order,
    default_u_grid,
    default_window,
    fit_tvarma,
    model_surface,
)

USAGE_ERROR = 1
DATA_ERROR = 2


class UsageError(Exception):
    """

    Inconsistent combination of command-line flags.

    """


class Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; usage errors here exit with 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def demean_spec(text):
    """

    Parse --demean local:<bandwidth>.

    """

    kind, _, bandwidth = text.partition(":")

    if kind != "local" or not bandwidth.isdigit() or int(bandwidth) < 1:
        raise argparse.ArgumentTypeError(
            f"expected local:<bandwidth> with a positive integer bandwidth, got {text!r}"
        )

    return int(bandwidth)


def status(args, message):

    if not args.quiet:
        print(message, file=sys.stderr)


def _add_output(parser):

    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", default=None, help="output file; stdout when omitted")
    parser.add_argument("--quiet", action="store_true", help="no status lines or progress bars")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads")


def _add_series(parser, tuning=True):

    parser.add_argument("input", help="single-column CSV of observations")
    parser.add_argument(
        "--demean", type=demean_spec, default=None, metavar="local:<bandwidth>"
    )

    if tuning:
        parser.add_argument("--n", type=int, default=None, help="window length")
        parser.add_argument("--B-n", dest="B_n", type=int, default=None, help="lag bandwidth")
        parser.add_argument(
            "--n-bounds",
            type=int,
            nargs=2,
            default=None,
            metavar=("N_L", "N_R"),
            help="window range searched by MV selection",
        )
        parser.add_argument("--constraint", choices=CONSTRAINTS, default="log")


def _add_inference(parser, seed_required=False):

    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--n-mc", dest="N_MC", type=int, default=DEFAULT_N_MC)
    parser.add_argument("--seed", type=int, default=None if seed_required else 0, required=seed_required)


def build_parser():

    parser = Parser(
        prog="evospec",
        description="Evolutionary spectra of locally stationary series with "
        "simultaneous confidence regions.",
    )
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=Parser)
    commands.required = True

    p = commands.add_parser("estimate", help="lag-window estimate on the inference grid")
    _add_series(p)
    _add_output(p)

    p = commands.add_parser("scr", help="simultaneous confidence region")
    _add_series(p)
    _add_inference(p)
    p.add_argument("--method", choices=("bootstrap", "gumbel"), default="bootstrap")
    p.add_argument("--form", choices=("ratio", "exp"), default="ratio")
    _add_output(p)

    p = commands.add_parser("test", help="white-noise, stationarity or separability test")
    p.add_argument("null", choices=sorted(NULL_BUILDERS))
    _add_series(p)
    _add_inference(p)
    _add_output(p)

    p = commands.add_parser("fit-tvarma", help="local Whittle fit of a tvARMA(p, q) model")
    _add_series(p, tuning=False)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--aic-max-p", type=int, default=None)
    p.add_argument("--aic-max-q", type=int, default=None)
    p.add_argument("--window", type=int, default=None, help="local window length")
    p.add_argument("--u-points", type=int, default=9, help="number of fit time points")
    p.add_argument("--restarts", type=int, default=WHITTLE_RESTARTS)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = commands.add_parser("validate", help="test a fitted tvARMA spectrum against the SCR")
    _add_series(p)
    _add_inference(p)
    p.add_argument("--model", default=None, help="model file written by fit-tvarma")
    _add_output(p)

    p = commands.add_parser("simulate", help="simulate a series from a model")
    p.add_argument("--model", required=True, help=f"preset ({', '.join(PRESETS)}) or JSON file")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--N", type=int, required=True, help="series length")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = commands.add_parser("experiment", help="coverage, power or model-validation study")
    p.add_argument("kind", choices=("coverage", "power", "validation"))
    p.add_argument("--model", required=True, help="preset or JSON file; a preset family for power")
    p.add_argument("--delta", type=float, default=0.0, help="departure for preset families")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--B-n", dest="B_n", type=int, default=None)
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--form", choices=("ratio", "exp"), default="ratio")
    p.add_argument("--deltas", type=float, nargs="+", default=[0.0, 0.2, 0.4])
    p.add_argument("--test-kind", choices=sorted(TEST_KINDS), default="stationarity")
    p.add_argument("--constraint", choices=CONSTRAINTS, default="window")
    p.add_argument("--p", type=int, default=1, help="fitted AR order for validation")
    p.add_argument("--q", type=int, default=0, help="fitted MA order for validation")
    p.add_argument("--window", type=int, default=None, help="local Whittle window for validation")
    _add_inference(p, seed_required=True)
    _add_output(p)

    return parser


def load_series(args):

    series = ingest_csv(args.input, min_length=MIN_SERIES_LENGTH)

    if args.demean is not None:
        series = remove_local_mean(series, args.demean)
        status(args, f"Removed local mean, bandwidth {bold(args.demean)}")

    return series


def resolve_tuning(args, series):
    """

    (n, B_n) from the flags, or by MV selection when both are absent.

    """

    if (args.n is None) != (args.B_n is None):
        raise UsageError("give both --n and --B-n, or neither to select them by MV")

    if args.n is not None:
        return args.n, args.B_n, False

    status(args, "Selecting (n, B_n) by minimum volatility...")

    selection = mv_select(
        series,
        bounds=args.n_bounds,
        constraint=args.constraint,
        n_jobs=args.jobs,
        progress=not args.quiet,
    )

    status(args, f"Selected {bold(f'n={selection.n}, B_n={selection.B_n}')}")

    return selection.n, selection.B_n, True


def base_config(args, **extra):

    config = {
        key: value
        for key, value in vars(args).items()
        if key not in ("format", "output", "quiet")
    }
    config.update(extra)

    return config


def emit(args, payload, frame, config, seed=None, wall_time=None, grid=None):

    if args.format == "json":
        write_json(run_record(payload, config, seed=seed, wall_time=wall_time, grid=grid), args.output)
    else:
        meta = {"version": __version__, "config": config, "seed": seed, "wall_time": wall_time}
        write_csv(frame, meta, args.output)

    if args.output is not None:
        status(args, f"{bcolors.OKGREEN}Wrote{bcolors.ENDC} {bold(args.output)}")


def cmd_estimate(args):

    start = time.perf_counter()

    series = load_series(args)
    n, B_n, selected = resolve_tuning(args, series)

    grid = build_grid(series.N, n, B_n)
    surface = spectral_surface(series, grid)

    config = base_config(args, n=n, B_n=B_n, C_n=grid.C_n, N=series.N, mv_selected=selected)

    emit(
        args,
        {"values": surface.values.tolist()},
        surface.to_frame(),
        config,
        wall_time=time.perf_counter() - start,
        grid=grid,
    )


def cmd_scr(args):

    start = time.perf_counter()

    if args.method == "gumbel" and args.form == "exp":
        raise UsageError("the Gumbel critical value only supports --form ratio")

    series = load_series(args)
    n, B_n, selected = resolve_tuning(args, series)

    grid = build_grid(series.N, n, B_n)

    if args.method == "bootstrap":
        dist = bootstrap_distribution(
            series.N, grid, N_MC=args.N_MC, seed=args.seed, n_jobs=args.jobs, progress=not args.quiet
        )
        gamma = critical_value(dist, args.alpha)
    else:
        gamma = gumbel_critical_value(args.alpha, B_n, grid.C_n, n)

    center = spectral_surface(series, grid)
    scr = build_scr(center, gamma, args.alpha, form=args.form, source=args.method)

    status(args, f"{scr.method} SCR at alpha={args.alpha}: gamma = {bold(f'{gamma:.4f}')}")

    config = base_config(args, n=n, B_n=B_n, C_n=grid.C_n, N=series.N, mv_selected=selected)

    emit(
        args,
        scr.to_dict(),
        scr.to_frame(),
        config,
        seed=args.seed,
        wall_time=time.perf_counter() - start,
        grid=grid,
    )


def _report_test(args, result, start, selected, name):

    code = significance_code(result.p_value)
    verdict = (
        f"{bcolors.FAIL}reject{bcolors.ENDC}" if result.reject else f"{bcolors.OKGREEN}accept{bcolors.ENDC}"
    )

    status(
        args,
        f"{bold(name)}: statistic {result.statistic:.4g}, "
        f"p = {result.p_value:.4f} {code}, {verdict} at alpha={args.alpha}",
    )

    frame = result.surface.to_frame()
    frame["null"] = result.null_surface.values.ravel()

    config = base_config(args, **result.config, mv_selected=selected)

    emit(
        args,
        result.to_dict(),
        frame,
        config,
        seed=args.seed,
        wall_time=time.perf_counter() - start,
        grid=result.surface.grid,
    )


def cmd_test(args):

    start = time.perf_counter()

    series = load_series(args)
    n, B_n, selected = resolve_tuning(args, series)

    result = run_test(
        series,
        args.null,
        n,
        B_n,
        N_MC=args.N_MC,
        alpha=args.alpha,
        seed=args.seed,
        n_jobs=args.jobs,
        progress=not args.quiet,
    )

    _report_test(args, result, start, selected, f"{args.null} test")


def cmd_fit_tvarma(args):

    start = time.perf_counter()

    aic = args.aic_max_p is not None or args.aic_max_q is not None

    if aic and (args.aic_max_p is None or args.aic_max_q is None):
        raise UsageError("give both --aic-max-p and --aic-max-q")

    if aic and (args.p is not None or args.q is not None):
        raise UsageError("give either --p/--q or --aic-max-p/--aic-max-q, not both")

    if not aic and (args.p is None or args.q is None):
        raise UsageError("fit-tvarma needs --p and --q, or --aic-max-p and --aic-max-q")

    series = load_series(args)

    window = args.window
    if window is None:
        window = (
            default_window(series.N, args.aic_max_p, args.aic_max_q)
            if aic
            else default_window(series.N, args.p, args.q)
        )

    u_grid = default_u_grid(series.N, window, args.u_points)
    fit_kwargs = {"restarts": args.restarts, "seed": args.seed}

    table = None

    if aic:
        status(args, "Selecting orders by AIC...")
        table = aic_table(
            series, args.aic_max_p, args.aic_max_q, u_grid, window, n_jobs=args.jobs, **fit_kwargs
        )
        p, q = best_order(table)
    else:
        p, q = args.p, args.q

    model = fit_tvarma(series, p, q, u_grid, window, n_jobs=args.jobs, **fit_kwargs)

    status(args, f"Fitted {bold(f'tvARMA({p}, {q})')} at {len(u_grid)} time points, window {window}")

    config = base_config(args, p=p, q=q, window=window, N=series.N, u_grid=u_grid.tolist())
    wall_time = time.perf_counter() - start

    if args.format == "json" and args.output is not None:
        save_model(model, args.output, config=config, seed=args.seed, wall_time=wall_time)
        status(args, f"{bcolors.OKGREEN}Wrote{bcolors.ENDC} {bold(args.output)}")
        return

    frame = pd.DataFrame({"u": model.u_grid, "sigma2": model.sigma2})
    for i in range(p):
        frame[f"a{i + 1}"] = model.ar_coeffs[:, i]
    for j in range(q):
        frame[f"b{j + 1}"] = model.ma_coeffs[:, j]

    payload = {"model": model.to_dict()}
    if table is not None:
        payload["aic"] = table.to_dict(orient="records")

    emit(args, payload, frame, config, seed=args.seed, wall_time=wall_time)


def cmd_validate(args):

    start = time.perf_counter()

    if args.model is None:
        raise UsageError("validate needs --model")

    model = load_model(args.model)
    series = load_series(args)
    n, B_n, selected = resolve_tuning(args, series)

    grid = build_grid(series.N, n, B_n)

    result = validate_model_spectrum(
        series,
        model_surface(model, grid),
        n,
        B_n,
        N_MC=args.N_MC,
        alpha=args.alpha,
        seed=args.seed,
        n_jobs=args.jobs,
    )

    _report_test(args, result, start, selected, f"tvARMA({model.p}, {model.q}) validation")


def check_delta(model, deltas):

    if model not in PRESETS and any(d != 0 for d in deltas):
        raise UsageError(f"departures delta only apply to presets ({', '.join(PRESETS)})")


def cmd_simulate(args):

    start = time.perf_counter()

    check_delta(args.model, [args.delta])

    spec = load_model_spec(args.model, args.delta)
    series = simulate(spec, args.N, args.seed)

    status(args, f"Simulated {bold(spec.name or spec.kind)}, N={args.N}")

    config = base_config(args, model=spec.to_dict())

    emit(
        args,
        {"values": series.values.tolist()},
        pd.DataFrame({"value": series.values}),
        config,
        seed=args.seed,
        wall_time=time.perf_counter() - start,
    )


def cmd_experiment(args):

    start = time.perf_counter()

    if (args.n is None) != (args.B_n is None):
        raise UsageError("give both --n and --B-n, or neither to select them by MV")

    check_delta(args.model, args.deltas if args.kind == "power" else [args.delta])

    shared = {
        "alpha": args.alpha,
        "reps": args.reps,
        "N_MC": args.N_MC,
        "seed": args.seed,
        "n_jobs": args.jobs,
        "progress": not args.quiet,
    }

    if args.kind == "coverage":

        tuning = "mv" if args.n is None else "fixed"

        if tuning == "mv":
            status(args, "Selecting (n, B_n) by minimum volatility on every replicate...")

        reports = [
            coverage_experiment(
                load_model_spec(args.model, args.delta),
                args.N,
                args.n,
                args.B_n,
                form=args.form,
                tuning=tuning,
                constraint=args.constraint,
                **shared,
            )
        ]
        status(args, f"Non-coverage {bold(f'{reports[0].coverage_or_rejection:.3f}')}")

    elif args.kind == "validation":

        reports = [
            validation_experiment(
                load_model_spec(args.model, args.delta),
                args.N,
                p=args.p,
                q=args.q,
                n=args.n,
                B_n=args.B_n,
                window=args.window,
                constraint=args.constraint,
                **shared,
            )
        ]
        status(args, f"Validation rejection rate {bold(f'{reports[0].coverage_or_rejection:.3f}')}")

    else:

        reports = power_reports(
            lambda delta: load_model_spec(args.model, delta),
            args.N,
            deltas=args.deltas,
            test_kind=args.test_kind,
            n=args.n,
            B_n=args.B_n,
            constraint=args.constraint,
            **shared,
        )

    frame = pd.DataFrame(
        {
            "delta": [r.delta for r in reports],
            "n": [r.n for r in reports],
            "B_n": [r.B_n for r in reports],
            "rate": [r.coverage_or_rejection for r in reports],
        }
    )

    config = base_config(args, n=reports[0].n, B_n=reports[0].B_n)

    emit(
        args,
        {"reports": [r.to_dict() for r in reports]},
        frame,
        config,
        seed=args.seed,
        wall_time=time.perf_counter() - start,
    )


COMMANDS = {
    "estimate": cmd_estimate,
    "scr": cmd_scr,
    "test": cmd_test,
    "fit-tvarma": cmd_fit_tvarma,
    "validate": cmd_validate,
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
}


def main(argv=None):
    """

    Run the command line and return the exit code.

    Args:
        argv (list): arguments, sys.argv[1:] when None

    """

    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    try:
        COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"evospec: error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as e:
        print(f"{bcolors.FAIL}error{bcolors.ENDC}: {e}", file=sys.stderr)
        return DATA_ERROR

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
