"""
Command-line front end.

    cqed fig --id fig4 [--out DIR] [--grid-points N] [--grid-width W] [--plot]
    cqed rb87 [--config FILE] [--distance-km L]
    cqed scenario --config FILE [--out DIR]
    cqed audit --seed S --n N
    cqed list

Exit codes: 0 ok, 1 usage or configuration problem, 2 numerical failure.
"""
import argparse
import os
import sys
from typing import List, Optional, Tuple

import pandas as pd

from . import __version__, console
from .classes import FIGURE_IDS, FigureRun, validated
from .config_loader import get_figure_definition, load_scenario
from .errors import ConfigurationError, DomainError, NumericalError
from .figures.loader import discover_figures, get_figure
from .figures.rb87 import run_rb87, run_sweep
from .figures.utils import FigureResult, save
from .helpers import write_csv

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class CqedArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def run_figure(request: FigureRun) -> Tuple[FigureResult, List[str]]:
    module = get_figure(request.id)
    console.banner(f"{request.id}: {get_figure_definition(request.id).get('description', '')}")
    result = module.run(request, get_figure_definition(request.id))
    result.metadata.setdefault("command", request.id)
    paths = save(result, request.out_dir, plot=request.plot)
    for path in paths:
        console.success(f"wrote {path}")
    return result, paths


def _add_grid_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--grid-points", type=int, default=None, help="frequency samples (odd)")
    parser.add_argument("--grid-width", type=float, default=None, help="grid half width W")


def build_parser() -> argparse.ArgumentParser:
    parser = CqedArgumentParser(prog="cqed", description="Heralded atom-atom entanglement simulator")
    parser.add_argument("--version", action="version", version=f"cqed {__version__}")
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CqedArgumentParser)

    fig = commands.add_parser("fig", help="regenerate one figure as CSV (and SVG)")
    fig.add_argument("--id", required=True, choices=FIGURE_IDS)
    fig.add_argument("--plot", action="store_true", help="also render <id>.svg")
    _add_grid_options(fig)

    rb87 = commands.add_parser("rb87", help="87Rb end-to-end scenario")
    rb87.add_argument("--config", default=None, help="scenario file replacing the built-in parameters")
    rb87.add_argument("--distance-km", type=float, default=0.0, help="A-B distance, reported as travel time")
    _add_grid_options(rb87)

    scenario = commands.add_parser("scenario", help="run a scenario file")
    scenario.add_argument("--config", required=True)
    scenario.add_argument("--out", default=None)

    audit = commands.add_parser("audit", help="closed forms against the ODE oracle")
    audit.add_argument("--seed", type=int, default=1)
    audit.add_argument("--n", type=int, default=100)
    audit.add_argument("--out", default="out")

    commands.add_parser("list", help="list available figures")
    return parser


def _run_scenario(path: str, out_dir: Optional[str]) -> int:
    config = load_scenario(path)
    out_dir = out_dir or config.output.directory
    console.banner(f"scenario {config.name}")
    record = run_rb87(config)
    console.summary_table(config.name, record)
    target = os.path.join(out_dir, f"{config.name}.csv")
    write_csv(pd.DataFrame([record]), target, {"command": "scenario", "scenario": path,
                                               "units": config.units.mode})
    console.success(f"wrote {target}")

    if config.sweep is not None:
        for written in save(run_sweep(config), out_dir, plot=config.output.plot):
            console.success(f"wrote {written}")
    elif config.output.plot:
        console.warn("output.plot needs a sweep section; no plot written")
    return EXIT_OK


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "list":
        for name in discover_figures():
            print(name)
        return EXIT_OK
    if args.command == "scenario":
        return _run_scenario(args.config, args.out)

    fields = {"out_dir": args.out}
    if args.command == "fig":
        fields.update(id=args.id, plot=args.plot, grid_points=args.grid_points, grid_width=args.grid_width)
    elif args.command == "rb87":
        fields.update(id="rb87", config_path=args.config, distance_km=args.distance_km,
                      grid_points=args.grid_points, grid_width=args.grid_width)
    elif args.command == "audit":
        fields.update(id="audit", seed=args.seed, n_draws=args.n)
    request = validated(FigureRun, fields)
    result, _ = run_figure(request)
    return result.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        console.error(f"usage: {e}")
        return EXIT_USAGE
    console.set_quiet(args.quiet)
    try:
        return dispatch(args)
    except (ConfigurationError, DomainError) as e:
        console.error(str(e))
        return EXIT_USAGE
    except NumericalError as e:
        console.error(f"{type(e).__name__}: {e}")
        return EXIT_NUMERICAL
    except OSError as e:
        console.error(f"cannot write output: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
