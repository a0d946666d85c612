"""Command-line interface.

Exit status: 0 on success, 1 when a computation fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import SCHEMA, ConfigError, load_config
from .deformation import DEFAULT_N_LEVELS
from .experiments import DEFAULT_FIELD_RANGE, DEFAULT_TEMPERATURE_RANGE, Axis, SweepConfig, run_sweep
from .graph import CATALOG_NAMES, GraphError, catalog, graph_properties, read_graph_file
from .output import emit_svg, emit_sweep_csvs, fmt, render_csv
from .qfi import DEFAULT_FD_DELTA, FD_POPULATION_CUTOFF, POPULATION_CUTOFF
from .spectral import DEFAULT_TOL_DEG, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL

EPILOG = f"""\
default tolerances:
  degeneracy tolerance (--tol-deg)          {DEFAULT_TOL_DEG:g}
  finite-difference step ([tolerances])    {DEFAULT_FD_DELTA:g}
  QFI population cutoff                     {POPULATION_CUTOFF:g}
  finite-difference QFI population cutoff   {FD_POPULATION_CUTOFF:g}
  Jacobi off-diagonal threshold             {JACOBI_REL_TOL:g} x ||H||_F, at most {JACOBI_MAX_SWEEPS} sweeps

sweep config file schema (INI):{SCHEMA}"""

# subcommand -> (observable, swept/fixed parameter kind)
_POINT_COMMANDS = {
    "spectrum": ("spectrum", "field"),
    "qfi-field": ("qfi_field", "field"),
    "qfi-temp": ("qfi_temp", "temperature"),
    "boltzmann": ("boltzmann_rate", "temperature"),
    "deformation": ("deformation", "field"),
}


class _Formatter(argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_graph_options(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--graph",
        action="append",
        metavar="NAME",
        help=f"catalog graph, repeatable, or 'all' ({', '.join(CATALOG_NAMES)}); default all",
    )
    group.add_argument("--graph-file", action="append", metavar="PATH", help="graph file, repeatable")


def _add_common(p: argparse.ArgumentParser) -> None:
    _add_graph_options(p)
    p.add_argument("--J", type=float, action="append", metavar="J", help="coupling, repeatable; default 1")
    p.add_argument("--tol-deg", type=float, default=DEFAULT_TOL_DEG, help="degeneracy tolerance")
    p.add_argument("--out", metavar="PATH", help="CSV output file (default: standard output)")
    p.add_argument("--svg", metavar="PATH", help="also draw an SVG line plot")
    p.add_argument("--width", type=int, default=800, help="SVG width")
    p.add_argument("--height", type=int, default=600, help="SVG height")


def _add_axis(p: argparse.ArgumentParser, symbol: str, default_range) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(f"--{symbol}", type=float, metavar="VALUE", help=f"single {symbol} value")
    group.add_argument(
        f"--{symbol}-range",
        nargs=3,
        metavar=("START", "STOP", "STEPS"),
        help=f"{symbol} grid, e.g. {' '.join(str(v) for v in default_range)}",
    )
    p.add_argument(f"--{symbol}-spacing", choices=("linear", "log"), default="linear", help=f"{symbol} grid spacing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfim-qfi",
        description="Quantum Fisher information of four-qubit (or custom) transverse-field Ising sensors.",
        epilog=EPILOG,
        formatter_class=_Formatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("catalog", help="list catalog graphs with their static properties", formatter_class=_Formatter)
    p.add_argument("--J", type=float, default=-1.0, help="coupling used for the zero-field ground degeneracy")

    p = sub.add_parser("spectrum", help="eigenvalues vs h", epilog=EPILOG, formatter_class=_Formatter)
    _add_common(p)
    _add_axis(p, "h", DEFAULT_FIELD_RANGE)

    p = sub.add_parser("qfi-field", help="field QFI F_h", epilog=EPILOG, formatter_class=_Formatter)
    _add_common(p)
    p.add_argument("--T", type=float, required=True, help="temperature")
    _add_axis(p, "h", DEFAULT_FIELD_RANGE)

    for name, help_text in (("qfi-temp", "temperature QFI F_T"), ("boltzmann", "ground population rate dp0/dT")):
        p = sub.add_parser(name, help=help_text, epilog=EPILOG, formatter_class=_Formatter)
        _add_common(p)
        p.add_argument("--h", type=float, required=True, help="transverse field")
        _add_axis(p, "T", DEFAULT_TEMPERATURE_RANGE)

    p = sub.add_parser("deformation", help="spectral deformation D_n and perturbative QFI", epilog=EPILOG,
                       formatter_class=_Formatter)
    _add_common(p)
    p.add_argument("--n", type=_positive_int, default=DEFAULT_N_LEVELS, help="number of lowest levels")
    _add_axis(p, "h", DEFAULT_FIELD_RANGE)

    p = sub.add_parser("sweep", help="run a sweep described by a config file", epilog=EPILOG,
                       formatter_class=_Formatter)
    p.add_argument("--config", required=True, metavar="PATH", help="INI config file")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides [output] dir)")
    p.add_argument("--workers", type=_positive_int, help="worker processes (overrides [output] workers)")
    p.add_argument("--svg", action="store_true", help="also draw one SVG per observable and J")
    return parser


def parse_cli(argv=None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _graph_specs(args, parser) -> tuple[str, ...]:
    if args.graph_file:
        for path in args.graph_file:
            try:
                read_graph_file(path)
            except (OSError, GraphError) as exc:
                parser.error(str(exc))
        return tuple(args.graph_file)
    names = args.graph or ["all"]
    if any(n.lower() == "all" for n in names):
        return CATALOG_NAMES
    known = {n.upper(): n for n in CATALOG_NAMES}
    bad = [n for n in names if n.upper() not in known]
    if bad:
        parser.error(f"unknown graph(s) {', '.join(bad)}; choose from {', '.join(CATALOG_NAMES)} or all")
    return tuple(known[n.upper()] for n in names)


def _axis(args, parser, symbol: str) -> Axis:
    name = "field" if symbol == "h" else "temperature"
    single = getattr(args, symbol)
    try:
        if single is not None:
            return Axis(name, (single,))
        start, stop, steps = getattr(args, f"{symbol}_range")
        return Axis.from_range(name, float(start), float(stop), int(steps), getattr(args, f"{symbol}_spacing"))
    except ValueError as exc:
        parser.error(f"--{symbol}/--{symbol}-range: {exc}")


def _run_point_command(args, parser) -> int:
    observable, axis_kind = _POINT_COMMANDS[args.command]
    symbol = "h" if axis_kind == "field" else "T"
    axis = _axis(args, parser, symbol)
    if args.command == "qfi-field":
        fixed = args.T
    elif args.command in ("qfi-temp", "boltzmann"):
        fixed = args.h
    else:
        fixed = 1.0  # spectrum and deformation do not depend on T
    try:
        cfg = SweepConfig(
            graphs=_graph_specs(args, parser),
            J=tuple(args.J or [1.0]),
            axis=axis,
            fixed=fixed,
            observables=(observable,),
            tol_deg=args.tol_deg,
            n_levels=getattr(args, "n", DEFAULT_N_LEVELS),
        )
    except ValueError as exc:
        parser.error(str(exc))
    result = run_sweep(cfg)
    text = render_csv(result, observable)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.svg:
        if len(cfg.J) > 1:
            parser.error("--svg draws one coupling; pass a single --J")
        emit_svg(result, args.svg, observable=observable, width=args.width, height=args.height)
    return 0


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _run_catalog(args) -> int:
    sys.stdout.write("graph,edges,total_degree,ground_degeneracy,edge_list\n")
    for g in catalog():
        props = graph_properties(g, args.J)
        edge_list = " ".join(f"{u}-{v}" for u, v in g.edges)
        sys.stdout.write(f"{g.name},{props.edge_count},{props.total_degree},{props.ground_degeneracy},{edge_list}\n")
    return 0


def _run_sweep(args, parser) -> int:
    try:
        cfg, opts = load_config(args.config)
    except ConfigError as exc:
        parser.error(str(exc))
    out_dir = Path(args.out) if args.out else opts.directory
    if out_dir is None:
        parser.error("no output directory: pass --out or set [output] dir")
    workers = args.workers or opts.workers
    result = run_sweep(cfg, workers=workers)
    written = emit_sweep_csvs(result, out_dir)
    if args.svg or opts.svg:
        for obs in cfg.observables:
            for J in cfg.J:
                path = out_dir / f"{obs}_J{fmt(J)}.svg"
                emit_svg(result, path, observable=obs, J=float(J), width=opts.width, height=opts.height)
                written.append(path)
    (out_dir / "metadata.json").write_text(json.dumps(result.metadata, indent=2, default=str) + "\n")
    for path in written:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            return _run_catalog(args)
        if args.command == "sweep":
            return _run_sweep(args, parser)
        return _run_point_command(args, parser)
    except (GraphError, ConfigError) as exc:
        parser.error(str(exc))
    except Exception as exc:  # computational or I/O failure
        print(f"tfim-qfi: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
