"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 parse/schema or parameter
error, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from ..engine import run_decomposition
from ..errors import (ConeError, ConsistencyError, ParameterError,
                      ScenarioError, ValidationFailed)
from ..families import (BlowupFanoParams, HypersurfaceParams, PkPlParams,
                        gen_blowup_fano_ci, gen_hypersurface_p1_pn,
                        gen_pk_pl_scenario, gen_pk_pl_trivial,
                        kodaira_dim_pk_pl)
from ..model import dumps_scenario, load_scenario, validate
from .render import FORMATS, RenderSpec, render

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3
SUFFIX = {"text": "txt", "json": "json", "svg": "svg", "ascii": "txt"}


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="text", help="report format (default: text)")
    p.add_argument("--trace", action="store_true", help="include the per-stage trace")
    p.add_argument("--out", type=Path, help="write the report here instead of standard output")
    p.add_argument("--figure", type=Path,
                   help="also write a fan diagram (.svg, .png or .pdf) to this path")
    p.add_argument("--width", type=int, default=640, help="SVG canvas width in pixels")
    p.add_argument("--height", type=int, default=640, help="SVG canvas height in pixels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moricone",
        description="Chamber decomposition of Mov(X) for Picard-rank-2 varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="decompose one or more scenario files")
    run.add_argument("scenarios", nargs="+", type=Path)
    _add_output_options(run)

    val = sub.add_parser("validate", help="check a scenario against the engine's hypotheses")
    val.add_argument("scenario", type=Path)

    gen = sub.add_parser("gen", help="generate a scenario for a built-in family")
    gsub = gen.add_subparsers(dest="family", required=True)
    p1pn = gsub.add_parser("p1pn", help="hypersurface of bidegree (a, b) in P^1 x P^n")
    p1pn.add_argument("--a", type=int, required=True)
    p1pn.add_argument("--b", type=int, required=True)
    p1pn.add_argument("--n", type=int, required=True)
    blowup = gsub.add_parser("blowup", help="blowup of a Fano complete intersection at a point")
    blowup.add_argument("--N", type=int, required=True, dest="N")
    blowup.add_argument("--degrees", type=_degrees, required=True)
    pkpl = gsub.add_parser("pkpl", help="hypersurface of bidegree (a, b) in P^k x P^(n+1-k)")
    for name in ("k", "a", "b", "n"):
        pkpl.add_argument(f"--{name}", type=int, required=True)
    for p in (p1pn, blowup, pkpl):
        mode = p.add_mutually_exclusive_group(required=True)
        mode.add_argument("--emit-scenario", action="store_true", help="print the scenario JSON")
        mode.add_argument("--run", action="store_true", help="decompose and print the report")
        _add_output_options(p)

    kappa = sub.add_parser("kappa", help="Kodaira dimension of a hypersurface in P^k x P^(n+1-k)")
    for name in ("k", "a", "b", "n"):
        kappa.add_argument(f"--{name}", type=int, required=True)
    return parser


def _emit(data: bytes, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()
    else:
        out.write_bytes(data)


def _render_report(report, args, out: Path | None) -> None:
    spec = RenderSpec(args.format, args.trace, args.width, args.height)
    _emit(render(report, spec), out)
    if args.figure is not None:
        from .figures import save_figure
        save_figure(report, args.figure, args.width, args.height)


def _cmd_run(args) -> int:
    if len(args.scenarios) > 1:
        if args.out is None or not args.out.is_dir():
            raise ScenarioError("--out must name an existing directory when several scenarios are given")
        if args.figure is not None:
            raise ScenarioError("--figure takes a single scenario")
    for path in args.scenarios:
        report = run_decomposition(load_scenario(path))
        out = args.out
        if len(args.scenarios) > 1:
            out = args.out / f"{path.stem}.{SUFFIX[args.format]}"
        _render_report(report, args, out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    vr = validate(load_scenario(args.scenario))
    sys.stdout.write(vr.format())
    if not vr.ok:
        for c in vr.failures():
            print(f"{c.name}: {c.detail}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.family == "p1pn":
        scenario = gen_hypersurface_p1_pn(HypersurfaceParams(args.a, args.b, args.n))
    elif args.family == "blowup":
        scenario = gen_blowup_fano_ci(BlowupFanoParams(args.N, args.degrees))
    else:
        params = PkPlParams(args.k, args.a, args.b, args.n)
        if args.run:
            _render_report(gen_pk_pl_trivial(params), args, args.out)
            return EXIT_OK
        scenario = gen_pk_pl_scenario(params)
    if args.emit_scenario:
        _emit(dumps_scenario(scenario).encode("utf-8"), args.out)
    else:
        _render_report(run_decomposition(scenario), args, args.out)
    return EXIT_OK


def _cmd_kappa(args) -> int:
    value = kodaira_dim_pk_pl(PkPlParams(args.k, args.a, args.b, args.n))
    print("-inf" if value == -math.inf else value)
    return EXIT_OK


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "validate": _cmd_validate, "gen": _cmd_gen, "kappa": _cmd_kappa}
    try:
        return handler[args.command](args)
    except ValidationFailed as exc:
        sys.stderr.write(exc.report.format())
        return EXIT_INVALID
    except (ScenarioError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConsistencyError, ConeError) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    raise SystemExit(cli_main())
