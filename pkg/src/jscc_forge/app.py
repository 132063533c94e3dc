#!/usr/bin/python3
"""
jscc-forge - Main Application

Command-line front end: load a model, dispatch to the information measures,
region builders, theorem checkers and simulators, and render the result.
"""

import argparse
import logging
import sys
import traceback
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .config import Config
from .criteria import (
    CMAC_THEOREMS,
    IC_THEOREMS,
    MAC_THEOREMS,
    check_sufficient_b1,
    minrate_cmac,
    minrate_fullcoop,
    minrate_ic,
    minrate_infosep,
    minrate_mac,
    strong_interference_check,
    twoway_achievable,
    twoway_outer,
)
from .exception_handler import (
    ConfigurationError,
    ExceptionHandler,
    JsccForgeError,
    PreconditionError,
    UnachievableError,
)
from .model_io import Model, bundled_models, load_model
from .prob_core import (
    InfoExpr,
    ProductInput,
    conditional_mutual_info,
    entropy_cond,
    factorized_no_mai,
    gacs_korner_common,
    identical,
    independent,
    markov,
    mutual_info,
    structure_check,
)
from .regions import achievable_hull, oracle_min_b, region_csv
from .report import ReportFormatter, to_json
from .simulate import Scheme, SimConfig, run_scheme
from .version import get_version

MINRATE_THEOREMS = MAC_THEOREMS + CMAC_THEOREMS + IC_THEOREMS + ("infosep", "fullcoop")
CHECK_THEOREMS = ("thm1", "thm4", "stronginterference", "twoway-ach")


class UsageError(Exception):
    """Raised for invalid flag combinations that argparse cannot detect."""


def _names(text: Optional[str]) -> Tuple[str, ...]:
    if not text:
        return ()
    return tuple(n.strip() for n in text.split(",") if n.strip())


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def parse_side(text: Optional[str]) -> Optional[Tuple[str, ...]]:
    """``auto`` (None: W_k when present), ``none`` (no side information) or names."""
    if text is None or text == "auto":
        return None
    if text == "none":
        return ()
    return _names(text)


def parse_mapping(text: str) -> Tuple[List[int], List[int]]:
    """Per-user symbol maps written ``0,1:1,0``."""
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"Mapping must look like '0,1:0,1', got '{text}'")
    return [int(v) for v in parts[0].split(",")], [int(v) for v in parts[1].split(",")]


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--model",
        help="Model file path or bundled model name",
    )
    common.add_argument("--out", help="Write the result to this file instead of stdout")
    common.add_argument("--grid", type=float, help="Simplex grid resolution")
    common.add_argument(
        "--tol",
        type=float,
        default=Config.BISECTION_TOLERANCE,
        help=f"Bisection tolerance on b (default: {Config.BISECTION_TOLERANCE})",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=Config.DEFAULT_SEED,
        help=f"Master random seed (default: {Config.DEFAULT_SEED})",
    )
    common.add_argument(
        "--trials",
        type=int,
        default=Config.DEFAULT_TRIALS,
        help=f"Simulation trials (default: {Config.DEFAULT_TRIALS})",
    )
    common.add_argument(
        "--threads",
        type=int,
        help="Worker threads (default: machine parallelism)",
    )
    common.add_argument(
        "--force",
        action="store_true",
        help="Continue in sufficient mode when a theorem precondition fails",
    )
    common.add_argument("--json", action="store_true", help="Emit JSON")
    common.add_argument(
        "--side",
        default="auto",
        help="Receiver side information: auto (W_k if present), none, or names",
    )
    common.add_argument("--b", type=float, help="Source-channel rate to test")
    common.add_argument(
        "--no-refine",
        action="store_true",
        help="Skip coordinate-ascent refinement of the region",
    )
    common.add_argument(
        "--color",
        choices=["auto", "always", "never"],
        default="auto",
        help="Control color output: auto (default), always, or never",
    )
    common.add_argument(
        "--debug",
        action="store_true",
        help=f"Enable debug logging to {Config.LOG_FILE}",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog=Config.APP_NAME,
        description=f"{Config.APP_NAME} - {Config.APP_TAGLINE}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"{Config.APP_NAME} {get_version()}",
        help="Show version number and exit",
    )
    parser.epilog = """
Examples:
  %(prog)s info entropy --model cover-salehi --of S1,S2
  %(prog)s minrate --model cover-salehi --theorem infosep --grid 0.02
  %(prog)s minrate --model cover-salehi-w1 --theorem thm2 --oracle
  %(prog)s minrate --model independent-xor --theorem thm3 --side none
  %(prog)s check --model shannon-multiplier --theorem twoway-ach --uncoded
  %(prog)s simulate --model independent-xor --scheme matched --m 10 --b 1.0

Models are JSON files (format version 1) or bundled names:
  """ + ", ".join(bundled_models())

    commands = parser.add_subparsers(dest="command", required=True)

    info = commands.add_parser("info", help="Information measures and structure")
    info_commands = info.add_subparsers(dest="what", required=True)
    entropy = info_commands.add_parser("entropy", parents=[common], help="H(of | given)")
    entropy.add_argument("--of", required=True, help="Comma-separated variables")
    entropy.add_argument("--given", help="Comma-separated conditioning variables")
    mi = info_commands.add_parser(
        "mi", parents=[common], help="Source I(of;with|given) or channel information"
    )
    mi.add_argument("--of", help="Source variables (first argument)")
    mi.add_argument("--with", dest="with_", help="Source variables (second argument)")
    mi.add_argument("--given", help="Conditioning variables")
    mi.add_argument("--expr", help="Channel expression, e.g. 'I(X1;Y|X2)'")
    mi.add_argument("--receiver", type=int, default=1)
    mi.add_argument("--p-x1", help="Input pmf of X1 (default uniform)")
    mi.add_argument("--p-x2", help="Input pmf of X2 (default uniform)")
    structure = info_commands.add_parser(
        "structure", parents=[common], help="Markov, independence and channel checks"
    )
    structure.add_argument(
        "--markov", action="append", default=[], help="A:B:C meaning A - B - C"
    )
    structure.add_argument(
        "--independent", action="append", default=[], help="A:B or A:B:GIVEN"
    )
    structure.add_argument("--identical", action="append", default=[], help="A:B")
    structure.add_argument(
        "--no-mai", action="store_true", help="Check the channel factorization"
    )
    info_commands.add_parser("common-part", parents=[common], help="Gacs-Korner common part")
    info_commands.add_parser("models", parents=[common], help="List bundled models")

    region = commands.add_parser("region", help="Channel achievable regions")
    region_commands = region.add_subparsers(dest="what", required=True)
    for name, text in (("hull", "Print the hull vertices"), ("dump", "CSV dump of the hull")):
        sub = region_commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("--receivers", type=int, help="1 or 2 (default: all)")
        sub.add_argument(
            "--cooperation", action="store_true", help="Allow joint p(x1, x2)"
        )

    minrate = commands.add_parser(
        "minrate", parents=[common], help="Minimum source-channel rate"
    )
    minrate.add_argument("--theorem", required=True, choices=MINRATE_THEOREMS)
    minrate.add_argument(
        "--oracle", action="store_true", help="Also run the brute-force grid oracle"
    )
    minrate.add_argument(
        "--oracle-grid", type=float, default=1e-3, help="Oracle grid resolution"
    )

    check = commands.add_parser("check", parents=[common], help="Sufficient conditions")
    check.add_argument("--theorem", required=True, choices=CHECK_THEOREMS)
    check.add_argument(
        "--uncoded", action="store_true", help="Evaluate the identity symbol mapping"
    )
    check.add_argument("--map", help="Evaluate the symbol mapping '0,1:0,1'")
    check.add_argument(
        "--classical", action="store_true", help="Classical strong interference form"
    )

    twoway = commands.add_parser("twoway", help="Two-way channel bounds")
    twoway_commands = twoway.add_subparsers(dest="what", required=True)
    twoway_commands.add_parser("outer", parents=[common], help="Lower bound on b")

    simulate = commands.add_parser(
        "simulate", parents=[common], help="Monte Carlo random-coding runs"
    )
    simulate.add_argument("--scheme", required=True, choices=[s.value for s in Scheme])
    simulate.add_argument("--m", type=int, required=True, help="Source block length")
    simulate.add_argument(
        "--epsilon", type=float, default=Config.CODEBOOK_EPSILON, help="Codebook slack"
    )
    simulate.add_argument("--rates", help="Bin rates R1,R2 for the separation scheme")
    simulate.add_argument("--map", help="Uncoded symbol mapping '0,1:0,1'")
    simulate.add_argument("--receivers", help="Comma-separated receivers (default: all)")
    simulate.add_argument("--csv", action="store_true", help="Emit a CSV row")
    simulate.add_argument(
        "--timing", action="store_true", help="Include wall-clock time in JSON output"
    )
    return parser


class CommandRunner:
    """Execute one parsed command and produce its textual output."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.formatter = ReportFormatter(args.color)
        self._model: Optional[Model] = None

    @property
    def model(self) -> Model:
        if self._model is None:
            if not self.args.model:
                raise UsageError("--model is required for this command")
            self._model = load_model(self.args.model)
        return self._model

    def emit(self, data: Any, text: Callable[[], str]) -> str:
        return to_json(data) if self.args.json else text() + "\n"

    def run(self) -> str:
        handler = {
            "info": self.run_info,
            "region": self.run_region,
            "minrate": self.run_minrate,
            "check": self.run_check,
            "twoway": self.run_twoway,
            "simulate": self.run_simulate,
        }[self.args.command]
        return handler()

    # ------------------------------------------------------------------

    def run_info(self) -> str:
        args = self.args
        if args.what == "models":
            names = bundled_models()
            return self.emit({"models": names}, lambda: "\n".join(names))
        source = self.model.source
        if args.what == "entropy":
            value = entropy_cond(source, _names(args.of), _names(args.given))
            label = f"H({args.of}{'|' + args.given if args.given else ''})"
            return self.emit(
                {"quantity": label, "value": value},
                lambda: self.formatter.format_value(label, value),
            )
        if args.what == "mi":
            return self._info_mi()
        if args.what == "structure":
            return self._info_structure()
        common = gacs_korner_common(source.marginal(("S1", "S2")))
        return self.emit(
            {
                "map1": list(common.map1),
                "map2": list(common.map2),
                "u_cardinality": common.u_cardinality,
                "u_entropy": common.u_entropy,
                "u_pmf": list(common.u_pmf),
            },
            lambda: self.formatter.format_common_part(common),
        )

    def _info_mi(self) -> str:
        args = self.args
        if args.expr:
            channel = self.model.require_channel()
            x1, x2 = channel.input_cardinalities
            p1 = _floats(args.p_x1) if args.p_x1 else [1.0 / x1] * x1
            p2 = _floats(args.p_x2) if args.p_x2 else [1.0 / x2] * x2
            expr = InfoExpr.parse(args.expr)
            value = mutual_info(channel, ProductInput.single(p1, p2), expr, args.receiver)
            label = expr.value.replace("Yk", f"Y{args.receiver}")
        else:
            if not args.of or not args.with_:
                raise UsageError("info mi needs --of and --with, or --expr")
            value = conditional_mutual_info(
                self.model.source, _names(args.of), _names(args.with_), _names(args.given)
            )
            label = f"I({args.of};{args.with_}{'|' + args.given if args.given else ''})"
        return self.emit(
            {"quantity": label, "value": value},
            lambda: self.formatter.format_value(label, value),
        )

    def _info_structure(self) -> str:
        args = self.args
        reports = []
        for text in args.markov:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"--markov needs A:B:C, got '{text}'")
            reports.append(structure_check(self.model.source, markov(*parts)))
        for text in args.independent:
            parts = text.split(":")
            if len(parts) not in (2, 3):
                raise UsageError(f"--independent needs A:B or A:B:GIVEN, got '{text}'")
            given = parts[2] if len(parts) == 3 else ()
            reports.append(
                structure_check(self.model.source, independent(parts[0], parts[1], given))
            )
        for text in args.identical:
            parts = text.split(":")
            if len(parts) != 2:
                raise UsageError(f"--identical needs A:B, got '{text}'")
            reports.append(structure_check(self.model.source, identical(*parts)))
        if args.no_mai:
            reports.append(
                structure_check(None, factorized_no_mai(self.model.require_channel()))
            )
        if not reports:
            raise UsageError("info structure needs at least one check")
        return self.emit(
            {"checks": [r.to_dict() for r in reports]},
            lambda: self.formatter.format_structure(reports),
        )

    def run_region(self) -> str:
        args = self.args
        hull = achievable_hull(
            self.model.require_channel(),
            receivers=args.receivers,
            grid_resolution=args.grid or Config.GRID_RESOLUTION,
            refine=not args.no_refine,
            cooperation=args.cooperation,
            threads=args.threads,
        )
        if args.what == "dump":
            return region_csv(hull)
        return self.emit(
            {
                "receivers": hull.receivers,
                "cooperation": hull.cooperation,
                "grid_resolution": hull.grid_resolution,
                "candidates": hull.candidate_count,
                "points": hull.points,
                "params": hull.params,
            },
            lambda: self.formatter.format_hull(hull),
        )

    def run_minrate(self) -> str:
        args = self.args
        model = self.model
        joint, channel = model.source, model.require_channel()
        side = parse_side(args.side)
        grid = args.grid or Config.GRID_RESOLUTION
        refine = not args.no_refine
        theorem = args.theorem

        threads = args.threads
        if theorem in MAC_THEOREMS:
            verdict = minrate_mac(
                joint, channel, theorem, args.b, side, grid, refine, args.force, args.tol,
                threads=threads,
            )
        elif theorem in CMAC_THEOREMS:
            verdict = minrate_cmac(
                joint, channel, theorem, args.b, side, grid, refine, args.force, args.tol,
                threads=threads,
            )
        elif theorem in IC_THEOREMS:
            verdict = minrate_ic(
                joint, channel, theorem, args.b, grid, refine, args.force, args.tol,
                threads=threads,
            )
        elif theorem == "infosep":
            verdict = minrate_infosep(
                joint, channel, side, args.b, grid, refine, args.tol, threads=threads
            )
        else:
            verdict = minrate_fullcoop(joint, channel, side, args.b)

        if args.oracle and verdict.entropy_vector is not None:
            verdict.extras["oracle_b_min"] = oracle_min_b(
                channel, verdict.entropy_vector, args.oracle_grid, threads=args.threads
            )
            verdict.extras["oracle_grid"] = args.oracle_grid

        references = dict(model.reference_values)
        if side == () and f"{theorem}-no-side" in references:
            references[theorem] = references[f"{theorem}-no-side"]
        data = verdict.to_dict()
        if theorem in references:
            data["reference"] = references[theorem]
        return self.emit(data, lambda: self.formatter.format_verdict(verdict, references))

    def _input(self) -> Optional[ProductInput]:
        args = self.args
        if not (args.uncoded or args.map):
            return None
        joint, channel = self.model.source, self.model.require_channel()
        if args.map:
            map1, map2 = parse_mapping(args.map)
        else:
            map1 = list(range(joint.cardinality("S1")))
            map2 = list(range(joint.cardinality("S2")))
        x1, x2 = channel.input_cardinalities
        return ProductInput.uncoded(map1, map2, x1, x2)

    def run_check(self) -> str:
        args = self.args
        joint, channel = self.model.source, self.model.require_channel()
        if args.theorem == "stronginterference":
            if args.b is None:
                raise UsageError("check --theorem stronginterference needs --b")
            report = strong_interference_check(
                joint,
                channel,
                args.b,
                grid_resolution=args.grid or Config.STRONG_INTERFERENCE_GRID,
                classical=args.classical,
                seed=args.seed,
            )
            return self.emit(
                report.to_dict(), lambda: self.formatter.format_strong_interference(report)
            )

        resolution = args.grid or Config.WITNESS_GRID_RESOLUTION
        if args.theorem == "twoway-ach":
            verdict = twoway_achievable(joint, channel, self._input(), resolution)
        else:
            scenario = "mac-thm1" if args.theorem == "thm1" else "cmac-thm4"
            verdict = check_sufficient_b1(
                joint, channel, scenario, self._input(), parse_side(args.side), resolution
            )
        return self.emit(verdict.to_dict(), lambda: self.formatter.format_verdict(verdict))

    def run_twoway(self) -> str:
        args = self.args
        model = self.model
        value = twoway_outer(
            model.source,
            model.require_channel(),
            grid_resolution=args.grid or Config.TWOWAY_GRID_RESOLUTION,
            refine=not args.no_refine,
        )
        references = model.reference_values
        return self.emit(
            {"b_lower": value, "reference": references.get("twoway-outer")},
            lambda: self.formatter.format_minrate_value(
                "twoway-outer", value, None, references
            ),
        )

    def run_simulate(self) -> str:
        args = self.args
        if args.b is None:
            raise UsageError("simulate needs --b")
        rates = None
        if args.rates:
            values = _floats(args.rates)
            if len(values) != 2:
                raise ConfigurationError("--rates needs two values R1,R2")
            rates = (values[0], values[1])
        cfg = SimConfig(
            m=args.m,
            b=args.b,
            scheme=Scheme(args.scheme),
            trials=args.trials,
            seed=args.seed,
            epsilon=args.epsilon,
            rates=rates,
            receivers=[int(k) for k in _names(args.receivers)] or None,
            threads=args.threads,
        )
        mapping = parse_mapping(args.map) if args.map else None
        model = self.model
        result = run_scheme(model.source, model.require_channel(), cfg, mapping)
        if args.csv:
            return result.to_csv()
        return self.emit(
            result.to_dict(include_timing=args.timing),
            lambda: self.formatter.format_simulation(result),
        )


def _configure_logging(debug: bool) -> None:
    handler: logging.Handler = (
        logging.FileHandler(Config.LOG_FILE) if debug else logging.StreamHandler(sys.stderr)
    )
    logging.basicConfig(
        level=Config.DEBUG_LOG_LEVEL if debug else Config.DEFAULT_LOG_LEVEL,
        format=Config.LOG_FORMAT,
        handlers=[handler],
        force=True,
    )
    if debug:
        logging.debug("Debug logging enabled")


def _write(output: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(output)
        logging.info(f"Output written to {path}")
    else:
        sys.stdout.write(output)


def _precondition_output(e: PreconditionError, as_json: bool) -> str:
    data: Dict[str, Any] = {
        "error": "precondition",
        "theorem": e.theorem,
        "message": str(e),
        "precondition_report": e.reports,
    }
    if as_json:
        return to_json(data)
    lines = [f"Precondition of {e.theorem} violated:"]
    for report in e.reports:
        status = "holds" if report.get("holds") else "fails"
        lines.append(
            f"  {report.get('pattern')}: {status} "
            f"(max deviation {report.get('max_deviation'):.3g})"
        )
    lines.append("Use --force to continue in sufficient mode.")
    return "\n".join(lines) + "\n"


def execute(argv: Sequence[str]) -> int:
    """
    Run one command line.

    Returns:
        0 on success (also for an unachievable-at-any-b answer), 1 on a
        precondition violation, 2 on usage or input errors, 3 on an internal
        error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return ExceptionHandler.EXIT_INPUT if e.code else ExceptionHandler.EXIT_OK

    _configure_logging(args.debug)
    logging.debug(f"Command line: {list(argv)}")
    if not Config.validate_settings():
        sys.stderr.write(f"{Config.APP_NAME}: error: invalid settings in config.py\n")
        return ExceptionHandler.EXIT_INPUT

    try:
        output = CommandRunner(args).run()
        _write(output, args.out)
        return ExceptionHandler.EXIT_OK
    except PreconditionError as e:
        logging.warning(str(e))
        _write(_precondition_output(e, args.json), args.out)
        return ExceptionHandler.exit_code_for(e)
    except UnachievableError as e:
        message = {"achievable": "no", "message": str(e), "components": e.components}
        _write(to_json(message) if args.json else f"{e}\n", args.out)
        return ExceptionHandler.exit_code_for(e)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{Config.APP_NAME}: error: {e}\n")
        return ExceptionHandler.EXIT_INPUT
    except (JsccForgeError, OSError, ValueError, KeyError) as e:
        results = ExceptionHandler.handle_exception(e, f"{args.command}")
        sys.stderr.write(ExceptionHandler.format_exception_summary(results) + "\n")
        return int(results["exit_code"])
    except Exception as e:
        results = ExceptionHandler.handle_exception(e, "Main application error")
        sys.stderr.write(ExceptionHandler.format_exception_summary(results) + "\n")
        traceback.print_exc()
        return ExceptionHandler.EXIT_INTERNAL


def _main_impl() -> int:
    """Main function."""
    return execute(sys.argv[1:])


def main() -> int:
    """Main entry point for the jscc-forge application."""
    return _main_impl()
