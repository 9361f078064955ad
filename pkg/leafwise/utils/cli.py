import argparse
import sys
import traceback

from pydantic import ValidationError

from leafwise import __version__
from leafwise.config.config import apply_settings
from leafwise.engine.abstract_analysis_engine import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE
from leafwise.engine.circle_engines import KamEngine, MoserCheckEngine, RotationNumberEngine
from leafwise.engine.cohomology_engines import (EquivalenceEngine, ObstructionsEngine, RigidityReportEngine,
                                                SolveCohomEqEngine)
from leafwise.engine.diophantine_engine import DiophantineScanEngine
from leafwise.engine.lie_engine import LieCohomologyEngine
from leafwise.engine.reference_engine import RefsEngine
from leafwise.engine.suspension_engines import SuspensionH1Engine, ToralEngine
from leafwise.errors import LeafwiseError, RankInstabilityError
from leafwise.utils.schemas import format_validation_error

# settings overridden by --tol for each subcommand
TOL_SETTINGS = {
    "solve-cohomeq": "cohomeq.tol",
    "kam": "cohomeq.tol",
    "equivalence": "liealg.rank_tol",
    "lie-cohomology": "liealg.rank_tol",
    "suspension-h1": "suspension.rank_tol",
    "moser-check": "circle.moser_tol",
}
RADIUS_COMMANDS = {"diophantine-scan", "moser-check", "obstructions", "rigidity-report"}


class CLI:

    @staticmethod
    def display_header():
        '''Display the header of the CLI'''
        CLI.display_green_text(f"leafwise {__version__} - leafwise cohomology and rigidity computations")

    class bcolors:
        HEADER = '\033[95m'
        OKBLUE = '\033[94m'
        OKCYAN = '\033[96m'
        OKGREEN = '\033[92m'
        WARNING = '\033[93m'
        FAIL = '\033[91m'
        ENDC = '\033[0m'
        BOLD = '\033[1m'

    @staticmethod
    def display_error(error_message, stack_trace=None):
        '''Display an error message in the console'''
        print(CLI.bcolors.FAIL + "ERROR : " + error_message + CLI.bcolors.ENDC, file=sys.stderr)
        if stack_trace:
            print(stack_trace, file=sys.stderr)

    @staticmethod
    def get_console_green_text(text):
        '''Get the text in green color'''
        return CLI.bcolors.OKGREEN + text + CLI.bcolors.ENDC

    @staticmethod
    def get_console_red_text(text):
        '''Get the text in red color'''
        return CLI.bcolors.FAIL + text + CLI.bcolors.ENDC

    @staticmethod
    def get_console_yellow_text(text):
        '''Get the text in yellow color'''
        return CLI.bcolors.WARNING + text + CLI.bcolors.ENDC

    @staticmethod
    def get_console_blue_text(text):
        return CLI.bcolors.OKBLUE + text + CLI.bcolors.ENDC

    @staticmethod
    def get_console_bold_text(text):
        return CLI.bcolors.BOLD + text + CLI.bcolors.ENDC

    @staticmethod
    def display_blue_text(text):
        print(CLI.get_console_blue_text(text))

    @staticmethod
    def display_green_text(text):
        print(CLI.get_console_green_text(text))

    @staticmethod
    def display_red_text(text):
        print(CLI.get_console_red_text(text))

    @staticmethod
    def display_yellow_text(text):
        print(CLI.get_console_yellow_text(text))

    @staticmethod
    def display_outcome(exit_code, status, reason=""):
        text = f"status: {status}" + (f" ({reason})" if reason else "")
        if exit_code == EXIT_OK:
            CLI.display_green_text(text)
        elif exit_code == EXIT_USAGE:
            CLI.display_red_text(text)
        else:
            CLI.display_yellow_text(text)


class LeafwiseArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1 so that 2 stays reserved for mathematical obstructions."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> LeafwiseArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="leafwise_out", help="Directory receiving result.json, CSV tables and manifest.json")
    common.add_argument("--config", default=None, help="YAML file merged over the packaged defaults")
    common.add_argument("--quiet", action="store_true", help="Only errors on the console")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="csv also writes every result table")
    common.add_argument("--seed", type=int, default=0, help="Seed for randomised demonstrations")
    common.add_argument("--tol", type=float, default=None, help="Tolerance override for the subcommand")
    common.add_argument("--truncation", type=int, default=None, help="Fourier truncation radius for re-expansions")
    common.add_argument("--radius", type=int, default=None, help="Scan radius M")
    common.add_argument("--run-id", default=None, help="Resume a run recorded in the run ledger")

    parser = LeafwiseArgumentParser(prog="leafwise", description="Leafwise cohomology, small divisors and rigidity computations")
    parser.add_argument("--version", action="version", version=f"leafwise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=LeafwiseArgumentParser)

    p = sub.add_parser("solve-cohomeq", parents=[common], help="Solve f = X_v g + c or primitivise a closed 1-form")
    p.add_argument("--matrix", required=True, help="Action matrix V (JSON file or literal)")
    p.add_argument("--field", default=None, help="Series f, or {\"components\": [...]} for an action")
    p.add_argument("--manufactured", type=int, default=None, metavar="RADIUS",
                   help="Use a seeded random g* of this radius instead of --field")
    p.add_argument("--blowup", type=float, default=None, help="Amplification factor declared divergent")

    p = sub.add_parser("diophantine-scan", parents=[common], help="Estimate the Diophantine type of V")
    p.add_argument("--matrix", required=True)
    p.add_argument("--budget", type=int, default=None, help="Maximum number of enumerated modes")

    p = sub.add_parser("lie-cohomology", parents=[common], help="Chevalley-Eilenberg cohomology dimensions")
    p.add_argument("--algebra", default=None, help="Algebra JSON, or heisenberg, ga, sl2, abelian<p>, n<d>")
    p.add_argument("--random-nilpotent", type=int, default=None, metavar="D",
                   help="Seeded random nilpotent subalgebra of strictly upper-triangular DxD matrices")

    p = sub.add_parser("suspension-h1", parents=[common], help="Mayer-Vietoris dimensions of a suspension foliation")
    p.add_argument("--data", required=True)

    p = sub.add_parser("toral", parents=[common], help="Suspension of a hyperbolic 2x2 toral automorphism")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("rotation-number", parents=[common], help="Rotation number of a circle map or family")
    p.add_argument("--map", required=True)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--refine", action="store_true", help="Report the simplest rational in the enclosure")

    p = sub.add_parser("moser-check", parents=[common], help="Simultaneous small-divisor condition")
    p.add_argument("--taus", required=True, help="JSON list of rotation numbers")
    p.add_argument("--exp", type=float, required=True, dest="exponent")

    p = sub.add_parser("kam", parents=[common], help="Linearised conjugacy and Newton steps for a commuting family")
    p.add_argument("--family", required=True)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--alphas", default=None, help="JSON list of target rotation numbers")

    p = sub.add_parser("equivalence", parents=[common], help="Parameter equivalence of two linear actions")
    p.add_argument("--v1", required=True)
    p.add_argument("--v2", required=True)

    p = sub.add_parser("obstructions", parents=[common], help="Resonant obstruction space up to a radius")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("rigidity-report", parents=[common], help="Truncated infinitesimal deformation count")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("refs", parents=[common], help="Known results stored as references")
    p.add_argument("query", nargs="?", default="")
    p.add_argument("--id", default=None, dest="reference_id")
    return parser


def build_engine(args):
    common = dict(out_dir=args.out, output_format=args.format, run_id=args.run_id)
    command = args.command
    if command == "solve-cohomeq":
        return SolveCohomEqEngine(args.matrix, args.field, args.manufactured, args.seed, args.tol, args.blowup, **common)
    if command == "diophantine-scan":
        return DiophantineScanEngine(args.matrix, args.radius, args.budget, **common)
    if command == "lie-cohomology":
        return LieCohomologyEngine(args.algebra, args.random_nilpotent, args.seed, args.tol, **common)
    if command == "suspension-h1":
        return SuspensionH1Engine(args.data, args.tol, **common)
    if command == "toral":
        return ToralEngine(args.matrix, **common)
    if command == "rotation-number":
        return RotationNumberEngine(args.map, args.iters, args.refine, **common)
    if command == "moser-check":
        return MoserCheckEngine(args.taus, args.radius, args.exponent, args.tol, **common)
    if command == "kam":
        return KamEngine(args.family, args.steps, args.alphas, args.truncation, args.tol, **common)
    if command == "equivalence":
        return EquivalenceEngine(args.v1, args.v2, args.tol, **common)
    if command == "obstructions":
        return ObstructionsEngine(args.matrix, args.radius, **common)
    if command == "rigidity-report":
        return RigidityReportEngine(args.matrix, args.radius, **common)
    if command == "refs":
        return RefsEngine(args.reference_id, args.query, **common)
    raise ValueError(f"Unknown subcommand '{command}'")


def setting_overrides(args) -> dict:
    overrides = {}
    if args.tol is not None and args.command in TOL_SETTINGS:
        section, key = TOL_SETTINGS[args.command].split(".")
        overrides.setdefault(section, {})[key] = args.tol
    if args.truncation is not None:
        overrides.setdefault("circle", {})["kam_truncation"] = args.truncation
    return overrides


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, RankInstabilityError):
        return EXIT_INCONCLUSIVE
    return EXIT_USAGE


def _message(exc: Exception) -> str:
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)


def dispatch(argv=None) -> int:
    """Run one subcommand; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in RADIUS_COMMANDS and args.radius is None:
        parser.error(f"{args.command} requires --radius")
    try:
        apply_settings(args.config, setting_overrides(args))
    except (FileNotFoundError, ValueError) as exc:
        CLI.display_error(_message(exc))
        return EXIT_USAGE

    logger = (lambda _: None) if args.quiet else CLI.display_blue_text
    engine = build_engine(args)
    engine.set_logger(logger)
    try:
        exit_code = engine.run()
        entries = engine.lookup() if args.command == "refs" else []
    except ValidationError as exc:
        lines = format_validation_error(exc)
        for line in lines:
            CLI.display_error(f"invalid input at {line}")
        return _finish_failed(engine, EXIT_USAGE, "; ".join(lines))
    except (LeafwiseError, ValueError, KeyError, FileNotFoundError) as exc:
        code = exit_code_for(exc)
        CLI.display_error(_message(exc))
        return _finish_failed(engine, code, _message(exc))
    except Exception as exc:
        CLI.display_error(_message(exc), traceback.format_exc())
        return _finish_failed(engine, EXIT_USAGE, _message(exc))

    if args.command == "refs" and not args.quiet:
        for entry in entries:
            print(f"{entry['id']}: {entry['statement']}")
            print(f"    anchor: {entry['anchor']}")
            print(f"    source: {entry['source']}")
            print(f"    {entry['note']}")
    if not args.quiet:
        CLI.display_outcome(exit_code, engine._db_status or "ok", engine.reason)
    return exit_code


def _finish_failed(engine, exit_code: int, reason: str) -> int:
    """A failed run still leaves a result.json with the reason and its manifest."""
    engine.result = {}
    engine.tables = {}
    engine.setOutcome(exit_code, "error", reason)
    try:
        engine._writeArtifacts()
    except OSError as exc:
        CLI.display_error(f"could not write artifacts: {exc}")
    return exit_code
