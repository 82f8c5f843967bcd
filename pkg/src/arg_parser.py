"""
Argument parser module for the quantitative expressions toolkit.

Provides an ArgumentParser class that handles command line argument parsing
and validation: a definition file, one query command and the global flags.
"""

import argparse
import pathlib
from collections.abc import Sequence

import src.constants as const
import src.logging_utils as lu
from src.formats import EXTENSION_REGISTRY

# Set up logger with centralized configuration
logger = lu.setup_logger(__name__)


class QuantArgumentParser:
    """Argument parser for the quantitative expressions toolkit.

    This class handles parsing and validation of command line arguments,
    ensuring proper argument combinations and providing clear error messages.

    Attributes
    ----------
    parser : argparse.ArgumentParser
        The underlying argparse parser instance.
    """

    def __init__(self) -> None:
        """Initialize the argument parser with all required arguments."""
        self.parser = argparse.ArgumentParser(
            description="""Quantitative expressions
Evaluate and decide weighted automata expressions with iterated sums and weighted chop automata.""",
            formatter_class=lambda prog: argparse.RawTextHelpFormatter(prog, width=105, max_help_position=45),
        )
        self._setup_arguments()

    @staticmethod
    def _threshold(parser: argparse.ArgumentParser, *, required: bool) -> None:
        group = parser.add_mutually_exclusive_group(required=required)
        group.add_argument("--ge", type=int, metavar="V", help="Threshold v with value >= v")
        group.add_argument("--gt", type=int, metavar="V", help="Threshold v with value > v")

    def _setup_arguments(self) -> None:
        """Set up the global arguments and one subparser per command."""
        self.parser.add_argument("definitions", type=str, help="Path to the definition file")

        # Configuration arguments
        self.parser.add_argument("--config", type=str, help="Path to the config file", default="config.yaml")
        self.parser.add_argument("--backend", type=str, choices=["semilinear", "cm"], help="Decision back end")
        self.parser.add_argument("--max-steps", dest="max_steps", type=int, help="Step bound of the counter machine back end")
        self.parser.add_argument("--format", dest="report_format", type=str, choices=["kv", "json", "yaml"], help="Report format")
        self.parser.add_argument("--report", dest="report_path", type=str, help="Save the report to this file (.txt, .kv, .json, .yaml)")
        self.parser.add_argument(
            "--tokens",
            action=argparse.BooleanOptionalAction,
            help="Words are space separated tokens instead of single characters",
        )
        self.parser.add_argument("--trace", action=argparse.BooleanOptionalAction, help="Dump counter machine configurations")
        self.parser.add_argument("--verbose", action="store_true", help="Debug logging")
        self.parser.add_argument("--jobs", type=int, help="Worker threads of the batch command")

        # Version argument
        self.parser.add_argument("--version", action="version", version=f"Version: {self.get_project_version()}")

        commands = self.parser.add_subparsers(dest="command", required=True, metavar="command")

        evaluate = commands.add_parser("eval", help="Value of an expression or chop automaton on a word")
        evaluate.add_argument("name", help="Expression, automaton or chop automaton")
        evaluate.add_argument("word", help=f"Input word, {const.EPSILON_TOKEN} for the empty word")

        empty = commands.add_parser("empty", help="Is some domain word above the threshold?")
        empty.add_argument("name")
        self._threshold(empty, required=True)

        universal = commands.add_parser("universal", help="Are all domain words above the threshold?")
        universal.add_argument("name")
        self._threshold(universal, required=True)

        compare = commands.add_parser("compare", help="Inclusion (ge, gt) or equivalence (eq) of two expressions")
        compare.add_argument("first")
        compare.add_argument("second")
        compare.add_argument("--rel", choices=["ge", "gt", "eq"], default="ge", help="Relation of first to second")

        value_range = commands.add_parser("range", help="Semi-linear set of values")
        value_range.add_argument("name")

        sync = commands.add_parser("sync-check", help="Synchronisation of expressions or chop automata")
        sync.add_argument("names", nargs="+")

        compile_parser = commands.add_parser("compile", help="Compile synchronised expressions into chop automata")
        compile_parser.add_argument("names", nargs="+")
        compile_parser.add_argument("-o", "--output", type=str, required=True, help="Write the chop automata to this file")

        domain = commands.add_parser("domain", help="Regular expression and shortest word of the domain")
        domain.add_argument("name")

        oracle = commands.add_parser("oracle", help="Brute-force evaluation of all words up to a length")
        oracle.add_argument("names", nargs="+", help="One name, or two with --rel")
        oracle.add_argument("--max-len", dest="max_len", type=int, help="Longest word evaluated")
        oracle.add_argument("--rel", choices=["ge", "gt", "eq"], help="Compare two names")
        self._threshold(oracle, required=False)

        batch = commands.add_parser("batch", help="Run one command per line of a file")
        batch.add_argument("commands_file", help="File with one command per line")

    def parse_args(self, argv: Sequence[str] | None = None) -> argparse.Namespace:
        """
        Parse command line arguments and validate them.

        Parameters
        ----------
        argv : Sequence[str], optional
            Arguments to parse instead of ``sys.argv``.

        Returns
        -------
        argparse.Namespace
            Parsed command line arguments.
        """
        args = self.parser.parse_args(argv)
        self.validate_query_arguments(args)
        return args

    def validate_query_arguments(self, args: argparse.Namespace) -> None:
        """
        Validate combinations of arguments the subparsers cannot express.

        Parameters
        ----------
        args : argparse.Namespace
            Parsed command line arguments.
        """
        if args.max_steps is not None and args.max_steps <= 0:
            self.parser.error("--max-steps must be positive")
        if args.jobs is not None and args.jobs <= 0:
            self.parser.error("--jobs must be positive")
        if args.report_path is not None and pathlib.Path(args.report_path).suffix.lower() not in EXTENSION_REGISTRY:
            self.parser.error(f"--report needs one of the extensions {', '.join(EXTENSION_REGISTRY)}")
        if args.command == "oracle":
            if args.rel is not None and len(args.names) != 2:
                self.parser.error("oracle --rel needs two names")
            if args.rel is None and len(args.names) != 1:
                self.parser.error("oracle takes one name, or two with --rel")
            if args.rel is not None and (args.ge is not None or args.gt is not None):
                self.parser.error("oracle accepts either --rel or a threshold")

        # Case: the step bound only matters for the counter machine back end
        if args.max_steps is not None and args.backend not in {None, "cm"}:
            logger.warning("--max-steps only applies to the counter machine back end (--backend cm).")

        # Case: the trace only exists for the counter machine back end
        if args.trace and args.backend not in {None, "cm"}:
            logger.warning("--trace only applies to the counter machine back end (--backend cm).")

    def get_help_text(self) -> str:
        """
        Get the help text for the argument parser.

        Returns
        -------
        str
            Formatted help text for the argument parser.
        """
        return self.parser.format_help()

    def print_help(self) -> None:
        """Print the help text to stdout."""
        self.parser.print_help()

    def print_usage(self) -> None:
        """Print the usage text to stdout."""
        self.parser.print_usage()

    @staticmethod
    def get_project_version() -> str:
        """
        Get the project version from the pyproject.toml file.

        Returns
        -------
        str
            The project version.
        """
        version = "unknown"
        try:
            with pathlib.Path("pyproject.toml").open(encoding="utf-8") as file:
                for line in file:
                    if line.startswith("version"):
                        version = line.split("=")[1].strip().strip('"')
                        break
        except (FileNotFoundError, PermissionError, UnicodeDecodeError, OSError):
            pass
        return version


def run_arg_parser(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """
    Run the argument parser conveniently.

    Parameters
    ----------
    argv : Sequence[str], optional
        Arguments to parse instead of ``sys.argv``.

    Returns
    -------
    argparse.Namespace
        Parsed command line arguments.
    """
    parser = QuantArgumentParser()
    return parser.parse_args(argv)
