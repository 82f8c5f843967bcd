"""
Main module of the quantitative expressions toolkit.

Parses the command line, loads the configuration and the definition file,
runs one command and prints its report on stdout.
"""

import pathlib
import sys

import src.arg_parser as ap
import src.config_utils as cu
import src.constants as const
import src.definitions as df
import src.logging_utils as lu
import src.query_runner as qr
from src.errors import NotSynchronisedError, QuantLangError
from src.formats import get_report_writer, get_report_writer_for_path


def report_error(error: QuantLangError) -> None:
    """Print a coloured diagnostic for ``error`` on stderr."""
    print(f"{const.RED}error: {error}{const.RESET}", file=sys.stderr)
    if isinstance(error, NotSynchronisedError):
        print(f"{const.YELLOW}first: {error.first}{const.RESET}", file=sys.stderr)
        print(f"{const.YELLOW}second: {error.second}{const.RESET}", file=sys.stderr)


def main() -> None:
    """Run one command of the quantitative expressions toolkit."""
    args = ap.run_arg_parser()

    # Create default config if it doesn't exist, then load it
    config_path = pathlib.Path(args.config or "config.yaml")
    if not config_path.exists():
        cu.create_default_config(config_path)
    config: dict[str, dict] = cu.load_config(config_path)

    if not cu.validate_config(config):
        msg = f"Configuration validation failed. Please check the {config_path!s} file."
        raise SystemExit(msg)

    # Update the config with the command line arguments
    config = cu.update_config(config, args)

    # Set global log level first (change this to control all logging)
    lu.set_global_log_level(cu.get_logging_config(config)["log_level"])
    lu.setup_trace_logger(cu.get_countermachine_config(config)["trace"])
    # Set up main logger
    logger = lu.setup_logger(__name__)
    logger.debug("Configuration loaded successfully")

    writer = get_report_writer(cu.get_cli_config(config)["report_format"])
    try:
        defs = df.load_definitions(pathlib.Path(args.definitions))
        code, report = qr.run_query(defs, args, config)
    except QuantLangError as e:
        report_error(e)
        sys.exit(const.EXIT_ERROR)
    except OSError as e:
        print(f"{const.RED}error: {e}{const.RESET}", file=sys.stderr)
        sys.exit(const.EXIT_ERROR)

    if args.report_path is None:
        sys.stdout.write(writer.render(report))
    else:
        report_path = pathlib.Path(args.report_path)
        try:
            get_report_writer_for_path(report_path).save(report, report_path)
        except OSError as e:
            print(f"{const.RED}error: {e}{const.RESET}", file=sys.stderr)
            sys.exit(const.EXIT_ERROR)
        msg = f"Report saved to {report_path}"
        logger.info(msg)
    sys.exit(code)


if __name__ == "__main__":
    main()
