"""Command-line entry point: python -m src.main <command> [options]."""
import argparse
import importlib
import logging
import os
import sys
import time
import traceback

from dotenv import load_dotenv
from termcolor import colored

from src.config.app_config import EXIT_CONFIG, EXIT_FAILURE
from src.experiments.harness import ExperimentHarness
from src.experiments.render import TableRenderer, render_table
from src.tableau.catalog import catalog_names, make_builtin
from src.tableau.conditions import check_alpha_condition
from src.utils.config_loader import ConfigLoader
from src.utils.errors import CatalogError, ConfigurationError, SemiImexError
from src.utils.logging_utils import setup_logging
from src.utils.validation import parse_bool

logger = logging.getLogger(__name__)

PROBLEM_COMMANDS = ("scalar", "diffusion", "cahn-hilliard")
RUNNER_FOR_COMMAND = {
    "scalar": "convergence",
    "diffusion": "convergence",
    "cahn-hilliard": "convergence",
    "step-size": "step-size",
    "stability": "stability",
}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the configuration exit code."""
    def error(self, message):
        self.print_usage(sys.stderr)
        print(colored(f"error: {message}", "red"), file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _add_output_options(parser):
    parser.add_argument("--format", choices=["csv", "md", "markdown"], help="table format (default csv)")
    parser.add_argument("--out", help="write the table to FILE instead of stdout")
    parser.add_argument("--config", help="plain key=value file with option defaults")
    parser.add_argument("--lossless", action="store_const", const="true", help="17 significant digits")
    parser.add_argument("--no-cache", action="store_true", help="do not read or write the reference cache")
    parser.add_argument("--log-level", help="override SEMIMEX_LOG_LEVEL")


def _add_scheme_options(parser):
    parser.add_argument("--scheme", help="catalog scheme name (comma-separated list for side-by-side studies)")
    parser.add_argument("--scheme-file", help="scheme definition file")


def build_parser():
    parser = CliParser(prog="semimex", description="Semi-IMEX Runge-Kutta schemes: order, step-size and stability experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    for name in PROBLEM_COMMANDS:
        cmd = sub.add_parser(name, help=f"convergence study on the {name} problem")
        _add_scheme_options(cmd)
        cmd.add_argument("--h-list", help="step sizes, e.g. 1/16,1/32,1/64")
        cmd.add_argument("--t-end", help="final time")
        cmd.add_argument("--kappa", help="diffusion nonlinearity")
        cmd.add_argument("--epsilon", help="Cahn-Hilliard interface width")
        cmd.add_argument("--n", help="grid points")
        cmd.add_argument("--stretch", help="Cahn-Hilliard grid clustering")
        cmd.add_argument("--source", help="diffusion source term (cos_x_sin_t or cos_x)")
        cmd.add_argument("--verify-reference", action="store_true", help="recompute the reference at half its step")
        cmd.add_argument("--trajectory", help="write the coarsest run's trajectory CSV to FILE")
        _add_output_options(cmd)

    cmd = sub.add_parser("step-size", help="largest stable step searches")
    cmd.add_argument("--problem", help="diffusion or cahn-hilliard")
    _add_scheme_options(cmd)
    cmd.add_argument("--kappa", help="diffusion nonlinearity")
    cmd.add_argument("--epsilon", help="Cahn-Hilliard interface width")
    cmd.add_argument("--params", help="sweep values, e.g. 0.25,0.5,1")
    cmd.add_argument("--n", help="grid points")
    cmd.add_argument("--stretch", help="Cahn-Hilliard grid clustering")
    cmd.add_argument("--h0", help="initial trial step")
    cmd.add_argument("--h-cap", help="largest step tried")
    cmd.add_argument("--max-steps", help="step budget per trial")
    _add_output_options(cmd)

    cmd = sub.add_parser("stability", help="stability function samples and classification")
    _add_scheme_options(cmd)
    _add_output_options(cmd)

    cmd = sub.add_parser("list-schemes", help="catalog summary")
    _add_output_options(cmd)
    return parser


def resolve_options(args):
    """Merge built-in defaults, the config file and command-line flags (flags win).

    Args:
        args (argparse.Namespace): Parsed command line.

    Returns:
        dict: Options with underscore keys.
    """
    options = {"format": "csv", "lossless": "false"}
    if args.config:
        options.update(ConfigLoader().load_config_file(args.config))
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None or value is False:
            continue
        options[key] = value
    if args.command in PROBLEM_COMMANDS:
        options["problem"] = args.command
    options["lossless"] = parse_bool(options.get("lossless", "false"))
    options["use_cache"] = not args.no_cache
    logger.debug(f"Resolved options: {options}")
    return options


def load_runner(command, harness):
    """Instantiate the runner class configured for a command."""
    config = ConfigLoader().get_config()
    class_path = config["RUNNER_CLASSES"][RUNNER_FOR_COMMAND[command]]
    module_path, class_name = class_path.rsplit(".", 1)
    runner_class = getattr(importlib.import_module(module_path), class_name)
    logger.info(f"Loaded runner: {class_name}")
    return runner_class(harness)


def list_schemes(options):
    renderer = TableRenderer(options["format"], options["lossless"])
    rows = []
    for name in catalog_names():
        tb = make_builtin(name)
        alpha = check_alpha_condition(tb)
        rows.append([
            name,
            str(tb.s),
            str(tb.declared_order),
            str(tb.linear_solve_count()),
            "" if alpha is None else f"{alpha:.6g}",
            tb.description,
        ])
    return renderer.table(["name", "stages", "order", "linear_solves", "alpha", "description"], rows)


def emit(text, out_path):
    if out_path:
        directory = os.path.dirname(out_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out_path, "w") as f:
            f.write(text)
        print(colored(f"Wrote {out_path}", "green"), file=sys.stderr)
    else:
        sys.stdout.write(text)


def main(argv=None):
    """Run one CLI command.

    Returns:
        int: Process exit code (0 ok, 1 failure, 2 divergent study, 3 configuration error).
    """
    load_dotenv()
    args = build_parser().parse_args(argv)

    harness = None
    try:
        setup_logging(args.log_level)
        config = ConfigLoader().get_config()
        options = resolve_options(args)
        if args.command == "list-schemes":
            emit(list_schemes(options), options.get("out"))
            return config["EXIT_OK"]

        harness = ExperimentHarness(use_cache=options["use_cache"])
        runner = load_runner(args.command, harness)
        print(colored(f"Running {args.command}...", "cyan"), file=sys.stderr)
        start_time = time.time()
        report = runner.run(options)
        emit(render_table(report, options["format"], options["lossless"]), options.get("out"))
        code = runner.exit_code(report)
        latency = time.time() - start_time
        logger.info(f"{args.command} took {latency:.2f} seconds")
        if code == config["EXIT_DIVERGENT"]:
            print(colored(f"Some runs diverged ({latency:.2f} s).", "yellow"), file=sys.stderr)
        else:
            print(colored(f"Done in {latency:.2f} s.", "green"), file=sys.stderr)
        return code
    except (ConfigurationError, CatalogError) as e:
        logger.error(f"Configuration error: {e}")
        print(colored(f"Configuration error: {e}", "red"), file=sys.stderr)
        return EXIT_CONFIG
    except SemiImexError as e:
        logger.error(f"Error: {e}")
        print(colored(f"Error: {e}", "red"), file=sys.stderr)
        return EXIT_FAILURE
    finally:
        if harness:
            harness.cleanup()


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.getLogger(__name__).info("Execution interrupted by user")
        print(colored("\nExecution interrupted by user.", "red"), file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        logging.getLogger(__name__).error(f"Error: {e}", exc_info=True)
        print(colored(f"\nError: {e}", "red"), file=sys.stderr)
        traceback.print_exc()
        sys.exit(1)
