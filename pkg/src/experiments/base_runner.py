"""Base runner for the experiment commands."""
import logging
from abc import ABC, abstractmethod

from src.problems.bundle import build_problem
from src.tableau.catalog import make_builtin
from src.tableau.scheme_file import read_scheme_file
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

# Options forwarded to the problem builders
PROBLEM_OPTION_KEYS = ("kappa", "epsilon", "n", "stretch", "source")


class BaseRunner(ABC):
    """Abstract base class for experiment runners sharing scheme and problem resolution."""
    def __init__(self, harness):
        """Initialize with an experiment harness.

        Args:
            harness: ExperimentHarness providing the reference cache and trial pool.
        """
        self.harness = harness
        self.config = ConfigLoader().get_config()
        self.experiments = ConfigLoader().get_experiment_config()

    def resolve_scheme(self, options):
        """Tableau from --scheme-file or a catalog name from --scheme."""
        if options.get("scheme_file"):
            logger.info(f"Loading scheme from {options['scheme_file']}")
            return read_scheme_file(options["scheme_file"])
        name = options.get("scheme")
        if not name:
            logger.error("No scheme given")
            raise ConfigurationError("a scheme is required (--scheme NAME or --scheme-file FILE)")
        return make_builtin(name)

    def experiment_settings(self, kind):
        if kind not in self.experiments:
            logger.error(f"Unknown problem '{kind}'")
            raise ConfigurationError(f"unknown problem '{kind}'; valid: {', '.join(self.experiments)}")
        return self.experiments[kind]

    @staticmethod
    def problem_overrides(options):
        return {key: options[key] for key in PROBLEM_OPTION_KEYS if options.get(key) is not None}

    def build_bundle(self, kind, params):
        return build_problem(kind, params)

    @abstractmethod
    def run(self, options):
        """Run the experiment (to be implemented by subclasses).

        Args:
            options (dict): Resolved CLI/config options.

        Returns:
            The experiment's report object.
        """
        pass

    def exit_code(self, report):
        return self.config["EXIT_OK"]
