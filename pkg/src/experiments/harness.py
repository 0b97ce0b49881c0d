"""Shared experiment harness: reference cache and trial worker pool."""
import hashlib
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import psutil

from src.integrator.driver import integrate
from src.tableau.catalog import make_builtin
from src.utils.cache import LRUCache
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError
from src.utils.validation import parse_fraction

logger = logging.getLogger(__name__)


class ExperimentHarness:
    """Owns the persisted reference cache and the pool independent trials run on."""
    def __init__(self, use_cache=True, threads=None):
        """Initialize the harness.

        Args:
            use_cache (bool): Read and write CACHE_DIR/reference_cache.json.
            threads (int, optional): Worker count; SEMIMEX_THREADS (0 = one
                per physical core) by default.
        """
        self.config = ConfigLoader().get_config()
        self.use_cache = use_cache
        self.reference_cache = LRUCache(self.config["CACHE_MAX_SIZE"], self.config["CACHE_EXPIRY_DAYS"])
        self.cache_file = os.path.join(self.config["CACHE_DIR"], "reference_cache.json")
        if self.use_cache:
            self.reference_cache.load(self.cache_file)
        requested = self.config["THREADS"] if threads is None else threads
        self.threads = requested or psutil.cpu_count(logical=False) or 1
        self._pool = None
        logger.info(f"Experiment harness ready ({self.threads} workers, cache {'on' if use_cache else 'off'})")

    @property
    def pool(self):
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="trial")
        return self._pool

    def map(self, fn, items):
        """Run fn over items on the pool, results in input order."""
        items = list(items)
        if self.threads == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        return list(self.pool.map(fn, items))

    @staticmethod
    def cache_key(*parts):
        return hashlib.md5(":".join(repr(p) for p in parts).encode()).hexdigest()

    def cached(self, key, compute):
        """Return the cached array for key, computing and storing it on a miss."""
        if self.use_cache:
            hit = self.reference_cache.get(key)
            if hit is not None:
                logger.info(f"Reference cache hit {key[:8]}")
                return hit
        value = np.asarray(compute(), dtype=float)
        if self.use_cache:
            self.reference_cache.put(key, value)
            self.reference_cache.save(self.cache_file)
        return value

    def reference_state(self, problem, recipe, t_end, refine=1):
        """Final-time reference for a convergence study.

        Args:
            problem (SemiLinearProblem): The studied problem.
            recipe (dict): {'kind': 'exact'} or {'kind': 'scheme', 'scheme': name, 'h': h_ref}.
            t_end (float): Final time.
            refine (int): Divides h_ref (used to verify the reference).

        Returns:
            tuple: (state, descriptor string).
        """
        kind = recipe.get("kind")
        if kind == "exact":
            if problem.exact is None:
                raise ConfigurationError(f"{problem.describe()} has no exact solution")
            return np.asarray(problem.exact(t_end), dtype=float), "exact"
        if kind != "scheme":
            logger.error(f"Unknown reference recipe {recipe}")
            raise ConfigurationError(f"unknown reference kind '{kind}'")
        scheme = recipe["scheme"]
        h_ref = parse_fraction(recipe["h"]) / refine
        descriptor = f"{scheme} h={h_ref:.6g}"
        key = self.cache_key(problem.describe(), scheme, h_ref, t_end)

        def compute():
            logger.info(f"Computing reference {descriptor} to t={t_end:g} for {problem.describe()}")
            return integrate(problem, make_builtin(scheme), t_end, h_ref).state

        return self.cached(key, compute), descriptor

    def steady_state(self, bundle):
        """Steady/limit state of a bundle, cached across runs."""
        key = self.cache_key("steady", bundle.describe())
        return self.cached(key, lambda: bundle.steady)

    def cleanup(self):
        """Shut down the pool and persist the cache."""
        logger.info("Cleaning up harness")
        try:
            if self._pool is not None:
                self._pool.shutdown(wait=True)
                self._pool = None
        except Exception as e:
            logger.error(f"Error shutting down trial pool: {e}")
        if self.use_cache:
            self.reference_cache.save(self.cache_file)
