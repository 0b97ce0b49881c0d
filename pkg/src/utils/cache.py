"""LRU cache for persisting computed reference solutions."""
import json
import os
import threading
import time
import logging
from collections import OrderedDict

import numpy as np

logger = logging.getLogger(__name__)

class LRUCache:
    """LRU cache with expiration, persisted to JSON.

    Array values are stored as lists of floats and come back as numpy arrays.
    """
    def __init__(self, max_size, expiry_days):
        """Initialize the LRU cache.

        Args:
            max_size (int): Maximum number of entries.
            expiry_days (int): Expiration time in days.
        """
        self.cache = OrderedDict()
        self.max_size = max_size
        self.expiry_seconds = expiry_days * 24 * 60 * 60
        self.timestamps = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.cache)

    def get(self, key):
        """Get an item from the cache.

        Args:
            key (str): Cache key.

        Returns:
            numpy.ndarray: Value if found and not expired, else None.
        """
        with self._lock:
            if key in self.cache:
                if time.time() - self.timestamps[key] < self.expiry_seconds:
                    self.cache.move_to_end(key)
                    return np.array(self.cache[key], dtype=float)
                del self.cache[key]
                del self.timestamps[key]
        return None

    def put(self, key, value, timestamp=None):
        """Put an item in the cache.

        Args:
            key (str): Cache key.
            value: Array-like of floats.
            timestamp (float, optional): Insertion time, defaults to now.
        """
        with self._lock:
            if key in self.cache:
                self.cache.move_to_end(key)
            self.cache[key] = [float(v) for v in np.ravel(value)]
            self.timestamps[key] = time.time() if timestamp is None else timestamp
            while len(self.cache) > self.max_size:
                oldest, _ = self.cache.popitem(last=False)
                del self.timestamps[oldest]

    def save(self, file_path):
        """Save cache to file.

        Args:
            file_path (str): Path to save the cache.
        """
        try:
            with self._lock:
                payload = {
                    key: {"value": value, "timestamp": self.timestamps[key]}
                    for key, value in self.cache.items()
                }
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(file_path, 'w') as f:
                json.dump(payload, f)
            logger.info(f"Saved cache to {file_path}")
        except Exception as e:
            logger.error(f"Failed to save cache to {file_path}: {e}")

    def load(self, file_path):
        """Load cache from file.

        Corrupt files are logged and ignored.

        Args:
            file_path (str): Path to load the cache from.
        """
        try:
            if os.path.exists(file_path):
                with open(file_path, 'r') as f:
                    data = json.load(f)
                for key, entry in data.items():
                    self.put(key, entry["value"], entry.get("timestamp"))
                logger.info(f"Loaded cache from {file_path} with {len(self.cache)} entries")
        except Exception as e:
            logger.warning(f"Failed to load cache from {file_path}: {e}")
