import time

import numpy as np
import pytest

from src.utils.cache import LRUCache
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError
from src.utils.validation import parse_bool, parse_fraction, parse_h_list, parse_number_list


@pytest.mark.parametrize("text,value", [("1/16", 0.0625), ("0.0625", 0.0625), ("2^-4", 0.0625),
                                        ("1e-3", 1e-3), (" 3 ", 3.0)])
def test_parse_fraction(text, value):
    assert parse_fraction(text) == value


@pytest.mark.parametrize("text", ["abc", "1/0", ""])
def test_parse_fraction_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_fraction(text)


def test_parse_number_list():
    assert parse_number_list("1/16, 1/32,2^-6") == [1 / 16, 1 / 32, 1 / 64]


def test_parse_h_list_requires_halving():
    assert parse_h_list("1/16,1/32,1/64") == [1 / 16, 1 / 32, 1 / 64]
    assert parse_h_list(["1/8", 1 / 16]) == [1 / 8, 1 / 16]
    with pytest.raises(ConfigurationError):
        parse_h_list("1/16,1/48")
    with pytest.raises(ConfigurationError):
        parse_h_list("-1/16")


@pytest.mark.parametrize("text,value", [("true", True), ("Yes", True), ("1", True), ("off", False), ("", False)])
def test_parse_bool(text, value):
    assert parse_bool(text) is value


def test_parse_bool_rejects():
    with pytest.raises(ConfigurationError):
        parse_bool("maybe")


def test_cache_round_trip(tmp_path):
    cache = LRUCache(max_size=4, expiry_days=30)
    cache.put("a", np.array([1.0, 0.1, -3.5]))
    path = tmp_path / "cache.json"
    cache.save(str(path))
    loaded = LRUCache(max_size=4, expiry_days=30)
    loaded.load(str(path))
    np.testing.assert_array_equal(loaded.get("a"), [1.0, 0.1, -3.5])


def test_cache_evicts_least_recently_used():
    cache = LRUCache(max_size=2, expiry_days=30)
    cache.put("a", [1.0])
    cache.put("b", [2.0])
    cache.get("a")
    cache.put("c", [3.0])
    assert cache.get("b") is None
    assert cache.get("a") is not None and cache.get("c") is not None


def test_cache_expiry():
    cache = LRUCache(max_size=2, expiry_days=1)
    cache.put("old", [1.0], timestamp=time.time() - 2 * 24 * 3600)
    assert cache.get("old") is None
    assert len(cache) == 0


def test_corrupt_cache_file_is_ignored(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text("{not json")
    cache = LRUCache(max_size=2, expiry_days=1)
    cache.load(str(path))
    assert len(cache) == 0


def test_config_file(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("scheme=trapezoid\nh-list=1/16,1/32\n# comment\n")
    assert ConfigLoader().load_config_file(str(path)) == {"scheme": "trapezoid", "h_list": "1/16,1/32"}


def test_config_file_unknown_key(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("colour=blue\n")
    with pytest.raises(ConfigurationError):
        ConfigLoader().load_config_file(str(path))


def test_config_file_missing(tmp_path):
    with pytest.raises(ConfigurationError):
        ConfigLoader().load_config_file(str(tmp_path / "absent.env"))


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("SEMIMEX_THREADS", "4")
    assert ConfigLoader().get_config()["THREADS"] == 4
    monkeypatch.setenv("SEMIMEX_THREADS", "many")
    with pytest.raises(ConfigurationError):
        ConfigLoader().get_config()


def test_cache_dir_follows_the_environment(tmp_path):
    assert ConfigLoader().get_config()["CACHE_DIR"] == str(tmp_path / "cache")
