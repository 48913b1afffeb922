import pytest

from torelli_lab.cache import FileBackend, MemoryBackend, TableCache, get_table_cache, reset_table_cache, table_key
from torelli_lab.config import get_config
from torelli_lab.errors import (
    EXIT_INPUT,
    EXIT_VERIFICATION,
    ConfigError,
    InputError,
    ParseError,
    VerificationError,
    exit_code_for,
)
from torelli_lab.nilpotent.surface import SurfaceQuotient


def test_table_key_is_stable():
    assert table_key("surface", 2, 3) == table_key("surface", 2, 3)
    assert table_key("surface", 2, 3) != table_key("surface", 2, 4)
    assert len(table_key("x")) == 32


def test_memory_backend_round_trip():
    cache = TableCache()
    assert isinstance(cache.backend, MemoryBackend)
    cache.set_json("k", {"a": [1, 2]})
    assert cache.get_json("k") == {"a": [1, 2]}
    cache.delete("k")
    assert cache.get_json("k") is None


def test_file_backend_round_trip(tmp_path):
    cache = TableCache(cache_dir=str(tmp_path))
    assert isinstance(cache.backend, FileBackend)
    cache.set_json("tables", [1, 2, 3])
    assert TableCache(cache_dir=str(tmp_path)).get_json("tables") == [1, 2, 3]


def test_unreadable_entry_is_discarded(tmp_path):
    cache = TableCache(cache_dir=str(tmp_path))
    cache.backend.set(cache._k("broken"), "{not json")
    assert cache.get_json("broken") is None


def test_redis_failure_falls_back(tmp_path):
    cache = TableCache(cache_dir=str(tmp_path), redis_url="redis://127.0.0.1:1/0")
    assert not cache.is_redis
    assert isinstance(cache.backend, FileBackend)


def test_surface_tables_are_cached(tmp_path, monkeypatch, fresh_table_cache):
    monkeypatch.setenv("TORELLI_LAB_CACHE", str(tmp_path))
    reset_table_cache()
    q = SurfaceQuotient(1, 3)
    q.lattices
    assert get_table_cache().get_json(q.key) is not None
    assert any(p.suffix == ".json" for p in tmp_path.iterdir())


def test_config_defaults(monkeypatch):
    for name in ("TORELLI_LAB_DEGREE_BOUND", "TORELLI_LAB_JOBS", "TORELLI_LAB_CHECKPOINT_EVERY"):
        monkeypatch.delenv(name, raising=False)
    config = get_config()
    assert config.degree_bound == 4
    assert config.jobs == 1
    assert config.checkpoint_every == 500


@pytest.mark.parametrize("name, value", [
    ("TORELLI_LAB_DEGREE_BOUND", "1"),
    ("TORELLI_LAB_JOBS", "many"),
    ("TORELLI_LAB_CHECKPOINT_EVERY", "0"),
])
def test_config_rejects_bad_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError) as info:
        get_config()
    assert info.value.name == name


def test_exit_codes():
    assert exit_code_for(VerificationError("x")) == EXIT_VERIFICATION
    assert exit_code_for(InputError("x")) == EXIT_INPUT
    assert exit_code_for(ParseError("f.fg", 3, "bad")) == EXIT_INPUT
    assert str(ParseError("f.fg", 3, "bad")) == "f.fg:3: bad"
    assert isinstance(ConfigError("X", "y"), InputError)
