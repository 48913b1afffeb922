"""
================================================================================
torelli-lab - Nilpotent table cache
================================================================================
Shared storage for the per-degree lattice tables of surface quotients.

Backends, in order of preference:
    RedisBackend   TORELLI_LAB_REDIS_URL set and answering PING
    FileBackend    TORELLI_LAB_CACHE set (one JSON file per key)
    MemoryBackend  in-process LRU

Keys are md5 digests of the table identity, so the same (g, K, omega) tables
are found by every process that can see the backend.
================================================================================
"""

import hashlib
import json
import logging
import os
import threading
from typing import Any, Optional

from cachetools import LRUCache

try:
    import redis
    HAS_REDIS = True
except ImportError:
    HAS_REDIS = False

from .config import get_config

logger = logging.getLogger(__name__)

TABLE_FORMAT_VERSION = 1


class RedisBackend:
    """Redis-based storage shared between census workers."""
    def __init__(self, url: str):
        self.client = redis.from_url(url, decode_responses=True)
        self.url = url

    def get(self, key: str) -> Optional[str]:
        try:
            return self.client.get(key)
        except Exception as e:
            logger.error(f"Redis GET failed: {e}")
            return None

    def set(self, key: str, value: str):
        try:
            self.client.set(key, value)
        except Exception as e:
            logger.error(f"Redis SET failed: {e}")

    def delete(self, key: str):
        try:
            self.client.delete(key)
        except Exception as e:
            logger.error(f"Redis DELETE failed: {e}")


class FileBackend:
    """One JSON document per key under a directory."""
    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, key.replace(":", "_") + ".json")

    def get(self, key: str) -> Optional[str]:
        try:
            with open(self._path(key), encoding="utf-8") as fh:
                return fh.read()
        except FileNotFoundError:
            return None
        except OSError as e:
            logger.error(f"Cache file read failed for {key}: {e}")
            return None

    def set(self, key: str, value: str):
        path = self._path(key)
        tmp = path + ".tmp"
        with self._lock:
            try:
                with open(tmp, "w", encoding="utf-8") as fh:
                    fh.write(value)
                os.replace(tmp, path)
            except OSError as e:
                logger.error(f"Cache file write failed for {key}: {e}")

    def delete(self, key: str):
        try:
            os.remove(self._path(key))
        except FileNotFoundError:
            pass


class MemoryBackend:
    """Fallback in-memory storage."""
    def __init__(self, max_size: int = 256):
        self._data: LRUCache = LRUCache(maxsize=max_size)
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            return self._data.get(key)

    def set(self, key: str, value: str):
        with self._lock:
            self._data[key] = value

    def delete(self, key: str):
        with self._lock:
            self._data.pop(key, None)


def table_key(*parts: Any) -> str:
    """md5 of the JSON form of the table identity."""
    data = json.dumps([TABLE_FORMAT_VERSION, *parts], sort_keys=True, default=list)
    return hashlib.md5(data.encode()).hexdigest()


class TableCache:
    """Unified cache interface with auto-fallback."""
    def __init__(self, prefix: str = "torelli_lab:", cache_dir: Optional[str] = None,
                 redis_url: Optional[str] = None):
        self.prefix = prefix
        self.is_redis = False
        if HAS_REDIS and redis_url:
            try:
                self.backend = RedisBackend(redis_url)
                self.backend.client.ping()
                self.is_redis = True
                logger.info(f"TableCache initialized with Redis: {redis_url}")
                return
            except Exception as e:
                logger.warning(f"⚠️ Redis connection failed, falling back: {e}")
        if cache_dir:
            self.backend = FileBackend(cache_dir)
            logger.info(f"TableCache initialized with files under {cache_dir}")
        else:
            self.backend = MemoryBackend()
            logger.debug("TableCache initialized with MemoryBackend")

    @classmethod
    def from_config(cls) -> "TableCache":
        config = get_config()
        return cls(cache_dir=config.cache_dir, redis_url=config.redis_url)

    def _k(self, key: str) -> str:
        return f"{self.prefix}{key}"

    def get_json(self, key: str) -> Optional[Any]:
        data = self.backend.get(self._k(key))
        if data:
            try:
                return json.loads(data)
            except Exception:
                logger.warning(f"⚠️ Discarding unreadable cache entry {key}")
                return None
        return None

    def set_json(self, key: str, value: Any):
        try:
            self.backend.set(self._k(key), json.dumps(value))
        except Exception as e:
            logger.error(f"Cache SET failed for {key}: {e}")

    def delete(self, key: str):
        self.backend.delete(self._k(key))


_table_cache: Optional[TableCache] = None
_table_cache_lock = threading.Lock()


def get_table_cache() -> TableCache:
    """Process-wide cache built from the environment on first use."""
    global _table_cache
    with _table_cache_lock:
        if _table_cache is None:
            _table_cache = TableCache.from_config()
        return _table_cache


def reset_table_cache() -> None:
    global _table_cache
    with _table_cache_lock:
        _table_cache = None
