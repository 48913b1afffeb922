"""
================================================================================
torelli-lab - Runtime configuration
================================================================================
Environment-driven settings (a .env file is honoured through python-dotenv in
the package __init__).

CONFIGURATION:
    TORELLI_LAB_CACHE            Directory for nilpotent quotient tables
    TORELLI_LAB_DEGREE_BOUND     Highest Lie degree handled (default: 4)
    TORELLI_LAB_JOBS             Census worker threads (default: 1)
    TORELLI_LAB_CHECKPOINT_EVERY Records between census checkpoints (default: 500)
    TORELLI_LAB_REDIS_URL        Optional shared table cache
================================================================================
"""

import os
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.environ.get(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(name, raw) from None
    if value < minimum:
        raise ConfigError(name, raw)
    return value


@dataclass(frozen=True)
class LabConfig:
    """Resolved settings for one process."""
    cache_dir: Optional[str] = None
    degree_bound: int = 4
    jobs: int = 1
    checkpoint_every: int = 500
    redis_url: Optional[str] = None

    @classmethod
    def from_env(cls) -> "LabConfig":
        return cls(
            cache_dir=os.environ.get('TORELLI_LAB_CACHE') or None,
            degree_bound=_env_int('TORELLI_LAB_DEGREE_BOUND', 4, minimum=2),
            jobs=_env_int('TORELLI_LAB_JOBS', 1),
            checkpoint_every=_env_int('TORELLI_LAB_CHECKPOINT_EVERY', 500),
            redis_url=os.environ.get('TORELLI_LAB_REDIS_URL') or None,
        )


def get_config() -> LabConfig:
    """Read the configuration fresh from the environment."""
    return LabConfig.from_env()
