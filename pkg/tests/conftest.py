import os
import tempfile

# Keep tests self-contained: in-memory census store, no broker, no shared cache
os.environ.setdefault("DATABASE_URL", "sqlite:///:memory:")
os.environ.setdefault("CELERY_ENABLED", "false")
os.environ.setdefault("TORELLI_LAB_HOME", os.path.join(tempfile.gettempdir(), "torelli_lab_tests"))
os.environ.pop("TORELLI_LAB_CACHE", None)
os.environ.pop("TORELLI_LAB_REDIS_URL", None)

import pytest

from torelli_lab.fatgraph import build, seed_spine


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks (deselect with -m 'not slow')")


@pytest.fixture
def theta():
    return build([1, 2, 0, 4, 5, 3], [3, 4, 5, 0, 1, 2])


@pytest.fixture(scope="session")
def genus2():
    return seed_spine(2)


@pytest.fixture
def fresh_table_cache():
    from torelli_lab.cache import reset_table_cache
    from torelli_lab.nilpotent import surface

    reset_table_cache()
    surface._lattice_memo.clear()
    yield
    reset_table_cache()


@pytest.fixture
def census_db():
    from torelli_lab import database

    database.reset_engine()
    database.init_database(drop_existing=True)
    yield database
    database.reset_engine()
