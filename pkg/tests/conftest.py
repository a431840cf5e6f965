import numpy as np
import pytest
from sqlmodel import SQLModel, create_engine

from src.combinatorics.cache import reset_character_cache
from src.messep import LatticeParams

SEED = 12345


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def small_ring():
    return LatticeParams(L=6, N=2)


@pytest.fixture
def ledger_engine(tmp_path, monkeypatch):
    """File-backed SQLite ledger swapped in for the configured engine."""
    from src.db import session as db
    from src.models import RunRecord  # noqa: F401

    engine = create_engine(f"sqlite:///{tmp_path / 'ledger.db'}", connect_args={"check_same_thread": False})
    SQLModel.metadata.create_all(engine)
    monkeypatch.setattr(db, "sync_engine", engine)
    return engine


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path


@pytest.fixture(autouse=True)
def fresh_character_cache():
    # no cache file unless a test asks for one
    reset_character_cache(None)
    yield
    reset_character_cache(None)
