from pydantic_settings import BaseSettings
from typing import Optional
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseSettings):
    # Project settings
    PROJECT_NAME: str = os.getenv("PROJECT_NAME", "messep-lab")
    VERSION: str = "1.0.0"

    # Run ledger database
    DATABASE_URL: str = os.getenv("DATABASE_URL", "sqlite:///./messep_lab.db")
    DB_ECHO: bool = _flag("DB_ECHO", "false")
    RECORD_RUNS: bool = _flag("RECORD_RUNS", "true")

    # Memoized character tables (binary "MLC1" file)
    MESSEP_LAB_CACHE: Optional[str] = os.getenv("MESSEP_LAB_CACHE")

    # Resource caps and grid defaults
    STATE_CAP: int = int(os.getenv("STATE_CAP", "200000"))
    DEFAULT_GRID: int = int(os.getenv("DEFAULT_GRID", "1024"))
    DEFAULT_N_MAX: int = int(os.getenv("DEFAULT_N_MAX", "64"))
    MAX_THREADS: int = int(os.getenv("MAX_THREADS", "0"))

    # Numerical tolerances
    COMPLEX_TOL: float = float(os.getenv("COMPLEX_TOL", "1e-9"))
    SCHUR_COND_FLOOR: float = float(os.getenv("SCHUR_COND_FLOOR", "1e-10"))
    TABLEAU_MAX_WEIGHT: int = int(os.getenv("TABLEAU_MAX_WEIGHT", "8"))
    DT_MIN: float = float(os.getenv("DT_MIN", "1e-8"))
    WINDING_NODES: int = int(os.getenv("WINDING_NODES", "256"))
    NEWTON_MAX_ITER: int = int(os.getenv("NEWTON_MAX_ITER", "60"))

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    class Config:
        env_file = ".env"
        # Variables in .env that aren't defined here are ignored.
        extra = "ignore"


settings = Settings()
