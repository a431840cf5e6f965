from sqlmodel import create_engine, SQLModel
from ..core.config import settings


# Helper function to ensure URL format is correct
def get_db_url():
    url = settings.DATABASE_URL
    if not url:
        return "sqlite:///messep_lab.db"
    return url.replace("postgres://", "postgresql://")


db_url = get_db_url()

# --- CONFIGURATION FOR SQLITE ---
if db_url.startswith("sqlite"):
    sync_engine = create_engine(
        db_url,
        echo=settings.DB_ECHO,
        connect_args={"check_same_thread": False}
    )

# --- ANY OTHER BACKEND ---
else:
    sync_engine = create_engine(db_url, echo=settings.DB_ECHO, pool_pre_ping=True)


def create_db_and_tables(engine=None):
    # Import registers the tables on the metadata
    from ..models import RunRecord  # noqa: F401
    SQLModel.metadata.create_all(engine or sync_engine)
