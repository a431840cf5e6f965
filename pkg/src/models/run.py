from sqlmodel import SQLModel, Field
from typing import Optional
from datetime import datetime
import uuid
from enum import Enum


class RunStatus(str, Enum):
    running = "running"
    succeeded = "succeeded"
    failed = "failed"


class RunRecord(SQLModel, table=True):
    __tablename__ = "run_records"

    id: uuid.UUID = Field(default_factory=uuid.uuid4, primary_key=True)
    command: str = Field(nullable=False, index=True)
    status: RunStatus = Field(default=RunStatus.running)
    seed: Optional[int] = Field(default=None)
    config_json: str = Field(default="{}")
    out_dir: Optional[str] = Field(default=None)
    exit_code: Optional[int] = Field(default=None)
    summary_json: Optional[str] = Field(default=None)

    created_at: datetime = Field(default_factory=datetime.utcnow)
    finished_at: Optional[datetime] = Field(default=None)
