from sqlmodel import SQLModel
from pydantic import BaseModel, ConfigDict, Field
from typing import Any, Dict, List, Optional
from datetime import datetime
import uuid
from ..models.run import RunStatus


class RunConfig(BaseModel):
    """One command invocation; the JSON form of --config files."""

    model_config = ConfigDict(extra="forbid")

    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    out: Optional[str] = None
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    threads: int = Field(default=0, ge=0)
    tolerance_scale: float = Field(default=1.0, gt=0)
    tolerances: Dict[str, float] = Field(default_factory=dict)


class RunRead(SQLModel):
    id: uuid.UUID
    command: str
    status: RunStatus
    seed: Optional[int] = None
    out_dir: Optional[str] = None
    exit_code: Optional[int] = None
    created_at: datetime
    finished_at: Optional[datetime] = None


class Manifest(BaseModel):
    command: str
    seed: int
    params: Dict[str, Any]
    versions: Dict[str, str]
    files: List[str]
    summary: Dict[str, Any] = Field(default_factory=dict)
