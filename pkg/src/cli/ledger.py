from sqlmodel import Session, select, desc
from datetime import datetime
from typing import Any, Dict, Optional
import json
import logging
import uuid

from ..models.run import RunRecord, RunStatus
from ..schemas.run import RunConfig, RunRead
from ..db import session as db

logger = logging.getLogger(__name__)

# --- 1. RUN LIFECYCLE ---

def start_run(config: RunConfig, engine=None):
    with Session(engine or db.sync_engine) as session:
        record = RunRecord(
            command=config.command, seed=config.seed, out_dir=config.out,
            config_json=config.model_dump_json(), status=RunStatus.running
        )
        session.add(record)
        session.commit()
        session.refresh(record)
        return {"status": "success", "message": f"Run '{config.command}' started.", "run_id": str(record.id)}


def finish_run(run_id: str, exit_code: int, summary: Optional[Dict[str, Any]] = None, engine=None):
    with Session(engine or db.sync_engine) as session:
        try: run_uuid = uuid.UUID(run_id)
        except ValueError: return {"status": "error", "message": "Invalid run ID format."}

        record = session.get(RunRecord, run_uuid)
        if not record:
            return {"status": "error", "message": f"Run ID {run_id} not found."}

        record.exit_code = exit_code
        record.status = RunStatus.succeeded if exit_code == 0 else RunStatus.failed
        record.summary_json = json.dumps(summary or {}, default=str)
        record.finished_at = datetime.utcnow()
        session.add(record)
        session.commit()
        return {"status": "success", "message": f"Run {run_id} {record.status.value}."}

# --- 2. LISTING ---

def list_runs(limit: int = 20, command: Optional[str] = None, engine=None):
    with Session(engine or db.sync_engine) as session:
        query = select(RunRecord)
        if command:
            query = query.where(RunRecord.command == command)
        # Newest first so the listing is stable
        records = session.exec(query.order_by(desc(RunRecord.created_at)).limit(limit)).all()
        runs = [RunRead.model_validate(r, from_attributes=True).model_dump(mode="json") for r in records]
        return {"status": "success", "runs": runs}


def get_run(run_id: str, engine=None):
    with Session(engine or db.sync_engine) as session:
        try: run_uuid = uuid.UUID(run_id)
        except ValueError: return {"status": "error", "message": "Invalid run ID format."}
        record = session.get(RunRecord, run_uuid)
        if not record:
            return {"status": "error", "message": f"Run ID {run_id} not found."}
        run = RunRead.model_validate(record, from_attributes=True).model_dump(mode="json")
        run["summary"] = json.loads(record.summary_json) if record.summary_json else None
        return {"status": "success", "run": run}
