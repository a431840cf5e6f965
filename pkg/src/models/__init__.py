from .run import RunRecord, RunStatus

__all__ = ["RunRecord", "RunStatus"]
