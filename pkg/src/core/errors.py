from typing import Any, Dict, Optional


class ExitCode:
    OK = 0
    CHECK_FAILED = 1
    INVALID_INPUT = 2
    RESOURCE_CAP = 3


class LabError(Exception):
    """Base error; carries the process exit code the CLI maps it to."""

    exit_code = ExitCode.CHECK_FAILED

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context: Dict[str, Any] = context

    def __str__(self) -> str:
        if not self.context:
            return self.detail
        extra = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.detail} ({extra})"


class InvalidArgumentError(LabError, ValueError):
    exit_code = ExitCode.INVALID_INPUT


class ResourceCapError(LabError):
    exit_code = ExitCode.RESOURCE_CAP


class NumericalFailureError(LabError, ArithmeticError):
    exit_code = ExitCode.CHECK_FAILED

    def __init__(self, detail: str, diagnostics: Optional[Dict[str, Any]] = None, **context: Any):
        super().__init__(detail, **context)
        self.diagnostics = diagnostics or {}


class DegenerateEvaluationError(NumericalFailureError):
    pass


class CheckFailedError(LabError):
    exit_code = ExitCode.CHECK_FAILED

    def __init__(self, detail: str, checks: Optional[list] = None, **context: Any):
        super().__init__(detail, **context)
        self.checks = checks or []