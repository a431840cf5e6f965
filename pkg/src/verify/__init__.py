from .suites import Check, SuiteReport, run_suite, suite_names

__all__ = ["Check", "SuiteReport", "run_suite", "suite_names"]
