import pytest

from src.core.errors import InvalidArgumentError
from src.verify import run_suite, suite_names
from src.verify.suites import Checks, SUITES


def test_suite_names_include_all():
    names = suite_names()
    assert names[-1] == "all"
    assert set(SUITES) <= set(names)


def test_unknown_suite_rejected():
    with pytest.raises(InvalidArgumentError):
        run_suite("nonsense")


@pytest.mark.parametrize("scale", [0.0, -1.0])
def test_nonpositive_scale_rejected(scale):
    with pytest.raises(InvalidArgumentError):
        run_suite("characters", scale)


def test_checks_scale_tolerances():
    c = Checks(scale=10.0)
    c.at_most("small", 5e-10, 1e-10)
    c.at_most("nan", float("nan"), 1.0)
    c.exact("exact", 0)
    c.exact("exact_bad", 2)
    c.within("ratio", 4.1, 3.5, 4.5)
    passed = {x.name: x.passed for x in c.items}
    assert passed == {"small": True, "nan": False, "exact": True, "exact_bad": False, "ratio": True}
    # exact checks ignore the scale
    assert c.items[2].tolerance == 0.0


def test_characters_suite_passes():
    (report,) = run_suite("characters")
    assert report.suite == "characters"
    assert report.passed, report.failures
    d = report.as_dict()
    assert set(d) == {"suite", "passed", "elapsed", "checks"}
    assert all({"name", "value", "tolerance", "passed", "detail"} <= set(c) for c in d["checks"])


def test_eigenbasis_suite_passes():
    (report,) = run_suite("eigenbasis")
    names = {c.name for c in report.checks}
    assert {"eigen_residual", "gram_deviation", "spectrum_deviation", "reversibility",
            "hook_eigenvalue", "double_hook_eigenvalue"} <= names
    assert report.passed, report.failures


def test_eigenbasis_suite_fails_under_tiny_scale():
    (report,) = run_suite("eigenbasis", tolerance_scale=1e-30)
    assert not report.passed
    assert "gram_deviation" in report.failures


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["schur-identities", "spectral-gap", "hydro", "udbm", "simulator"])
def test_heavy_suites_pass(suite):
    (report,) = run_suite(suite)
    assert report.passed, report.failures
