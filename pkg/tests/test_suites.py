import pytest

from hyperflux.suites import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    rep = run_suite(name)
    failed = [c["name"] for c in rep["checks"] if not c["passed"]]
    assert rep["passed"], failed


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
