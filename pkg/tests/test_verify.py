import pytest

from algcensus.poly import RatInterval
from algcensus.verify import SUITES, Check, SuiteConfig, run_suite

FAST = ["functional", "delta-integral", "omega2", "density-plateau", "vanishing", "defect", "mc-agreement", "jacobian",
        "gap", "perron", "reducible"]


@pytest.mark.parametrize("name", FAST)
def test_fast_suites_pass(name):
    checks = run_suite(name, SuiteConfig())
    assert checks
    assert all(isinstance(c, Check) for c in checks)
    failed = [c for c in checks if not c.passed]
    assert not failed, failed[:3]


def test_check_records_serialise():
    c = run_suite("delta-integral", SuiteConfig(degree=2, xi=0.01))[0]
    d = c.to_json()
    assert set(d) == {"suite", "name", "measured", "tolerance", "passed", "detail"}


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("missing", SuiteConfig())


def test_suite_names():
    assert {"functional", "delta-integral", "plateau", "gap", "jacobian", "close-roots"} <= set(SUITES)


def test_plateau_suite_fails_honestly_off_regime():
    checks = run_suite("plateau", SuiteConfig(degree=2, height=20, interval=RatInterval(5, 6)))
    assert not checks[0].passed


def test_alias_runs_same_suite():
    a = run_suite("theorem3", SuiteConfig(degree=3))
    b = run_suite("delta-integral", SuiteConfig(degree=3))
    assert a == b
