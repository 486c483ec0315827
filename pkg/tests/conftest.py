import sys

import pytest

from tmq import fock


@pytest.fixture(scope="session")
def trunc():
    return fock.TruncationSpec(n_max=24, guard=4)


@pytest.fixture(scope="session")
def small_trunc():
    return fock.TruncationSpec(n_max=12, guard=4)


@pytest.fixture(scope="session")
def verification_report(trunc):
    from tmq import verify

    return verify.run_verification(trunc)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
