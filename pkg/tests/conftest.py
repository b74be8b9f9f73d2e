import pytest

from basiq import search
from basiq.kernel import check_derivation

# every Proved result produced anywhere in the session, re-checked independently
RECHECKS = {"total": 0, "failed": []}


def _recheck(goal, variant, result):
    RECHECKS["total"] += 1
    report = check_derivation(result.derivation, variant)
    if not report.ok or result.derivation.conclusion != goal:
        RECHECKS["failed"].append((str(goal), variant.name))


@pytest.fixture(autouse=True, scope="session")
def _observe_proofs():
    search.proof_observers.append(_recheck)
    yield
    search.proof_observers.remove(_recheck)


def pytest_sessionfinish(session, exitstatus):
    if RECHECKS["failed"]:
        print(f"\nproof re-check failures: {RECHECKS['failed']}")
        session.exitstatus = 1


# acceptance criteria run last so the soundness criterion sees every search
ACCEPTANCE_LINES = []


def pytest_collection_modifyitems(session, config, items):
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
