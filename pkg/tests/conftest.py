import pytest

from vgcg.model import TransState, validate_params


@pytest.fixture
def case1():
    return validate_params(-10, -2, 0.01, 3, 10)


@pytest.fixture
def case2():
    return validate_params(-10, -0.5, -0.01, 3, 10)


@pytest.fixture
def case3():
    return validate_params(-10, -2, -0.01, 3, 10)


@pytest.fixture
def case4():
    return validate_params(-10, -0.5, 0.01, 3, 10)


@pytest.fixture
def left():
    return TransState(1.0, 3.0)


_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(label, ok, detail):
        request.config.stash[_RESULTS].append(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_RESULTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
