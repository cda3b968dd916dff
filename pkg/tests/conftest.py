import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def mc_se(rate, trials):
    """Monte Carlo standard error of an empirical frequency."""
    return np.sqrt(np.asarray(rate) * (1.0 - np.asarray(rate)) / trials)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line per acceptance criterion and assert on it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def _report(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} | {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
