import pytest

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record an acceptance verdict; it is echoed live and in the summary."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def report(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}  ({detail})"
        request.config.stash[_VERDICTS].append((number, line))
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
