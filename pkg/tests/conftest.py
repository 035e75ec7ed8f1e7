import pytest

from locograph.census import build_census


@pytest.fixture(scope="session")
def census22():
    """d=2, r=2 census up to index 2000, shared across the session."""
    return build_census(2, 2, 2000)


def brute_partitions(n, min_part=1, max_part=None):
    """All partitions of n into parts in [min_part, max_part], non-increasing."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [[]]
    out = []
    for p in range(min(n, max_part), min_part - 1, -1):
        for rest in brute_partitions(n - p, min_part, p):
            out.append([p] + rest)
    return out


@pytest.fixture
def acceptance(request, capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
