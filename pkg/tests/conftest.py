import pytest

from rankforge.field import make_field_ctx, paper_field


@pytest.fixture(scope="session")
def F81():
    """F_81 with alpha^4 = alpha + 1."""
    return paper_field("stated")


@pytest.fixture(scope="session")
def F81d():
    """F_81 with alpha^4 = alpha^3 + 1."""
    return paper_field("displayed")


@pytest.fixture(scope="session")
def F8():
    return make_field_ctx(2, 1, 3)


@pytest.fixture(scope="session")
def F16():
    return make_field_ctx(2, 1, 4)


@pytest.fixture(scope="session")
def F27():
    return make_field_ctx(3, 1, 3)


@pytest.fixture(scope="session")
def F32():
    return make_field_ctx(2, 1, 5)


@pytest.fixture(scope="session")
def F16_tower():
    """F_4 < F_16, e = 2, n = 2."""
    return make_field_ctx(2, 2, 2)


@pytest.fixture(scope="session")
def F81_tower():
    """F_9 < F_81, e = 2, n = 2."""
    return make_field_ctx(3, 2, 2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n].line())
