import pytest

from selberg_e2.tuples import LinearTuple, normalize


@pytest.fixture(scope="session")
def pair():
    """{n, n+2} normalized to {2n+1, 2n+3}."""
    return normalize(LinearTuple.parse("n,n+2"))


@pytest.fixture(scope="session")
def triple():
    """{n, n+2, n+6} normalized to {48n+5, 48n+7, 48n+11}."""
    return normalize(LinearTuple.parse("n,n+2,n+6"))


_acceptance: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        detail = dict(item.user_properties).get("detail", "")
        _acceptance[item.name] = ("PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, (status, detail) in _acceptance.items():
        terminalreporter.write_line(f"{status}  {name}  {detail}")
