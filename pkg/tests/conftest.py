import pytest

from qshape.category import QuiverSpec, build_category
from qshape.exactlin import GF, QQ


@pytest.fixture(scope="session")
def cpx():
    return build_category(QuiverSpec.linear(), (-12, 12), QQ)


@pytest.fixture(scope="session")
def cpx5():
    return build_category(QuiverSpec.linear(), (-14, 14), GF(5))


@pytest.fixture(scope="session")
def ncpx3():
    return build_category(QuiverSpec.nlinear(3), (-16, 16), QQ)


@pytest.fixture(scope="session")
def cyc3():
    return build_category(QuiverSpec.cyclic(3), None, QQ)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get(
        "tests.test_acceptance"
    )
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n][1])
