import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relsing.catalog import a2_fixture, cubic_fixture, dual_numbers_fixture  # noqa: E402
from relsing.exactla import FieldSpec  # noqa: E402
from relsing.subcat import AddCategory  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def dual():
    d = dual_numbers_fixture()
    d["C"] = AddCategory([d["A"]], name="C")
    return d


@pytest.fixture(scope="session")
def cubic():
    d = cubic_fixture()
    d["C"] = AddCategory([d["M3"]], name="C")
    return d


@pytest.fixture(scope="session")
def a2():
    d = a2_fixture()
    d["C"] = AddCategory([d["A"]], name="C")
    return d


@pytest.fixture(scope="session")
def dual_gf3():
    d = dual_numbers_fixture(FieldSpec.prime(3))
    d["C"] = AddCategory([d["A"]], name="C")
    return d


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, elapsed, limit in sorted(mod.RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} "
                                    f"({elapsed:.1f}s / {limit}s)")
