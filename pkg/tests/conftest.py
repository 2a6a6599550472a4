import random
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
CORPUS = ROOT / "corpus"


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=2024, help="seed for the randomized suites")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


@pytest.fixture(scope="session")
def ex_base():
    from bilat.base import parse_base
    return parse_base((DATA / "example_base.json").read_text())


_ACCEPTANCE: list[str] = []


class _Recorder:
    def record(self, number, title, ok, elapsed, limit, detail=""):
        ok = ok and elapsed < limit
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s / limit {limit}s)"
        if detail:
            line += f"  {detail}"
        _ACCEPTANCE.append(line)
        return ok


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
