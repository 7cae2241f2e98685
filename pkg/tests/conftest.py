import pytest
from hypothesis import HealthCheck, settings

from koszul_mf import GF, QQ, RingTower

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)


@pytest.fixture
def T2():
    """e = 2, u = 1 over Q: pi = s^2."""
    return RingTower(QQ, 2, 1)


@pytest.fixture
def T2_f5():
    return RingTower(GF(5), 2, 1)
