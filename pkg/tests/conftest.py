import numpy as np
import pytest

from dfnet.signal_model import ArrayConfig, GainPattern


@pytest.fixture
def array4():
    return ArrayConfig(4, 0.1, 0.122, GainPattern(0.1, 1.0, 2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Register one acceptance line; call before asserting so failures are reported too."""
    def _record(name: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((name, bool(passed), detail))
        return bool(passed)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
