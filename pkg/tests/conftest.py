import numpy as np
import pytest

from mmes.core import PureState


def random_state(n, d, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return PureState(n, d, z)


@pytest.fixture
def rand_state():
    return random_state


# criterion number -> (passed, detail, seconds); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail, secs = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {detail} ({secs:.2f}s)")
