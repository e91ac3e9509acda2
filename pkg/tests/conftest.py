import numpy as np
import pytest

from gaussamp.channel import ChannelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, eta_max=1.0, nbar_max=1.0):
    """Normalized draw: gamma0 in [0.1, 2], |eta'| <= eta_max, |gamma3'| <= 0.9."""
    gamma0 = rng.uniform(0.1, 2.0)
    e = rng.uniform(-eta_max, eta_max, 3) * gamma0 / 2
    g3p = rng.uniform(-0.9, 0.9)
    return ChannelParams(e[0], e[1], e[2], gamma0 * (1 + g3p), gamma0 * (1 - g3p), rng.uniform(0, nbar_max))


ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Store and print one acceptance line; the summary hook repeats them at the end."""
    line = f"{criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        terminalreporter.write_line(ACCEPTANCE[key])
