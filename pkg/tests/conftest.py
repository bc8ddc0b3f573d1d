import json
from pathlib import Path

import pytest

from fieldnet import channel as ch
from fieldnet import loadgen as lg

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def catalog():
    return ch.default_catalog()


@pytest.fixture
def constant_profile():
    def make(rtt_ms, cap=1000.0, overhead=0.0, loss=0.0):
        model = ch.LatencyModel(rtt_ms, 0.0, 0.0, ch.Distribution.CONSTANT)
        return ch.ChannelProfile("const", cap, cap, model, overhead, loss)

    return make


@pytest.fixture
def tn_profile():
    """Truncated-normal (50, 5, 40) link with a generous cap."""
    return ch.ChannelProfile("tn", 1000.0, 1000.0, ch.LatencyModel(50.0, 5.0, 40.0))


@pytest.fixture
def echo_server():
    with lg.EchoServer() as srv:
        yield srv


@pytest.fixture(scope="session")
def loopback_calibration():
    return json.loads((FIXTURES / "loopback_calibration.json").read_text())


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
