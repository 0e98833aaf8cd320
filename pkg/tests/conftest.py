import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "qdl",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("qdl")

SEED = 20261015


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def disk_probes(n=32, r_max=0.9):
    """Golden-angle spiral of ``n`` points filling ``|z| <= r_max``."""
    k = np.arange(n)
    return r_max * np.sqrt((k + 0.5) / n) * np.exp(2j * np.pi * 0.6180339887498949 * k)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
