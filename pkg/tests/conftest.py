import numpy as np
import pytest
from hypothesis import settings

from ellw.params import ModularParams

settings.register_profile("ellw", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("ellw")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(params=[2, 3], ids=lambda n: f"N{n}")
def mp(request):
    return ModularParams(request.param, 0.5, 0.3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
