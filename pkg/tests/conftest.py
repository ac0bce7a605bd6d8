import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

KAT_DIR = os.path.join(os.path.dirname(__file__), "..", "kats")


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def kat_text(name: str) -> str:
    with open(os.path.join(KAT_DIR, name + ".rsp")) as f:
        return f.read()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
