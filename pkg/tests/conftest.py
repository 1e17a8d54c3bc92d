import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture
def fig1():
    from guarded_proc.cli import load

    return load("fixture:fig1.glts").system


@pytest.fixture
def hml_example():
    """The system for p = a.(b + c) and q = a.b + a.c, with their state ids."""
    from guarded_proc.cli import load

    loaded = load("fixture:hml.ccs", ["p", "q"])
    return loaded.system, loaded.state("p"), loaded.state("q")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
