import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gsnn_enum.presets import group_from_spec  # noqa: E402


@functools.lru_cache(maxsize=None)
def cached_group(name: str):
    return group_from_spec(name)


@pytest.fixture(scope="session")
def group():
    return cached_group


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=lambda k: int(k[2:])):
        terminalreporter.line(mod.RESULTS[key][1])
