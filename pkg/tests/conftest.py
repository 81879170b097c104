import functools
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from ballquot import catalog  # noqa: E402

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


@functools.lru_cache(maxsize=None)
def entry(name):
    return catalog.load(name)


PAIR_IDS = [i for i in catalog.list_ids() if catalog.load(i).kind == "pair"]


@pytest.fixture
def load():
    return entry


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        title, ok, failed = mod.RESULTS[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}"
        if failed:
            line += " -- failed: " + "; ".join(failed)
        terminalreporter.write_line(line)
