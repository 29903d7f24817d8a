import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jacobijets import build  # noqa: E402

CATALOG = ["m6", "v1", "v3", "kaplan-n6"]


@functools.lru_cache(maxsize=None)
def space(name):
    """Catalog spaces are built once per session; their jet caches are shared too."""
    return build(name)


@pytest.fixture(params=CATALOG)
def catalog_space(request):
    return space(request.param)


def pytest_terminal_summary(terminalreporter):
    from acceptance_registry import LINES

    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(LINES, key=int):
        terminalreporter.write_line(LINES[key])
