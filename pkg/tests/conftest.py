import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import r16_forbidden, r16_rules  # noqa: E402
from stacksort.relations import discover_relations  # noqa: E402

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_collection_modifyitems(config, items):
    if os.environ.get("STACKSORT_SLOW"):
        return
    skip = pytest.mark.skip(reason="opt-in: set STACKSORT_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def rules_r16():
    return list(r16_rules())


@pytest.fixture(scope="session")
def forbidden_r16():
    return list(r16_forbidden())


@pytest.fixture(scope="session")
def rules_10():
    return discover_relations(10, 2)
