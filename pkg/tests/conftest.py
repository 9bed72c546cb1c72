import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "afl", deadline=None, max_examples=40, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("afl")

ORACLE_FILE = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def oracle():
    return json.loads(ORACLE_FILE.read_text())


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("AFL_CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, passed, detail = RESULTS[number]
        terminalreporter.write_line(f"[{number:2d}] {'PASS' if passed else 'FAIL'}  {title}: {detail}")
