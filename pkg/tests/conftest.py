import os
from pathlib import Path

import numpy as np
import pytest

from aobound.model import read_model

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def cpcs54_path() -> Path | None:
    """The public cpcs54 instance is not shipped; point AOBOUND_CPCS54 at a copy to enable its checks."""
    env = os.environ.get("AOBOUND_CPCS54")
    for cand in ([Path(env)] if env else []) + [FIXTURES / "cpcs54.uai"]:
        if cand.is_file():
            return cand
    return None


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def six_var_network():
    return read_model(FIXTURES / "six_var_network.uai")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        detail = ""
        if rep.skipped and isinstance(rep.longrepr, tuple):
            detail = rep.longrepr[2]
        _criteria.append((marker.args[0], status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in sorted(_criteria):
        line = f"{status:4}  {label}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
