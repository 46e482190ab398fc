from __future__ import annotations

from pathlib import Path

import pytest

from localchern import PolyRing

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture
def xyz() -> PolyRing:
    return PolyRing(["x", "y", "z"])


@pytest.fixture
def xy() -> PolyRing:
    return PolyRing(["x", "y"])


@pytest.fixture
def problems() -> Path:
    return PROBLEMS


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    """Store one acceptance verdict; the terminal summary prints them all."""
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
