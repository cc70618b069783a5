from __future__ import annotations

import random
from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parents[1] / "src" / "filtquiv" / "data"

# criterion number -> (name, passed); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, passed = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {name}")
    passed = sum(ok for _, ok in ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE)} criteria passed")
