from __future__ import annotations

from pathlib import Path

import pytest

from vfsplit.session import parse_session

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
CORPUS_FILES = sorted(CORPUS.glob("*.json"))


def load(name: str):
    return parse_session(CORPUS / f"{name}.json")


@pytest.fixture(scope="session")
def f2():
    return load("f2")


@pytest.fixture(scope="session")
def f3():
    return load("f3")


@pytest.fixture(scope="session")
def corpus():
    return {p.stem: parse_session(p) for p in CORPUS_FILES}


# Lines recorded by test_acceptance, echoed after the run so they show without -s.
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
