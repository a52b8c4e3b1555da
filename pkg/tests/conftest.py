from __future__ import annotations

import time
from pathlib import Path

import pytest

from sivic.cli import main
from sivic.dynamics import SequenceOracle
from sivic.setpoints import setpoint_model


@pytest.fixture(scope="session")
def model_a():
    return setpoint_model("A")


@pytest.fixture(scope="session")
def model_b():
    return setpoint_model("B")


@pytest.fixture(scope="session")
def oracle_a(model_a):
    return SequenceOracle.from_model(model_a)


@pytest.fixture(scope="session")
def oracle_b(model_b):
    return SequenceOracle.from_model(model_b)


@pytest.fixture(scope="session")
def table2_runs(tmp_path_factory):
    """Two identical seeded batch runs, shared by the CLI and acceptance tests.

    Returns (first csv, second csv, wall-clock seconds of the first run).
    """
    outdir = tmp_path_factory.mktemp("table2")
    first = outdir / "run1.csv"
    second = outdir / "run2.csv"
    t0 = time.monotonic()
    assert main(["table2", "--seed", "7", "--out", str(first)]) == 0
    first_duration = time.monotonic() - t0
    assert main(["table2", "--seed", "7", "--out", str(second)]) == 0
    return first, second, first_duration


def read_table(path: Path) -> list[dict[str, str]]:
    import csv

    with path.open() as fh:
        return list(csv.DictReader(fh))
