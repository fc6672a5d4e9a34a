import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from btsep.datamodel import ModelKind, build_dataset, parse_dataset  # noqa: E402
from btsep.separation import GlobalClass, saturate  # noqa: E402

EX1 = "a,b,1\nb,a,1\nc,d,1\nd,c,1\na,c,1\n"
EX2 = "a,b,1\nb,a,1\nc,a,2\nc,d,1\nd,c,1\n"
EX3 = "a,b,2\n" + "a,b,0\n" * 3 + "a,c,1\n" * 4 + "b,c,2\n" * 2 + "b,c,0\n" * 2

DATA = Path(__file__).parent / "data"


def overlap_dataset(rng: np.random.Generator, model: ModelKind, t: int, games_per_pair: int = 4):
    """Random dataset whose saturated analysis is a single class, by rejection.

    Team-specific effects need three teams: with two, aH-bV and bH-aV never
    connect, and a+ and b+ only ever appear as a product.
    """
    if model in (ModelKind.TEAM_ORDER, ModelKind.TEAM_TIE):
        t = max(t, 3)
    for _ in range(10_000):
        rows = []
        for i in range(t):
            for j in range(i + 1, t):
                for _ in range(games_per_pair):
                    a, b = (i, j) if rng.random() < 0.5 else (j, i)
                    rows += random_games_between(rng, model, a, b)
        ds = build_dataset(rows, model)
        if saturate(ds).global_class is GlobalClass.OVERLAP:
            return ds
    raise RuntimeError(f"no overlapping {model.value} dataset found for t={t}")


def random_games_between(rng, model, a, b):
    outcomes = ["1", "2", "0"] if model.has_ties else ["1", "2"]
    return [(f"t{a}", f"t{b}", outcomes[rng.integers(len(outcomes))])]


@pytest.fixture
def ex1():
    return parse_dataset(EX1, "basic")


@pytest.fixture
def ex2():
    return parse_dataset(EX2, "single-order")


_results: list[str] = []


@pytest.fixture
def report():
    """Collects the one-line verdict of each acceptance criterion."""

    def add(line: str) -> None:
        _results.append(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if _results:
        terminalreporter.section("acceptance criteria")
        for line in _results:
            terminalreporter.write_line(line)
