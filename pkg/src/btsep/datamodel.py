"""Teams, games, outcomes and model variants; CSV ingestion and validation.

Counts are kept as integers scaled by two so that a tie split into half a
win and half a loss stays exact.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np


class DataError(ValueError):
    """Raised for malformed or inconsistent game data."""


class Outcome(enum.IntEnum):
    # values are the outcome index k: 1 first wins, 2 second wins, 0 tie
    TIE = 0
    FIRST_WINS = 1
    SECOND_WINS = 2

    @classmethod
    def parse(cls, token: str) -> "Outcome":
        try:
            return _OUTCOME_TOKENS[token.strip().upper()]
        except KeyError:
            raise DataError(f"unknown outcome token {token!r}") from None


_OUTCOME_TOKENS = {
    "1": Outcome.FIRST_WINS,
    "2": Outcome.SECOND_WINS,
    "0": Outcome.TIE,
    "W": Outcome.FIRST_WINS,
    "L": Outcome.SECOND_WINS,
    "T": Outcome.TIE,
}


class ModelKind(enum.Enum):
    BASIC = "basic"
    SINGLE_ORDER = "single-order"
    TEAM_ORDER = "team-order"
    SINGLE_TIE = "single-tie"
    TEAM_TIE = "team-tie"

    @property
    def has_ties(self) -> bool:
        return self in (ModelKind.SINGLE_TIE, ModelKind.TEAM_TIE)

    @property
    def has_order(self) -> bool:
        return self in (ModelKind.SINGLE_ORDER, ModelKind.TEAM_ORDER)

    @classmethod
    def parse(cls, name: str | "ModelKind") -> "ModelKind":
        if isinstance(name, ModelKind):
            return name
        key = name.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown model {name!r}; expected one of {[k.value for k in cls]}")


@dataclass(frozen=True)
class TeamId:
    index: int
    label: str


@dataclass(frozen=True)
class GameRecord:
    """One game. ``first`` is the home team when order effects are modelled."""

    first: int
    second: int
    outcome: Outcome

    def __post_init__(self):
        if self.first == self.second:
            raise DataError(f"self-play: team {self.first} listed against itself")


@dataclass(frozen=True)
class WeightedGame:
    first: int
    second: int
    outcome: Outcome
    weight: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """Validated game records plus oriented aggregate counts.

    ``counts2[i, j, k]`` is twice the (possibly half-integer) number of games
    with ``i`` first, ``j`` second and outcome ``k``.
    """

    labels: tuple[str, ...]
    games: tuple[GameRecord, ...]
    model: ModelKind
    half_win: bool = False
    counts2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = len(self.labels)
        if len(set(self.labels)) != t:
            raise DataError("team labels must be unique")
        if not self.games:
            raise DataError("no games")
        if self.half_win and self.model.has_ties:
            raise DataError("half-win preprocessing applies only to models without ties")
        seen = np.zeros(t, dtype=bool)
        for g in self.games:
            for idx in (g.first, g.second):
                if not 0 <= idx < t:
                    raise DataError(f"game references unknown team index {idx}")
            if g.outcome is Outcome.TIE and not (self.model.has_ties or self.half_win):
                raise DataError(
                    f"tie between {self.labels[g.first]} and {self.labels[g.second]} "
                    f"is not allowed under model {self.model.value} without --half-win"
                )
            seen[g.first] = seen[g.second] = True
        if not seen.all():
            missing = [self.labels[i] for i in np.flatnonzero(~seen)]
            raise DataError(f"teams with zero games: {', '.join(missing)}")

        counts2 = np.zeros((t, t, 3), dtype=np.int64)
        for g in self.weighted_games():
            counts2[g.first, g.second, g.outcome] += round(2 * g.weight)
        counts2.setflags(write=False)
        object.__setattr__(self, "counts2", counts2)

    @property
    def t(self) -> int:
        return len(self.labels)

    @property
    def teams(self) -> list[TeamId]:
        return [TeamId(i, s) for i, s in enumerate(self.labels)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def weighted_games(self) -> Iterator[WeightedGame]:
        """Games as the likelihood sees them; under half-win a tie becomes two half games."""
        for g in self.games:
            if g.outcome is Outcome.TIE and self.half_win:
                yield WeightedGame(g.first, g.second, Outcome.FIRST_WINS, 0.5)
                yield WeightedGame(g.first, g.second, Outcome.SECOND_WINS, 0.5)
            else:
                yield WeightedGame(g.first, g.second, g.outcome, 1.0)

    @property
    def y(self) -> np.ndarray:
        """Venue-oriented outcome counts ``y[i, j, k]`` (``i`` first)."""
        return self.counts2 / 2.0

    @property
    def pooled(self) -> np.ndarray:
        """Orientation-free counts: ``pooled[i, j, 1]`` = wins of i over j, ``[..., 2]`` losses, ``[..., 0]`` ties."""
        y = self.y
        out = y.copy()
        out[:, :, 1] += y[:, :, 2].T
        out[:, :, 2] += y[:, :, 1].T
        out[:, :, 0] += y[:, :, 0].T
        return out

    @property
    def n(self) -> np.ndarray:
        """Symmetric number of games between each pair."""
        return self.pooled.sum(axis=2)

    def record(self, i: int) -> tuple[float, float, float]:
        """Observed (wins, losses, ties) of team ``i``; half-win splits are already applied."""
        p = self.pooled[i]
        return float(p[:, 1].sum()), float(p[:, 2].sum()), float(p[:, 0].sum())

    def with_model(self, model: ModelKind, half_win: bool | None = None) -> "Dataset":
        return Dataset(self.labels, self.games, model, self.half_win if half_win is None else half_win)


def build_dataset(
    rows: Iterable[tuple[str, str, Outcome | str]],
    model: ModelKind | str,
    half_win: bool = False,
) -> Dataset:
    """Assemble a dataset from ``(first, second, outcome)`` label triples.

    Team indices follow first appearance.
    """
    model = ModelKind.parse(model)
    labels: dict[str, int] = {}
    games = []
    for first, second, outcome in rows:
        if not isinstance(outcome, Outcome):
            outcome = Outcome.parse(str(outcome))
        i = labels.setdefault(first, len(labels))
        j = labels.setdefault(second, len(labels))
        if i == j:
            raise DataError(f"self-play: {first!r} listed against itself")
        games.append(GameRecord(i, j, outcome))
    return Dataset(tuple(labels), tuple(games), model, half_win)


def parse_dataset(text: str, model: ModelKind | str, half_win: bool = False) -> Dataset:
    """Parse ``first_team,second_team,outcome`` CSV text.

    Blank lines and lines starting with ``#`` are skipped. Outcome tokens are
    ``1``/``2``/``0`` or ``W``/``L``/``T``.
    """
    rows = []
    reader = csv.reader(io.StringIO(text.replace("\r\n", "\n")))
    for lineno, row in enumerate(reader, start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 3:
            raise DataError(f"line {lineno}: expected 3 fields, got {len(row)}")
        first, second, token = (c.strip() for c in row)
        if not first or not second:
            raise DataError(f"line {lineno}: empty team name")
        try:
            outcome = Outcome.parse(token)
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if first == second:
            raise DataError(f"line {lineno}: self-play: {first!r} listed against itself")
        rows.append((first, second, outcome))
    if not rows:
        raise DataError("no games")
    return build_dataset(rows, model, half_win)


def read_dataset(path, model: ModelKind | str, half_win: bool = False) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_dataset(fh.read(), model, half_win)


def serialize_dataset(dataset: Dataset) -> str:
    """CSV text with normalized outcome tokens; inverse of :func:`parse_dataset`."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for g in dataset.games:
        writer.writerow([dataset.labels[g.first], dataset.labels[g.second], int(g.outcome)])
    return buf.getvalue()


def apply_half_win_transform(dataset: Dataset, model: ModelKind | str | None = None) -> Dataset:
    """Count each tie as half a win for each side.

    ``model`` selects the (tie-free) target model; it defaults to the
    dataset's own model, or ``basic`` when that model has ties.
    """
    if model is None:
        model = ModelKind.BASIC if dataset.model.has_ties else dataset.model
    model = ModelKind.parse(model)
    if model.has_ties:
        raise DataError("half-win preprocessing applies only to models without ties")
    if dataset.half_win and model is dataset.model:
        return dataset
    return Dataset(dataset.labels, dataset.games, model, half_win=True)
