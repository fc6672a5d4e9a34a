"""Round-robin summaries: winning percentage, outcome proportions, points per game."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import Dataset, ModelKind, Outcome
from .estimation import LOSS, TIE, WIN, ProbMatrix, Status


@dataclass(frozen=True)
class PointSystem:
    win: float
    loss: float
    tie: float

    def __post_init__(self):
        if min(self.win, self.loss, self.tie) < 0:
            raise ValueError("points must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "PointSystem":
        """``"c1,c2,c0"``: points for a win, a loss and a tie."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated point values, got {text!r}")
        return cls(*(float(p) for p in parts))

    def as_array(self) -> np.ndarray:
        """Indexed by outcome k."""
        out = np.zeros(3)
        out[WIN], out[LOSS], out[TIE] = self.win, self.loss, self.tie
        return out


def _filled_triples(pm: ProbMatrix) -> np.ndarray:
    """Numeric outcome probabilities with arbitrary entries sharing the leftover mass equally.

    An all-arbitrary triple becomes 1/3 each; a zero plus two arbitrary
    entries becomes 0, 1/2, 1/2.  Without ties this is the 1/2 rule.
    """
    p = pm.numeric()
    arb = pm.status == Status.ARBITRARY
    n_arb = arb.sum(axis=2, keepdims=True)
    known = np.where(arb | (pm.status == Status.NA), 0.0, np.nan_to_num(p))
    rest = 1.0 - known.sum(axis=2, keepdims=True)
    share = np.divide(rest, n_arb, out=np.zeros_like(rest), where=n_arb > 0)
    return np.where(arb, share, known)


def _off_diagonal_mean(values: np.ndarray) -> np.ndarray:
    t = values.shape[0]
    mask = ~np.eye(t, dtype=bool)
    if values.ndim == 3:
        mask = mask[:, :, None]
    return (values * mask).sum(axis=1) / (t - 1)


def round_robin_outcomes(pm: ProbMatrix) -> np.ndarray:
    """``R[i, k]``: expected fraction of outcome k for team i in a single round robin."""
    if not pm.model.has_ties:
        raise ValueError("outcome proportions need a model with ties")
    return _off_diagonal_mean(_filled_triples(pm))


def rrwp(pm: ProbMatrix) -> np.ndarray:
    """Round-robin winning percentage, ties counting half.

    Under order models each opponent is met once at home and once away.
    """
    if pm.t < 2:
        raise ValueError("need at least two teams")
    p = _filled_triples(pm)
    if pm.model.has_ties:
        R = _off_diagonal_mean(p)
        return R[:, WIN] + 0.5 * R[:, TIE]
    win = p[:, :, WIN]
    if pm.model.has_order:
        # home win of i over j, plus away win of i at j
        return _off_diagonal_mean(win + 1.0 - win.T) / 2.0
    return _off_diagonal_mean(win)


def rrppg(outcomes: np.ndarray, points: PointSystem) -> np.ndarray:
    return outcomes @ points.as_array()


@dataclass(frozen=True, eq=False)
class RoundRobinSummary:
    model: ModelKind
    labels: tuple[str, ...]
    rrwp: np.ndarray
    outcomes: np.ndarray | None = None
    points: np.ndarray | None = None
    point_system: PointSystem | None = None
    records: tuple[tuple[int, int, int], ...] | None = None

    @property
    def key(self) -> np.ndarray:
        return self.points if self.points is not None else self.rrwp


def observed_records(dataset: Dataset) -> tuple[tuple[int, int, int], ...]:
    """Raw (won, lost, tied) per team, before any half-win split."""
    rec = np.zeros((dataset.t, 3), dtype=int)
    for g in dataset.games:
        if g.outcome is Outcome.TIE:
            rec[g.first, 2] += 1
            rec[g.second, 2] += 1
        else:
            winner, loser = (g.first, g.second) if g.outcome is Outcome.FIRST_WINS else (g.second, g.first)
            rec[winner, 0] += 1
            rec[loser, 1] += 1
    return tuple(tuple(int(x) for x in row) for row in rec)


def summarize(pm: ProbMatrix, points: PointSystem | None = None, dataset: Dataset | None = None) -> RoundRobinSummary:
    outcomes = round_robin_outcomes(pm) if pm.model.has_ties else None
    if points is not None and outcomes is None:
        raise ValueError("a point system needs a model with ties")
    if dataset is None and pm.fit is not None:
        dataset = pm.fit.dataset
    return RoundRobinSummary(
        model=pm.model,
        labels=pm.labels,
        rrwp=rrwp(pm),
        outcomes=outcomes,
        points=rrppg(outcomes, points) if points is not None else None,
        point_system=points,
        records=observed_records(dataset) if dataset is not None else None,
    )


def rank(summary: RoundRobinSummary, digits: int = 12) -> list[str]:
    """Labels by descending RRWP (or points per game); equal values ordered by label."""
    key = np.round(summary.key, digits)
    order = sorted(range(len(summary.labels)), key=lambda i: (-key[i], summary.labels[i]))
    return [summary.labels[i] for i in order]


def format_standings(summary: RoundRobinSummary) -> str:
    labels = summary.labels
    idx = {s: i for i, s in enumerate(labels)}
    width = max(4, max(len(s) for s in labels))
    head = ["Team".ljust(width)]
    if summary.records is not None:
        head.append("W-L-T".rjust(9))
    if summary.outcomes is not None:
        head += [f"{h:>7}" for h in ("R_win", "R_loss", "R_tie")]
    head.append(f"{'RRWP':>7}")
    if summary.points is not None:
        head.append(f"{'RRPPG':>7}")
    lines = [" ".join(head)]
    for label in rank(summary):
        i = idx[label]
        row = [label.ljust(width)]
        if summary.records is not None:
            row.append("-".join(str(x) for x in summary.records[i]).rjust(9))
        if summary.outcomes is not None:
            row += [f"{x:7.3f}" for x in summary.outcomes[i, [WIN, LOSS, TIE]]]
        row.append(f"{summary.rrwp[i]:7.3f}")
        if summary.points is not None:
            row.append(f"{summary.points[i]:7.3f}")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def summary_json(summary: RoundRobinSummary) -> dict:
    teams = []
    for label in rank(summary):
        i = summary.labels.index(label)
        entry: dict = {"team": label, "rrwp": float(summary.rrwp[i])}
        if summary.records is not None:
            entry["record"] = dict(zip(("won", "lost", "tied"), summary.records[i]))
        if summary.outcomes is not None:
            entry["outcomes"] = {
                "win": float(summary.outcomes[i, WIN]),
                "loss": float(summary.outcomes[i, LOSS]),
                "tie": float(summary.outcomes[i, TIE]),
            }
        if summary.points is not None:
            entry["rrppg"] = float(summary.points[i])
        teams.append(entry)
    out: dict = {"model": summary.model.value, "standings": teams}
    if summary.point_system is not None:
        ps = summary.point_system
        out["points"] = {"win": ps.win, "loss": ps.loss, "tie": ps.tie}
    return out
