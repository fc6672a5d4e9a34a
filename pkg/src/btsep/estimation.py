"""Outcome-probability estimates: degenerate cells from the separation analysis,
the rest by Ford-type fixed-point iteration on the retained outcomes.

Outcomes are indexed by ``k``: 1 the first-listed team wins, 2 the second
wins, 0 tie.  Under order models the first-listed team is at home.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .datamodel import Dataset, ModelKind, Outcome
from .separation import Decoration, PairRelation, SeparationResult, saturate

log = logging.getLogger(__name__)

WIN, LOSS, TIE = 1, 2, 0


class Status(enum.IntEnum):
    DETERMINED = 0
    ONE = 1
    ZERO = 2
    ARBITRARY = 3
    PENDING = 4  # needs fitted parameters; never stored in a ProbMatrix
    NA = 5  # outcome not part of the model, or diagonal of a venue-free model


@dataclass(frozen=True)
class ProbEstimate:
    status: Status
    value: float | None = None

    def __post_init__(self):
        if self.status is Status.DETERMINED and not (self.value is not None and 0.0 < self.value < 1.0):
            raise ValueError(f"determined probability must lie in (0, 1), got {self.value}")

    @classmethod
    def determined(cls, value: float) -> "ProbEstimate":
        return cls(Status.DETERMINED, float(value))

    @property
    def numeric(self) -> float | None:
        """Numeric value where one exists (determined, one, zero)."""
        if self.status is Status.DETERMINED:
            return self.value
        return {Status.ONE: 1.0, Status.ZERO: 0.0}.get(self.status)

    def to_json(self):
        if self.status is Status.DETERMINED:
            return {"p": self.value}
        return self.status.name.lower()

    def __str__(self):
        if self.status is Status.DETERMINED:
            return f"{self.value:.3f}"
        return {Status.ONE: "1", Status.ZERO: "0"}.get(self.status, self.status.name.lower())


ONE = ProbEstimate(Status.ONE)
ZERO = ProbEstimate(Status.ZERO)
ARBITRARY = ProbEstimate(Status.ARBITRARY)
PENDING = ProbEstimate(Status.PENDING)


class FitError(RuntimeError):
    pass


class ConvergenceError(FitError):
    """Iteration cap reached; ``result`` holds the last iterate."""

    def __init__(self, message: str, result: "FitResult"):
        super().__init__(message)
        self.result = result


class InconsistencyError(FitError):
    pass


def model_outcomes(model: ModelKind) -> tuple[int, ...]:
    return (WIN, LOSS, TIE) if model.has_ties else (WIN, LOSS)


def outcome_relations(sep: SeparationResult, i: int, j: int) -> dict[tuple[int, int], PairRelation]:
    """Relations between the discrimination scores of the outcomes of an ``i``-vs-``j`` game.

    The score of a win is that of ``i``, of a loss that of ``j``; with
    ties the tie score is ``β_i+ + β_j+``, so win-vs-tie compares ``i-``
    with ``j+`` and tie-vs-loss compares ``i+`` with ``j-``.
    """
    model = sep.model
    D = Decoration
    if model is ModelKind.BASIC:
        pairs = {(WIN, LOSS): (sep.item(i), sep.item(j))}
    elif model.has_order:
        pairs = {(WIN, LOSS): (sep.item(i, D.HOME), sep.item(j, D.VISITOR))}
    else:
        if model is ModelKind.SINGLE_TIE:
            wl = (sep.item(i, D.PLUS), sep.item(j, D.PLUS))
        else:
            wl = (sep.item(i), sep.item(j))
        pairs = {
            (WIN, LOSS): wl,
            (WIN, TIE): (sep.item(i, D.MINUS), sep.item(j, D.PLUS)),
            (TIE, LOSS): (sep.item(i, D.PLUS), sep.item(j, D.MINUS)),
        }
    rel = {}
    for (a, b), (k, l) in pairs.items():
        r = sep.relation(k, l)
        rel[a, b] = r
        rel[b, a] = r.reverse
    return rel


def outcome_support(rel: dict[tuple[int, int], PairRelation], outcomes: tuple[int, ...]) -> dict[int, ProbEstimate]:
    """Degenerate status of each outcome from the relations between them.

    An outcome dominated by another has probability 0.  If a single outcome
    survives it has probability 1; if the survivors are pairwise ``≅`` their
    probabilities are pending a fit; otherwise they are arbitrary.
    """
    live = [a for a in outcomes if not any(rel[b, a] is PairRelation.DOMINATES for b in outcomes if b != a)]
    out = {a: ZERO for a in outcomes}
    if len(live) == 1:
        out[live[0]] = ONE
    elif all(rel[a, b] is PairRelation.EQUIV for a in live for b in live if a != b):
        out.update({a: PENDING for a in live})
    else:
        out.update({a: ARBITRARY for a in live})
    return out


def degenerate_probability(sep: SeparationResult, i: int, j: int, k: int) -> ProbEstimate:
    """One/Zero/Arbitrary when forced by the separation pattern, else ``PENDING``."""
    outcomes = model_outcomes(sep.model)
    if k not in outcomes:
        raise ValueError(f"outcome {k} is not part of model {sep.model.value}")
    if i == j and not sep.model.has_order:
        raise ValueError("a team cannot play itself in a venue-free model")
    return outcome_support(outcome_relations(sep, i, j), outcomes)[k]


@dataclass(frozen=True)
class FitOptions:
    tol: float = 1e-10
    max_iter: int = 100_000
    normalization: str = "geometric"  # or "first"
    # single tie parameter: "ratio" scales π_i by observed/expected points;
    # "sqrt" isolates √π_i instead, which doubles the step and can oscillate
    tie_update: str = "ratio"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.normalization not in ("geometric", "first"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.tie_update not in ("ratio", "sqrt"):
            raise ValueError(f"unknown tie_update {self.tie_update!r}")


@dataclass
class _Terms:
    """Retained game groups, vectorized.

    One entry per team pair (per ordered home/visitor pair under order
    models) holding at least one pending outcome.
    """

    first: np.ndarray
    second: np.ndarray
    n: np.ndarray
    y: np.ndarray  # (m, 3) observed counts indexed by outcome k
    live: np.ndarray  # (m, 3) bool, outcome k pending


def _support_table(sep: SeparationResult) -> np.ndarray:
    t = sep.t
    outcomes = model_outcomes(sep.model)
    table = np.full((t, t, 3), Status.NA, dtype=np.int8)
    for i in range(t):
        for j in range(t):
            if i == j and not sep.model.has_order:
                continue
            for k, est in outcome_support(outcome_relations(sep, i, j), outcomes).items():
                table[i, j, k] = est.status
    return table


def _build_terms(dataset: Dataset, support: np.ndarray) -> _Terms:
    t = dataset.t
    order = dataset.model.has_order
    y = dataset.y if order else dataset.pooled
    rows = []
    for i in range(t):
        for j in range(t) if order else range(i + 1, t):
            counts = y[i, j]
            n = counts.sum()
            if n == 0:
                continue
            status = support[i, j]
            for k in range(3):
                if counts[k] > 0 and status[k] not in (Status.PENDING, Status.ONE):
                    raise InconsistencyError(
                        f"observed outcome {k} of {dataset.labels[i]} vs {dataset.labels[j]} "
                        f"classified {Status(status[k]).name.lower()}"
                    )
            live = status == Status.PENDING
            if live.any():
                rows.append((i, j, n, counts, live))
    if not rows:
        z = np.zeros(0)
        return _Terms(z.astype(int), z.astype(int), z, np.zeros((0, 3)), np.zeros((0, 3), bool))
    first, second, n, counts, live = zip(*rows)
    return _Terms(np.array(first), np.array(second), np.array(n, float), np.array(counts, float), np.array(live))


@dataclass(frozen=True, eq=False)
class FitResult:
    """Fitted parameters on the retained outcomes.

    ``strengths`` holds π_i per team, or under team-specific order effects
    the 2t item strengths ``[π_1H..π_tH, π_1V..π_tV]``.  ``tie_strengths``
    holds π_i+ (team-specific ties only); ν_i = π_i+² / π_i.
    """

    model: ModelKind
    labels: tuple[str, ...]
    strengths: np.ndarray
    order_param: float | None
    tie_param: float | None
    tie_strengths: np.ndarray | None
    iterations: int
    max_change: float
    converged: bool
    separation: SeparationResult = field(repr=False)
    dataset: Dataset = field(repr=False)
    support: np.ndarray = field(repr=False)
    active: np.ndarray = field(repr=False)

    @property
    def t(self) -> int:
        return len(self.labels)

    @property
    def home_strengths(self) -> np.ndarray:
        return self.strengths[: self.t]

    @property
    def away_strengths(self) -> np.ndarray:
        return self.strengths[self.t :]

    @property
    def tie_params(self) -> np.ndarray | None:
        """Team-specific ν_i."""
        if self.tie_strengths is None:
            return None
        return self.tie_strengths**2 / self.strengths

    def weights(self, i: int, j: int) -> np.ndarray:
        """Relative weights of outcomes ``k = 0, 1, 2`` for ``i`` (first) against ``j``."""
        pi = self.strengths
        w = np.zeros(3)
        if self.model is ModelKind.BASIC:
            w[WIN], w[LOSS] = pi[i], pi[j]
        elif self.model is ModelKind.SINGLE_ORDER:
            w[WIN], w[LOSS] = self.order_param * pi[i], pi[j]
        elif self.model is ModelKind.TEAM_ORDER:
            w[WIN], w[LOSS] = pi[i], pi[self.t + j]
        elif self.model is ModelKind.SINGLE_TIE:
            w[WIN], w[LOSS], w[TIE] = pi[i], pi[j], self.tie_param * math.sqrt(pi[i] * pi[j])
        else:
            tp = self.tie_strengths
            w[WIN], w[LOSS], w[TIE] = pi[i], pi[j], tp[i] * tp[j]
        return w

    def estimate(self, i: int, j: int, k: int) -> ProbEstimate:
        status = Status(self.support[i, j, k])
        if status is Status.NA:
            raise KeyError((i, j, k))
        if status is not Status.PENDING:
            return ProbEstimate(status)
        live = self.support[i, j] == Status.PENDING
        w = self.weights(i, j)
        return ProbEstimate.determined(w[k] / w[live].sum())

    @cached_property
    def residuals(self) -> "Residuals":
        return check_likelihood_equations(self)

    @property
    def max_residual(self) -> float:
        return self.residuals.max


def _components(t: int, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    parent = list(range(t))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(first.tolist(), second.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(a) for a in range(t)])


class _Fitter:
    def __init__(self, dataset: Dataset, sep: SeparationResult, options: FitOptions):
        self.dataset = dataset
        self.sep = sep
        self.options = options
        self.model = dataset.model
        self.t = t = dataset.t
        self.support = _support_table(sep)
        self.terms = tm = _build_terms(dataset, self.support)

        # parameter index of the first/second side of each term
        self.a = tm.first
        self.b = tm.second + (t if self.model is ModelKind.TEAM_ORDER else 0)
        size = 2 * t if self.model is ModelKind.TEAM_ORDER else t
        self.size = size
        self.active = np.zeros(size, dtype=bool)
        live = tm.live
        self.active[self.a[live[:, WIN] | live[:, TIE]]] = True
        self.active[self.b[live[:, LOSS] | live[:, TIE]]] = True
        # under team-specific ties π_i only moves with pending wins/losses
        if self.model is ModelKind.TEAM_TIE:
            self.active[:] = False
            self.active[self.a[live[:, WIN]]] = True
            self.active[self.b[live[:, LOSS]]] = True
            self.tie_active = np.zeros(t, dtype=bool)
            self.tie_active[self.a[live[:, TIE]]] = True
            self.tie_active[self.b[live[:, TIE]]] = True
        self.components = _components(size, self.a, self.b)

        self.pi = np.ones(size)
        self.gamma = 1.0 if self.model is ModelKind.SINGLE_ORDER else None
        self.nu = 1.0 if self.model is ModelKind.SINGLE_TIE else None
        self.pi_plus = np.ones(t) if self.model is ModelKind.TEAM_TIE else None

    # weights of (tie, win, loss) per term, masked to pending outcomes
    def _weights(self) -> np.ndarray:
        pa, pb = self.pi[self.a], self.pi[self.b]
        w = np.zeros((len(self.a), 3))
        w[:, WIN] = pa * (self.gamma if self.gamma is not None else 1.0)
        w[:, LOSS] = pb
        if self.model is ModelKind.SINGLE_TIE:
            w[:, TIE] = self.nu * np.sqrt(pa * pb)
        elif self.model is ModelKind.TEAM_TIE:
            w[:, TIE] = self.pi_plus[self.a] * self.pi_plus[self.b]
        return np.where(self.terms.live, w, 0.0)

    def _sum_to(self, idx: np.ndarray, values: np.ndarray, size: int | None = None) -> np.ndarray:
        return np.bincount(idx, weights=values, minlength=size or self.size)

    def sweep(self) -> None:
        tm = self.terms
        live, y, n = tm.live, tm.y, tm.n
        w = self._weights()
        D = w.sum(axis=1)
        model = self.model

        if model in (ModelKind.BASIC, ModelKind.TEAM_ORDER, ModelKind.SINGLE_ORDER):
            g = self.gamma if self.gamma is not None else 1.0
            obs = self._sum_to(self.a, y[:, WIN]) + self._sum_to(self.b, y[:, LOSS])
            den = self._sum_to(self.a, g * n / D) + self._sum_to(self.b, n / D)
            self._set_pi(obs, den)
            if model is ModelKind.SINGLE_ORDER:
                w = self._weights()
                D = w.sum(axis=1)
                self.gamma = y[:, WIN].sum() / (n * self.pi[self.a] / D).sum()

        elif model is ModelKind.SINGLE_TIE:
            obs = self._sum_to(self.a, 2 * y[:, WIN] + y[:, TIE]) + self._sum_to(self.b, 2 * y[:, LOSS] + y[:, TIE])
            if self.options.tie_update == "sqrt":
                ra, rb = np.sqrt(self.pi[self.a]), np.sqrt(self.pi[self.b])
                den_a = n * (2 * ra * live[:, WIN] + self.nu * rb * live[:, TIE]) / D
                den_b = n * (2 * rb * live[:, LOSS] + self.nu * ra * live[:, TIE]) / D
                den = self._sum_to(self.a, den_a) + self._sum_to(self.b, den_b)
                root = np.sqrt(self.pi)
                np.divide(obs, den, out=root, where=self.active)
                self._set_pi(root**2, None)
            else:
                exp_a = n * (2 * w[:, WIN] + w[:, TIE]) / D
                exp_b = n * (2 * w[:, LOSS] + w[:, TIE]) / D
                expected = self._sum_to(self.a, exp_a) + self._sum_to(self.b, exp_b)
                self._set_pi(obs * self.pi, expected)
            tied = live[:, TIE]
            if tied.any():
                D = self._weights().sum(axis=1)
                pa, pb = self.pi[self.a], self.pi[self.b]
                self.nu = y[tied, TIE].sum() / (n * np.sqrt(pa * pb) / D)[tied].sum()

        else:  # TEAM_TIE
            obs = self._sum_to(self.a, y[:, WIN] * live[:, WIN]) + self._sum_to(self.b, y[:, LOSS] * live[:, LOSS])
            den = self._sum_to(self.a, n * live[:, WIN] / D) + self._sum_to(self.b, n * live[:, LOSS] / D)
            self._set_pi(obs, den)
            D = self._weights().sum(axis=1)
            tied = live[:, TIE]
            pp = self.pi_plus
            obs_t = self._sum_to(self.a, y[:, TIE] * tied, self.t) + self._sum_to(self.b, y[:, TIE] * tied, self.t)
            den_t = self._sum_to(self.a, n * pp[self.b] * tied / D, self.t) + self._sum_to(
                self.b, n * pp[self.a] * tied / D, self.t
            )
            new = pp.copy()
            np.divide(obs_t, den_t, out=new, where=self.tie_active)
            self.pi_plus = new

        self._normalize()

    def _set_pi(self, obs: np.ndarray, den: np.ndarray | None) -> None:
        if den is None:
            new = obs
        else:
            new = self.pi.copy()
            np.divide(obs, den, out=new, where=self.active)
        if not (np.all(np.isfinite(new)) and np.all(new > 0)):
            raise FitError("strength update left the positive orthant; retained data lack a finite MLE")
        self.pi = new

    def _normalize(self) -> None:
        comp = self.components
        logs = np.log(self.pi)
        if self.options.normalization == "geometric":
            counts = np.bincount(comp, minlength=self.size)
            shift = np.bincount(comp, weights=logs, minlength=self.size) / np.maximum(counts, 1)
        else:
            shift = np.zeros(self.size)
            for c in np.unique(comp):
                shift[c] = logs[np.flatnonzero(comp == c)[0]]
        s = shift[comp]
        self.pi = np.exp(logs - s)
        if self.pi_plus is not None:
            self.pi_plus = self.pi_plus * np.exp(-s / 2)

    def state(self) -> np.ndarray:
        parts = [np.log(self.pi)]
        if self.gamma is not None:
            parts.append([math.log(self.gamma)])
        if self.nu is not None:
            parts.append([math.log(self.nu)])
        if self.pi_plus is not None:
            parts.append(np.log(self.pi_plus))
        return np.concatenate(parts)

    def run(self) -> FitResult:
        opts = self.options
        self._normalize()
        change = 0.0
        converged = len(self.a) == 0
        it = 0
        prev = self.state()
        while not converged and it < opts.max_iter:
            it += 1
            with np.errstate(divide="raise", invalid="raise"):
                try:
                    self.sweep()
                except FloatingPointError as exc:
                    raise FitError(f"numerical failure in fixed-point sweep: {exc}") from None
            cur = self.state()
            if not np.all(np.isfinite(cur)):
                raise FitError("parameters diverged; retained data lack a finite MLE")
            change = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
            prev = cur
            converged = change < opts.tol
        result = FitResult(
            model=self.model,
            labels=self.dataset.labels,
            strengths=self.pi,
            order_param=self.gamma,
            tie_param=self.nu,
            tie_strengths=self.pi_plus,
            iterations=it,
            max_change=change,
            converged=converged,
            separation=self.sep,
            dataset=self.dataset,
            support=self.support,
            active=self.active,
        )
        if not converged:
            raise ConvergenceError(
                f"no convergence after {it} iterations (max log-parameter change {change:.3g}, "
                f"max residual {result.max_residual:.3g})",
                result,
            )
        log.debug("fit converged in %d iterations", it)
        return result


def fit(
    dataset: Dataset,
    sep: SeparationResult | None = None,
    options: FitOptions | None = None,
) -> FitResult:
    """Maximum-likelihood fit restricted to outcomes not forced to 0 or 1."""
    if sep is None:
        sep = saturate(dataset)
    elif sep.model is not dataset.model or sep.labels != dataset.labels:
        raise ValueError("separation result does not belong to this dataset/model")
    return _Fitter(dataset, sep, options or FitOptions()).run()


@dataclass(frozen=True)
class Residuals:
    """Absolute differences between observed and expected statistics per likelihood equation."""

    equations: dict[str, np.ndarray]

    @property
    def max(self) -> float:
        vals = [float(np.max(np.abs(v))) for v in self.equations.values() if np.size(v)]
        return max(vals, default=0.0)


def check_likelihood_equations(fit_result: FitResult) -> Residuals:
    """|observed - expected| for every likelihood equation the model has, over retained outcomes."""
    res = fit_result
    t = res.t
    model = res.model
    ds = res.dataset
    y = ds.y if model.has_order else ds.pooled
    live = res.support == Status.PENDING

    P = np.zeros((t, t, 3))
    for i in range(t):
        for j in range(t):
            if live[i, j].any():
                w = res.weights(i, j) * live[i, j]
                P[i, j] = w / w.sum()
    n = y.sum(axis=2, keepdims=True)
    obs = np.where(live, y, 0.0)
    exp = np.where(live, n * P, 0.0)
    if not model.has_order:
        # pooled counts list every unordered pair twice; keep i < j
        upper = np.triu(np.ones((t, t), dtype=bool), 1)[:, :, None]
        obs, exp = obs * upper, exp * upper

    def team_sum(arr, k_first, k_second):
        return arr[:, :, k_first].sum(axis=1) + arr[:, :, k_second].sum(axis=0)

    eq: dict[str, np.ndarray] = {}
    if model is ModelKind.BASIC:
        eq["wins"] = team_sum(obs, WIN, LOSS) - team_sum(exp, WIN, LOSS)
    elif model is ModelKind.SINGLE_ORDER:
        eq["wins"] = team_sum(obs, WIN, LOSS) - team_sum(exp, WIN, LOSS)
        eq["home_wins"] = np.array([obs[:, :, WIN].sum() - exp[:, :, WIN].sum()])
    elif model is ModelKind.TEAM_ORDER:
        eq["home_wins"] = obs[:, :, WIN].sum(axis=1) - exp[:, :, WIN].sum(axis=1)
        eq["away_wins"] = obs[:, :, LOSS].sum(axis=0) - exp[:, :, LOSS].sum(axis=0)
    elif model is ModelKind.SINGLE_TIE:
        pts_o = 2 * team_sum(obs, WIN, LOSS) + team_sum(obs, TIE, TIE)
        pts_e = 2 * team_sum(exp, WIN, LOSS) + team_sum(exp, TIE, TIE)
        eq["points"] = pts_o - pts_e
        eq["ties"] = np.array([obs[:, :, TIE].sum() - exp[:, :, TIE].sum()])
    else:
        eq["wins"] = team_sum(obs, WIN, LOSS) - team_sum(exp, WIN, LOSS)
        eq["ties"] = team_sum(obs, TIE, TIE) - team_sum(exp, TIE, TIE)
    return Residuals({k: np.abs(v) for k, v in eq.items()})


@dataclass(frozen=True, eq=False)
class ProbMatrix:
    """Estimates for every ordered pair and outcome.

    ``status[i, j, k]`` and ``value[i, j, k]`` (NaN unless determined);
    under order models ``i`` is at home and the diagonal is included.
    """

    model: ModelKind
    labels: tuple[str, ...]
    status: np.ndarray
    value: np.ndarray
    fit: FitResult | None = field(default=None, repr=False)

    @property
    def t(self) -> int:
        return len(self.labels)

    @property
    def outcomes(self) -> tuple[int, ...]:
        return model_outcomes(self.model)

    def __getitem__(self, key) -> ProbEstimate:
        i, j, k = key
        if isinstance(i, str):
            i = self.labels.index(i)
        if isinstance(j, str):
            j = self.labels.index(j)
        status = Status(self.status[i, j, k])
        if status is Status.NA:
            raise KeyError(key)
        if status is Status.DETERMINED:
            return ProbEstimate.determined(self.value[i, j, k])
        return ProbEstimate(status)

    def pairs(self):
        for i in range(self.t):
            for j in range(self.t):
                if i != j or self.model.has_order:
                    yield i, j

    def numeric(self) -> np.ndarray:
        """Values with one/zero filled in and arbitrary entries left NaN."""
        out = self.value.copy()
        out[self.status == Status.ONE] = 1.0
        out[self.status == Status.ZERO] = 0.0
        return out


def probability_matrix(fit_result: FitResult) -> ProbMatrix:
    t = fit_result.t
    status = fit_result.support.copy()
    value = np.full((t, t, 3), np.nan)
    for i in range(t):
        for j in range(t):
            live = status[i, j] == Status.PENDING
            if live.any():
                w = fit_result.weights(i, j)
                value[i, j, live] = w[live] / w[live].sum()
                status[i, j, live] = Status.DETERMINED
    return ProbMatrix(fit_result.model, fit_result.labels, status, value, fit_result)


def log_likelihood(fit_result: FitResult, dataset: Dataset | None = None) -> float:
    """Log-likelihood of the observed games under the estimates; forced outcomes contribute 0."""
    ds = dataset or fit_result.dataset
    pm = probability_matrix(fit_result)
    total = 0.0
    for g in ds.weighted_games():
        est = pm[g.first, g.second, int(g.outcome)]
        if est.status is Status.ONE:
            continue
        if est.status is not Status.DETERMINED:
            raise InconsistencyError(
                f"observed game {ds.labels[g.first]} vs {ds.labels[g.second]} "
                f"(outcome {int(g.outcome)}) has estimate {est.status.name.lower()}"
            )
        total += g.weight * math.log(est.value)
    return total


def parameters_json(fit_result: FitResult) -> dict:
    res = fit_result
    labels = res.labels
    out: dict = {}
    if res.model is ModelKind.TEAM_ORDER:
        out["home_strengths"] = dict(zip(labels, res.home_strengths.tolist()))
        out["away_strengths"] = dict(zip(labels, res.away_strengths.tolist()))
    else:
        out["strengths"] = dict(zip(labels, res.strengths.tolist()))
    if res.order_param is not None:
        out["gamma"] = res.order_param
    if res.tie_param is not None:
        out["nu"] = res.tie_param
    if res.tie_strengths is not None:
        out["tie_strengths"] = dict(zip(labels, res.tie_strengths.tolist()))
        out["nu_i"] = dict(zip(labels, res.tie_params.tolist()))
    return out


_OUTCOME_KEYS = {WIN: "1", LOSS: "2", TIE: "0"}


def prob_matrix_json(pm: ProbMatrix) -> dict:
    probs: dict = {}
    for i, j in pm.pairs():
        cell = {_OUTCOME_KEYS[k]: pm[i, j, k].to_json() for k in pm.outcomes}
        probs.setdefault(pm.labels[i], {})[pm.labels[j]] = cell
    out = {"model": pm.model.value, "teams": list(pm.labels), "probabilities": probs}
    if pm.fit is not None:
        res = pm.fit
        out["parameters"] = parameters_json(res)
        out["residuals"] = {k: v.tolist() for k, v in res.residuals.equations.items()}
        out["iterations"] = res.iterations
        out["converged"] = res.converged
    return out
