"""Independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np
from scipy.optimize import linprog, minimize

from btsep.datamodel import Dataset, ModelKind, Outcome
from btsep.separation import direct_relations


def bfs_reachability(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    out = np.zeros((n, n), dtype=bool)
    for s in range(n):
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(adj[u]):
                if v not in seen:
                    seen.add(int(v))
                    queue.append(int(v))
        out[s, list(seen)] = True
    return out


def has_one_way_cut(dataset: Dataset) -> bool:
    """Exhaustive search for a split (A, B) where A won every game between the groups."""
    t = dataset.t
    wins = dataset.pooled[:, :, 1] > 0
    for mask in range(1, 2**t - 1):
        A = np.array([(mask >> i) & 1 == 1 for i in range(t)])
        if not wins[np.ix_(~A, A)].any():
            return True
    return False


def _score_rows(model: ModelKind, t: int) -> np.ndarray:
    """Linear map from free variables to each item's discrimination score."""
    if model in (ModelKind.BASIC, ModelKind.TEAM_ORDER):
        size = t if model is ModelKind.BASIC else 2 * t
        return np.eye(size)
    if model in (ModelKind.SINGLE_ORDER, ModelKind.SINGLE_TIE):
        rows = np.zeros((2 * t, t + 1))
        for i in range(t):
            rows[i, i] = rows[t + i, i] = 1.0
            rows[i, t], rows[t + i, t] = 0.5, -0.5
        return rows
    rows = np.zeros((3 * t, 2 * t))
    for i in range(t):
        rows[i, i] = 1.0  # team
        rows[t + i, t + i] = 1.0  # plus item
        rows[2 * t + i, i], rows[2 * t + i, t + i] = 1.0, -1.0  # minus item
    return rows


def lp_implied_relations(dataset: Dataset) -> np.ndarray:
    """``k ⊵ l`` holds iff score_k - score_l >= 0 on every score vector satisfying the game constraints."""
    rows = _score_rows(dataset.model, dataset.t)
    direct = direct_relations(dataset).reach
    n, nv = rows.shape
    A = np.array([rows[l] - rows[k] for k in range(n) for l in range(n) if k != l and direct[k, l]])
    if len(A) == 0:
        A = np.zeros((1, nv))
    b = np.zeros(len(A))
    out = np.eye(n, dtype=bool)
    for k in range(n):
        for l in range(n):
            if k != l:
                res = linprog(rows[k] - rows[l], A_ub=A, b_ub=b, bounds=[(-1, 1)] * nv, method="highs")
                out[k, l] = res.fun > -1e-9
    return out


def outcome_probabilities(model: ModelKind, theta: np.ndarray, t: int, i: int, j: int) -> np.ndarray:
    """(tie, first wins, second wins) written straight from the model definitions."""
    if model is ModelKind.BASIC:
        pi = np.exp(theta)
        return np.array([0.0, pi[i], pi[j]]) / (pi[i] + pi[j])
    if model is ModelKind.SINGLE_ORDER:
        pi, gamma = np.exp(theta[:t]), np.exp(theta[t])
        return np.array([0.0, gamma * pi[i], pi[j]]) / (gamma * pi[i] + pi[j])
    if model is ModelKind.TEAM_ORDER:
        home, away = np.exp(theta[:t]), np.exp(theta[t:])
        return np.array([0.0, home[i], away[j]]) / (home[i] + away[j])
    if model is ModelKind.SINGLE_TIE:
        pi, nu = np.exp(theta[:t]), np.exp(theta[t])
        w = np.array([nu * np.sqrt(pi[i] * pi[j]), pi[i], pi[j]])
        return w / w.sum()
    pi, nus = np.exp(theta[:t]), np.exp(theta[t:])
    w = np.array([np.sqrt(nus[i] * nus[j] * pi[i] * pi[j]), pi[i], pi[j]])
    return w / w.sum()


def n_free(model: ModelKind, t: int) -> int:
    return {ModelKind.BASIC: t, ModelKind.SINGLE_ORDER: t + 1, ModelKind.SINGLE_TIE: t + 1}.get(model, 2 * t)


def brute_force_mle(dataset: Dataset) -> np.ndarray:
    """Probabilities ``P[i, j, k]`` from a generic quasi-Newton maximization of the log-likelihood."""
    model, t = dataset.model, dataset.t
    y = dataset.y
    cells = [(i, j) for i in range(t) for j in range(t) if y[i, j].sum() > 0]

    def nll(theta):
        total = 0.0
        for i, j in cells:
            p = outcome_probabilities(model, theta, t, i, j)
            for k in range(3):
                if y[i, j, k] > 0:
                    total -= y[i, j, k] * np.log(p[k])
        return total

    best = None
    for start in (np.zeros(n_free(model, t)), np.full(n_free(model, t), 0.3)):
        res = minimize(nll, start, method="BFGS", options={"gtol": 1e-11, "maxiter": 20000})
        res = minimize(nll, res.x, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 40000})
        if best is None or res.fun < best.fun:
            best = res
    P = np.full((t, t, 3), np.nan)
    for i in range(t):
        for j in range(t):
            if i != j or model.has_order:
                P[i, j] = outcome_probabilities(model, best.x, t, i, j)
    return P


def preorders_on_three():
    """Every reflexive transitive relation on three points, as boolean matrices."""
    off = [(a, b) for a in range(3) for b in range(3) if a != b]
    for bits in itertools.product((False, True), repeat=len(off)):
        r = np.eye(3, dtype=bool)
        for (a, b), v in zip(off, bits):
            r[a, b] = v
        if all(not (r[a, b] and r[b, c]) or r[a, c] for a in range(3) for b in range(3) for c in range(3)):
            yield r


def random_games(rng: np.random.Generator, model: ModelKind, t: int, n_games: int):
    outcomes = ["1", "2", "0"] if model.has_ties else ["1", "2"]
    rows = []
    for _ in range(n_games):
        i, j = rng.choice(t, size=2, replace=False)
        rows.append((f"t{i}", f"t{j}", outcomes[rng.integers(len(outcomes))]))
    return rows


def observed_outcome_fractions(dataset: Dataset) -> np.ndarray:
    """Per team: fraction of games won, lost and tied, indexed by outcome k."""
    out = np.zeros((dataset.t, 3))
    for g in dataset.games:
        if g.outcome is Outcome.TIE:
            out[[g.first, g.second], 0] += 1
        else:
            w, l = (g.first, g.second) if g.outcome is Outcome.FIRST_WINS else (g.second, g.first)
            out[w, 1] += 1
            out[l, 2] += 1
    return out / out.sum(axis=1, keepdims=True)
