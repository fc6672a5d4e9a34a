"""Separation analysis: which outcome probabilities are forced to 0, 1 or left arbitrary.

Every model is reduced to a reachability problem over *items* (teams,
team-at-venue, or signed teams).  An edge ``k -> l`` means ``k ⊵ l``: the
data force the discrimination score of ``k`` to be at least that of ``l``.
The relation is saturated by alternating transitive closure with the
model's propagation rules until nothing changes.

Step numbers recorded on edges follow the order of the procedure:
1 reflexive loops, 2 game-induced relations, 3 transitive closure,
4/5 a shared order (or tie) effect of known sign, 6 the H/V (or +/-)
mirror rule.  For team-specific ties, step 4 is the six inference rules
linking team and signed items.  Under a single shared effect, rules 4-6
can stall short of every implied relation, so once they reach a fixpoint
an exact completion (step 7) adds whatever the constraints still imply.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .datamodel import Dataset, ModelKind, Outcome

STEP_LOOP = 1
STEP_GAME = 2
STEP_CLOSURE = 3
STEP_FIRST_SIGN = 4
STEP_SECOND_SIGN = 5
STEP_MIRROR = 6
STEP_TEAM_TIE_RULES = 4
STEP_EXACT = 7

_NO_PATH = -(1 << 40)


class Decoration(enum.Enum):
    NONE = ""
    HOME = "H"
    VISITOR = "V"
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class Item:
    team: int
    decoration: Decoration = Decoration.NONE

    def label(self, labels) -> str:
        return f"{labels[self.team]}{self.decoration.value}"


class PairRelation(enum.Enum):
    EQUIV = "≅"
    DOMINATES = "≫"
    DOMINATED_BY = "≪"
    INCOMPARABLE = "≷"

    @property
    def reverse(self) -> "PairRelation":
        return _REVERSE[self]


_REVERSE = {
    PairRelation.EQUIV: PairRelation.EQUIV,
    PairRelation.DOMINATES: PairRelation.DOMINATED_BY,
    PairRelation.DOMINATED_BY: PairRelation.DOMINATES,
    PairRelation.INCOMPARABLE: PairRelation.INCOMPARABLE,
}


class GlobalClass(enum.Enum):
    COMPLETE_SEPARATION = "complete separation"
    QUASI_COMPLETE_SEPARATION = "quasi-complete separation"
    OVERLAP = "overlap"


@dataclass
class ItemGraph:
    """Boolean reachability matrix with per-edge provenance.

    ``step[k, l]`` and ``iteration[k, l]`` are zero where there is no edge.
    """

    reach: np.ndarray
    step: np.ndarray
    iteration: np.ndarray

    @classmethod
    def reflexive(cls, size: int) -> "ItemGraph":
        reach = np.eye(size, dtype=bool)
        step = np.where(reach, STEP_LOOP, 0).astype(np.int8)
        iteration = reach.astype(np.int16)
        return cls(reach, step, iteration)

    @property
    def size(self) -> int:
        return self.reach.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.reach.sum())

    def copy(self) -> "ItemGraph":
        return ItemGraph(self.reach.copy(), self.step.copy(), self.iteration.copy())

    def add(self, k: int, l: int, step: int, iteration: int = 1) -> bool:
        if self.reach[k, l]:
            return False
        self.reach[k, l] = True
        self.step[k, l] = step
        self.iteration[k, l] = iteration
        return True

    def add_mask(self, mask: np.ndarray, step: int, iteration: int = 1) -> int:
        new = mask & ~self.reach
        self.reach |= new
        self.step[new] = step
        self.iteration[new] = iteration
        return int(new.sum())

    def is_transitive(self) -> bool:
        r = self.reach.astype(np.int64)
        return not ((r @ r > 0) & ~self.reach).any()


def _closure_matrix(adj: np.ndarray) -> np.ndarray:
    # Floyd-Warshall over booleans; reflexivity is not added here
    r = adj.copy()
    for k in range(r.shape[0]):
        r |= np.outer(r[:, k], r[k, :])
    return r


def transitive_closure(graph: ItemGraph, step: int = STEP_CLOSURE, iteration: int = 1) -> ItemGraph:
    """Smallest transitive superset of ``graph``; new edges get the given provenance."""
    out = graph.copy()
    out.add_mask(_closure_matrix(graph.reach), step, iteration)
    return out


def item_layout(model: ModelKind, t: int) -> tuple[Item, ...]:
    team = [Item(i) for i in range(t)]
    if model is ModelKind.BASIC:
        return tuple(team)
    if model.has_order:
        return tuple(Item(i, Decoration.HOME) for i in range(t)) + tuple(
            Item(i, Decoration.VISITOR) for i in range(t)
        )
    signed = tuple(Item(i, Decoration.PLUS) for i in range(t)) + tuple(
        Item(i, Decoration.MINUS) for i in range(t)
    )
    if model is ModelKind.SINGLE_TIE:
        return signed
    return tuple(team) + signed


def _sign_offset(model: ModelKind, t: int) -> int:
    # index of item "0+" (or "0H") in the layout
    return t if model is ModelKind.TEAM_TIE else 0


def direct_relations(dataset: Dataset, model: ModelKind | None = None) -> ItemGraph:
    """Reflexive graph holding exactly the relations induced by individual games."""
    model = dataset.model if model is None else ModelKind.parse(model)
    if model is not dataset.model:
        dataset = dataset.with_model(model)
    t = dataset.t
    g = ItemGraph.reflexive(len(item_layout(model, t)))
    P = _sign_offset(model, t)  # plus/home block
    M = P + t  # minus/visitor block

    for game in dataset.weighted_games():
        i, j = game.first, game.second
        if game.outcome is Outcome.TIE:
            if not model.has_ties:
                raise ValueError("tie outcome under a model without ties")
            g.add(P + i, M + j, STEP_GAME)
            g.add(P + j, M + i, STEP_GAME)
            continue
        w, l = (i, j) if game.outcome is Outcome.FIRST_WINS else (j, i)
        if model is ModelKind.BASIC:
            g.add(w, l, STEP_GAME)
        elif model.has_order:
            # winner at its venue over loser at the other venue
            if w == i:
                g.add(P + i, M + j, STEP_GAME)
            else:
                g.add(M + j, P + i, STEP_GAME)
        elif model is ModelKind.SINGLE_TIE:
            g.add(P + w, P + l, STEP_GAME)
            g.add(M + w, M + l, STEP_GAME)
            g.add(M + w, P + l, STEP_GAME)
        else:
            g.add(w, l, STEP_GAME)
            g.add(M + w, P + l, STEP_GAME)
    return g


def _has_cycle(cross: np.ndarray) -> bool:
    adj = cross.copy()
    np.fill_diagonal(adj, False)
    return bool(_closure_matrix(adj).diagonal().any())


def propagate_order(graph: ItemGraph, t: int, iteration: int = 1, offset: int = 0) -> ItemGraph:
    """One pass of the shared-effect rules over a 2t-item block.

    The block holds ``t`` first-kind items (H, or +) followed by ``t``
    second-kind items (V, or -), starting at ``offset``.  Rules, in order:
    a chain ``k1H ⊵ k2V, ..., krH ⊵ k1V`` (or any ``kH ⊵ kV``) forces
    ``kH ⊵ kV`` for every k; the same with H and V swapped; and
    ``iH ⊵ jH`` iff ``iV ⊵ jV``.
    """
    out = graph.copy()
    H = slice(offset, offset + t)
    V = slice(offset + t, offset + 2 * t)
    diag_hv = (np.arange(offset, offset + t), np.arange(offset + t, offset + 2 * t))
    diag_vh = (diag_hv[1], diag_hv[0])

    for (rows, cols), idx, step in (
        ((H, V), diag_hv, STEP_FIRST_SIGN),
        ((V, H), diag_vh, STEP_SECOND_SIGN),
    ):
        cross = out.reach[rows, cols]
        if cross.diagonal().any() or _has_cycle(cross):
            mask = np.zeros_like(out.reach)
            mask[idx] = True
            out.add_mask(mask, step, iteration)

    snap = out.reach.copy()
    mask = np.zeros_like(out.reach)
    mask[V, V] = snap[H, H]
    mask[H, H] = snap[V, V]
    out.add_mask(mask, STEP_MIRROR, iteration)
    return out


def propagate_team_tie(
    team_graph: ItemGraph, sign_graph: ItemGraph, iteration: int = 1
) -> tuple[ItemGraph, ItemGraph]:
    """One pass of the six rules linking team items with signed items.

    ``sign_graph`` is ordered ``1+..t+, 1-..t-``.
    """
    t = team_graph.size
    team, sign = team_graph.copy(), sign_graph.copy()
    T = team_graph.reach
    S = sign_graph.reach
    PP, PM, MP, MM = S[:t, :t], S[:t, t:], S[t:, :t], S[t:, t:]

    def put(block_rows, block_cols, cond):
        mask = np.zeros_like(S)
        mask[block_rows, block_cols] = cond
        sign.add_mask(mask, STEP_TEAM_TIE_RULES, iteration)

    P, M = slice(0, t), slice(t, 2 * t)
    put(M, M, T & PP.T)  # i ⊵ j, j+ ⊵ i+  =>  i- ⊵ j-
    put(P, M, T & PM.T)  # i ⊵ j, j+ ⊵ i-  =>  i+ ⊵ j-
    put(M, P, T & MP.T)  # i ⊵ j, j- ⊵ i+  =>  i- ⊵ j+
    put(P, P, T & MM.T)  # i ⊵ j, j- ⊵ i-  =>  i+ ⊵ j+
    # i+ ⊵ j+ and i- ⊵ j-, or i+ ⊵ j- and i- ⊵ j+  =>  i ⊵ j
    team.add_mask((PP & MM) | (PM & MP), STEP_TEAM_TIE_RULES, iteration)
    return team, sign


def _longest_paths(weight: np.ndarray) -> np.ndarray:
    """All-pairs longest path weights (max-plus Floyd-Warshall); ``_NO_PATH`` where unreachable."""
    d = weight.copy()
    for k in range(d.shape[0]):
        via = d[:, k, None] + d[None, k, :]
        via[(d[:, k, None] == _NO_PATH) | (d[None, k, :] == _NO_PATH)] = _NO_PATH
        np.maximum(d, via, out=d)
        np.minimum(d, 1 << 30, out=d)  # positive cycles grow without bound
    return d


def implied_order_relations(reach: np.ndarray, t: int, offset: int = 0) -> np.ndarray:
    """Every ⊵ relation implied by ``reach`` over a shared-effect 2t-item block.

    Scores are ``β_i + δ/2`` for first-kind items and ``β_i - δ/2`` for
    second-kind items, with one unknown ``δ``.  The constraints are
    positively homogeneous, so only the sign of ``δ`` matters: for each
    sign the problem is a system of difference constraints whose
    consequences are longest paths, and a sign is feasible iff no
    positive cycle arises.  A relation is implied iff it holds under every
    feasible sign.
    """
    blk = slice(offset, offset + 2 * t)
    base = np.where(reach[blk, blk], 0, _NO_PATH).astype(np.int64)
    np.fill_diagonal(base, 0)
    first = np.arange(t)
    second = first + t
    implied = np.ones((2 * t, 2 * t), dtype=bool)
    for sign in (1, 0, -1):
        # first-kind minus second-kind score of the same team equals sign
        w = base.copy()
        w[first, second] = np.maximum(w[first, second], sign)
        w[second, first] = np.maximum(w[second, first], -sign)
        d = _longest_paths(w)
        if (d.diagonal() > 0).any():
            continue
        implied &= d >= 0
    out = np.zeros_like(reach)
    out[blk, blk] = implied
    return out


def complete_order(graph: ItemGraph, t: int, iteration: int = 1, offset: int = 0) -> ItemGraph:
    """Add every relation implied over a shared-effect block but not yet derived."""
    out = graph.copy()
    out.add_mask(implied_order_relations(out.reach, t, offset), STEP_EXACT, iteration)
    return out


def _propagate(graph: ItemGraph, model: ModelKind, t: int, iteration: int) -> ItemGraph:
    if model in (ModelKind.SINGLE_ORDER, ModelKind.SINGLE_TIE):
        return propagate_order(graph, t, iteration)
    if model is ModelKind.TEAM_TIE:
        team = _subgraph(graph, slice(0, t))
        sign = _subgraph(graph, slice(t, 3 * t))
        team, sign = propagate_team_tie(team, sign, iteration)
        out = graph.copy()
        _put_subgraph(out, team, slice(0, t))
        _put_subgraph(out, sign, slice(t, 3 * t))
        return out
    return graph


def _subgraph(graph: ItemGraph, s: slice) -> ItemGraph:
    return ItemGraph(graph.reach[s, s].copy(), graph.step[s, s].copy(), graph.iteration[s, s].copy())


def _put_subgraph(graph: ItemGraph, sub: ItemGraph, s: slice) -> None:
    graph.reach[s, s] = sub.reach
    graph.step[s, s] = sub.step
    graph.iteration[s, s] = sub.iteration


def saturate(dataset: Dataset, model: ModelKind | str | None = None) -> "SeparationResult":
    """Run closure and propagation to a fixpoint and classify every item pair."""
    model = dataset.model if model is None else ModelKind.parse(model)
    if model is not dataset.model:
        dataset = dataset.with_model(model)
    t = dataset.t
    graph = direct_relations(dataset, model)
    # every pass adds at least one of at most (3t)^2 edges, so this bound is never hit
    limit = graph.size**2 + 1
    iteration = 0
    while True:
        iteration += 1
        before = graph.edge_count
        graph = transitive_closure(graph, STEP_CLOSURE, iteration)
        graph = _propagate(graph, model, t, iteration)
        if graph.edge_count == before:
            if model in (ModelKind.SINGLE_ORDER, ModelKind.SINGLE_TIE):
                graph = complete_order(graph, t, iteration)
                if graph.edge_count != before:
                    continue
            break
        if iteration > limit:  # pragma: no cover
            raise RuntimeError("saturation failed to terminate")
    return SeparationResult(model, dataset.labels, item_layout(model, t), graph, iteration)


_REL_CODES = (
    PairRelation.EQUIV,
    PairRelation.DOMINATES,
    PairRelation.DOMINATED_BY,
    PairRelation.INCOMPARABLE,
)


@dataclass(frozen=True, eq=False)
class SeparationResult:
    model: ModelKind
    labels: tuple[str, ...]
    items: tuple[Item, ...]
    closure: ItemGraph = field(repr=False)
    iterations: int = 1

    @property
    def t(self) -> int:
        return len(self.labels)

    def index(self, item: Item | int) -> int:
        if isinstance(item, (int, np.integer)):
            return int(item)
        return self._item_index[item]

    @cached_property
    def _item_index(self) -> dict[Item, int]:
        return {it: k for k, it in enumerate(self.items)}

    def item(self, team: int | str, decoration: Decoration | str = Decoration.NONE) -> int:
        """Index of the item for ``team`` (index or label) with the given decoration."""
        if isinstance(team, str):
            team = self.labels.index(team)
        return self._item_index[Item(team, Decoration(decoration))]

    def item_label(self, k: int) -> str:
        return self.items[k].label(self.labels)

    @cached_property
    def relation_codes(self) -> np.ndarray:
        """``codes[k, l]`` indexes ``(EQUIV, DOMINATES, DOMINATED_BY, INCOMPARABLE)``."""
        r = self.closure.reach
        fwd, back = r, r.T
        codes = np.full(r.shape, 3, dtype=np.int8)
        codes[fwd & back] = 0
        codes[fwd & ~back] = 1
        codes[~fwd & back] = 2
        return codes

    def relation(self, k: Item | int, l: Item | int) -> PairRelation:
        return _REL_CODES[self.relation_codes[self.index(k), self.index(l)]]

    @cached_property
    def class_index(self) -> np.ndarray:
        r = self.closure.reach
        equiv = r & r.T
        out = np.full(len(self.items), -1, dtype=np.int64)
        c = 0
        for k in range(len(self.items)):
            if out[k] < 0:
                out[equiv[k]] = c
                c += 1
        return out

    @cached_property
    def classes(self) -> list[tuple[int, ...]]:
        n = int(self.class_index.max()) + 1
        return [tuple(np.flatnonzero(self.class_index == c).tolist()) for c in range(n)]

    @cached_property
    def class_reach(self) -> np.ndarray:
        """``class_reach[c, d]`` for distinct classes means ``c ≫ d``."""
        n = len(self.classes)
        reps = [members[0] for members in self.classes]
        cr = self.closure.reach[np.ix_(reps, reps)].copy()
        cr[np.arange(n), np.arange(n)] = False
        return cr

    @cached_property
    def blocks(self) -> list[tuple[int, ...]]:
        """Groups of items between which relations are meaningful."""
        n = len(self.items)
        if self.model is ModelKind.TEAM_TIE:
            return [tuple(range(self.t)), tuple(range(self.t, n))]
        return [tuple(range(n))]

    @cached_property
    def global_class(self) -> GlobalClass:
        ci = self.class_index
        if all(len(set(ci[list(b)].tolist())) == 1 for b in self.blocks):
            return GlobalClass.OVERLAP
        if all(len(m) == 1 for m in self.classes):
            return GlobalClass.COMPLETE_SEPARATION
        return GlobalClass.QUASI_COMPLETE_SEPARATION


def pair_relation(result: SeparationResult, k: Item | int, l: Item | int) -> PairRelation:
    return result.relation(k, l)


def assign_levels(result: SeparationResult) -> dict[Item, int]:
    """Integer levels, equal within a class and strictly decreasing along ≫.

    A class's level is the length of the longest dominance chain below it.
    """
    cr = result.class_reach
    n = cr.shape[0]
    level = np.zeros(n, dtype=np.int64)
    # the class DAG has at most n levels; relax until stable
    for _ in range(n):
        below = np.where(cr, level[None, :] + 1, 0).max(axis=1, initial=0)
        new = np.maximum(level, below)
        if (new == level).all():
            break
        level = new
    return {item: int(level[result.class_index[k]]) for k, item in enumerate(result.items)}


def format_provenance(result: SeparationResult) -> str:
    """Step-labelled ⊵ table; ``*`` marks each outer iteration after the first.

    Team-specific tie models print the team table and the signed-item table.
    """
    tables = []
    for block in result.blocks:
        tables.append(_format_block(result, list(block)))
    return "\n\n".join(tables) + "\n"


def provenance_label(result: SeparationResult, k: int, l: int) -> str:
    g = result.closure
    if not g.reach[k, l]:
        return ""
    return f"{g.step[k, l]}" + "*" * (int(g.iteration[k, l]) - 1)


def _format_block(result: SeparationResult, block: list[int]) -> str:
    names = [result.item_label(k) for k in block]
    cells = [[provenance_label(result, k, l) for l in block] for k in block]
    width = max(3, max(len(s) for s in names), max(len(c) for row in cells for c in row)) + 1
    head = " " * width + "".join(s.rjust(width) for s in names)
    lines = [head]
    for name, row in zip(names, cells):
        lines.append(name.rjust(width) + "".join(c.rjust(width) for c in row))
    return "\n".join(lines)


def format_relations(result: SeparationResult, rows: list[int], cols: list[int]) -> str:
    names_c = [result.item_label(l) for l in cols]
    width = max(4, max(len(s) for s in names_c)) + 1
    lines = [" " * width + "".join(s.rjust(width) for s in names_c)]
    for k in rows:
        cells = [result.relation(k, l).value for l in cols]
        lines.append(result.item_label(k).rjust(width) + "".join(c.rjust(width) for c in cells))
    return "\n".join(lines) + "\n"
