"""Class/dominance diagrams in DOT.

One node per ≅-class of the items that decide win/loss outcomes, one
edge per ≫ relation left after transitive reduction.  With a summary,
classes are stacked top to bottom by descending RRWP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import ModelKind
from .separation import Decoration, SeparationResult
from .summary import RoundRobinSummary


@dataclass(frozen=True)
class DiagramOptions:
    collapse_above: int | None = None  # classes with more members get a collective label
    collective_name: str = "Others"
    title: str = "classes"


def diagram_items(sep: SeparationResult) -> list[int]:
    """Items whose classes are drawn: teams, or team-at-venue items, or + items under a single tie parameter."""
    t = sep.t
    if sep.model is ModelKind.BASIC or sep.model is ModelKind.TEAM_TIE:
        return [sep.item(i) for i in range(t)]
    if sep.model.has_order:
        return [sep.item(i, d) for d in (Decoration.HOME, Decoration.VISITOR) for i in range(t)]
    return [sep.item(i, Decoration.PLUS) for i in range(t)]


def _member_name(sep: SeparationResult, k: int) -> str:
    if sep.model.has_order:
        return sep.item_label(k)
    return sep.labels[sep.items[k].team]


def transitive_reduction(dom: np.ndarray) -> np.ndarray:
    """Edges of a strict partial order not implied through an intermediate node."""
    dom = dom.astype(bool)
    two_step = (dom.astype(int) @ dom.astype(int)) > 0
    return dom & ~two_step


@dataclass(frozen=True)
class ClassDiagram:
    members: list[list[str]]
    edges: list[tuple[int, int]]
    score: list[float] | None


def class_diagram(sep: SeparationResult, summary: RoundRobinSummary | None = None) -> ClassDiagram:
    items = diagram_items(sep)
    reach = sep.closure.reach[np.ix_(items, items)]
    groups: list[list[int]] = []
    seen = set()
    for a in range(len(items)):
        if a in seen:
            continue
        cls = [b for b in range(len(items)) if reach[a, b] and reach[b, a]]
        seen.update(cls)
        groups.append(cls)
    n = len(groups)
    dom = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            if x != y and reach[groups[x][0], groups[y][0]]:
                dom[x, y] = True
    score = None
    if summary is not None:
        rr = summary.key
        score = [float(np.mean([rr[sep.items[items[b]].team] for b in g])) for g in groups]
    # deterministic order: best score first, then more dominant, then names
    depth = dom.sum(axis=0)
    names = [[_member_name(sep, items[b]) for b in g] for g in groups]
    order = sorted(range(n), key=lambda x: (-(score[x] if score else 0.0), depth[x], names[x]))
    pos = {x: p for p, x in enumerate(order)}
    red = transitive_reduction(dom)
    edges = sorted((pos[x], pos[y]) for x, y in zip(*np.nonzero(red)))
    return ClassDiagram(
        members=[names[x] for x in order],
        edges=edges,
        score=[score[x] for x in order] if score else None,
    )


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(diagram: ClassDiagram, options: DiagramOptions | None = None) -> str:
    opts = options or DiagramOptions()
    lines = [f"digraph {_quote(opts.title)} {{", "  rankdir=TB;", "  node [shape=box];"]
    for x, members in enumerate(diagram.members):
        if opts.collapse_above is not None and len(members) > opts.collapse_above:
            label = f"{opts.collective_name} ({len(members)})"
        else:
            label = ", ".join(members)
        lines.append(f"  c{x} [label={_quote(label)}];")
    for x, y in diagram.edges:
        lines.append(f"  c{x} -> c{y};")
    if diagram.score is not None:
        # classes with equal score share a row; invisible edges stack the rows
        rows: list[list[int]] = []
        for x, s in enumerate(diagram.score):
            if rows and abs(diagram.score[rows[-1][0]] - s) < 1e-9:
                rows[-1].append(x)
            else:
                rows.append([x])
        for row in rows:
            if len(row) > 1:
                lines.append("  { rank=same; " + " ".join(f"c{x};" for x in row) + " }")
        real = set(diagram.edges)
        for upper, lower in zip(rows, rows[1:]):
            if (upper[0], lower[0]) in real:
                continue
            lines.append(f"  c{upper[0]} -> c{lower[0]} [style=invis];")
    lines.append("}")
    return "\n".join(lines) + "\n"
