"""Bipartite matchings of patterns: term-rank, König line covers, standard form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import NotFullTermRank, NotSquare, VertexOutOfRange
from .pattern import Pattern, PatternPermutation, apply_permutation

__all__ = [
    "Vertex",
    "Matching",
    "LineCover",
    "max_matching",
    "term_rank",
    "min_line_cover",
    "standard_form",
    "find_alternating_path",
    "exchange_matching",
]


class Vertex(NamedTuple):
    """A vertex of a bigraph: ``side`` is ``"r"`` (row) or ``"c"`` (column), 0-based index."""

    side: str
    index: int

    def label(self) -> str:
        """1-based label with a prime on column vertices (``3`` or ``3'``)."""
        return f"{self.index + 1}'" if self.side == "c" else f"{self.index + 1}"

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(sorted((int(i), int(j)) for i, j in self.edges))
        object.__setattr__(self, "edges", edges)
        rows = [i for i, _ in edges]
        cols = [j for _, j in edges]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError(f"not a matching: {edges}")

    def __len__(self):
        return len(self.edges)

    def row_to_col(self) -> dict[int, int]:
        return dict(self.edges)

    def col_to_row(self) -> dict[int, int]:
        return {j: i for i, j in self.edges}

    def is_valid_for(self, P: Pattern) -> bool:
        return all(0 <= i < P.m and 0 <= j < P.n and P[i, j] for i, j in self.edges)


@dataclass(frozen=True)
class LineCover:
    rows: frozenset[int]
    cols: frozenset[int]

    def __len__(self):
        return len(self.rows) + len(self.cols)

    def covers(self, P: Pattern) -> bool:
        return all(i in self.rows or j in self.cols for i, j in P.true_cells())


def _adjacency(P: Pattern) -> list[list[int]]:
    return [list(np.flatnonzero(P.cells[i])) for i in range(P.m)]


def _kuhn(P: Pattern) -> tuple[list[int], list[int]]:
    """Augmenting-path matching; rows and candidate columns scanned in increasing order."""
    adj = _adjacency(P)
    match_col = [-1] * P.n  # column -> row
    match_row = [-1] * P.m

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_col[j] == -1 or augment(match_col[j], seen):
                match_col[j] = i
                match_row[i] = j
                return True
        return False

    for i in range(P.m):
        augment(i, [False] * P.n)
    return match_row, match_col


def max_matching(P: Pattern) -> Matching:
    match_row, _ = _kuhn(P)
    return Matching(tuple((i, j) for i, j in enumerate(match_row) if j >= 0))


def term_rank(P: Pattern) -> int:
    return len(max_matching(P))


def min_line_cover(P: Pattern) -> LineCover:
    """Minimum line cover from a maximum matching (König's construction).

    Let Z be the vertices reachable from unmatched rows by alternating paths.
    Then (rows not in Z) together with (columns in Z) cover every true cell.
    """
    match_row, match_col = _kuhn(P)
    adj = _adjacency(P)
    seen_rows = set(i for i in range(P.m) if match_row[i] == -1)
    seen_cols: set[int] = set()
    queue = deque(sorted(seen_rows))
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j in seen_cols:
                continue
            seen_cols.add(j)
            r = match_col[j]
            if r != -1 and r not in seen_rows:
                seen_rows.add(r)
                queue.append(r)
    rows = frozenset(i for i in range(P.m) if i not in seen_rows)
    return LineCover(rows=rows, cols=frozenset(seen_cols))


def standard_form(P: Pattern) -> tuple[Pattern, PatternPermutation]:
    """Permute rows of a square full-term-rank pattern so the diagonal is all ones."""
    if P.m != P.n:
        raise NotSquare(f"pattern is {P.m}x{P.n}")
    _, match_col = _kuhn(P)
    if any(r == -1 for r in match_col):
        raise NotFullTermRank(f"term-rank {sum(r != -1 for r in match_col)} < {P.n}")
    perm = PatternPermutation(tuple(match_col), tuple(range(P.n)))
    return apply_permutation(P, perm), perm


def _neighbors(P: Pattern, v: Vertex) -> list[Vertex]:
    if v.side == "r":
        return [Vertex("c", int(j)) for j in np.flatnonzero(P.cells[v.index])]
    return [Vertex("r", int(i)) for i in np.flatnonzero(P.cells[:, v.index])]


def _partner(M: Matching, v: Vertex) -> Optional[Vertex]:
    if v.side == "r":
        j = M.row_to_col().get(v.index)
        return None if j is None else Vertex("c", j)
    i = M.col_to_row().get(v.index)
    return None if i is None else Vertex("r", i)


def find_alternating_path(
    P: Pattern, M: Matching, v: Vertex, target: Optional[Vertex] = None
) -> Optional[list[Vertex]]:
    """Shortest M-alternating path starting at the unmatched vertex ``v``.

    The returned list ``[i1, i2, ..., i2l]`` has ``i1 = v``; edges
    ``i(2k-1)--i(2k)`` are outside ``M`` and ``i(2k)--i(2k+1)`` are in ``M``.
    With ``target`` given, the path must end there. Otherwise an augmenting
    path (ending at an unmatched vertex) is preferred, and failing that the
    single edge to the lowest-indexed neighbour is returned. ``None`` when no
    such path exists.
    """
    for w in (v,) + ((target,) if target is not None else ()):
        limit = P.m if w.side == "r" else P.n
        if w.side not in ("r", "c") or not 0 <= w.index < limit:
            raise VertexOutOfRange(f"vertex {w} outside {P.m}x{P.n} bigraph")
    if _partner(M, v) is not None:
        raise ValueError(f"vertex {v} is matched by M")

    # BFS over (non-matching edge, matching edge) steps
    parent: dict[Vertex, Optional[Vertex]] = {v: None}
    queue = deque([v])
    ends: list[Vertex] = []
    while queue:
        x = queue.popleft()
        for y in _neighbors(P, x):
            if y in parent or _partner(M, x) == y:
                continue
            parent[y] = x
            ends.append(y)
            z = _partner(M, y)
            if z is not None and z not in parent:
                parent[z] = y
                queue.append(z)

    def trace(end: Vertex) -> list[Vertex]:
        path = [end]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path[::-1]

    if target is not None:
        return trace(target) if target in ends else None
    for end in ends:
        if _partner(M, end) is None:
            return trace(end)
    return trace(ends[0]) if ends else None


def exchange_matching(M: Matching, path: list[Vertex]) -> Matching:
    """Swap matching and non-matching edges along an alternating path.

    The new matching covers the path's first vertex. If the terminal vertex
    was matched, its old partner becomes uncovered and the size is unchanged;
    otherwise the matching grows by one.
    """

    def edge(a: Vertex, b: Vertex) -> tuple[int, int]:
        return (a.index, b.index) if a.side == "r" else (b.index, a.index)

    edges = set(M.edges)
    end = path[-1]
    partner = _partner(M, end)
    if partner is not None:
        edges.discard(edge(end, partner))
    for k in range(0, len(path) - 1):
        e = edge(path[k], path[k + 1])
        if k % 2 == 0:
            edges.add(e)
        else:
            edges.discard(e)
    return Matching(tuple(edges))
