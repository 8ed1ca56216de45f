"""Digraphs and bigraphs of patterns, and the combinatorial recognisers.

Vertices of a bigraph are :class:`~svpattern.termrank.Vertex` values; row
vertices print as ``3`` and column vertices as ``3'`` (1-based).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import NotStandardForm
from .pattern import Pattern
from .termrank import Vertex

__all__ = [
    "Digraph",
    "Bigraph",
    "FiedlerCertificate",
    "digraph_of",
    "bigraph_of",
    "is_weak_path",
    "has_weak_cycle",
    "find_weak_cycle",
    "max_degree_sum",
    "is_connected",
    "connected_components",
    "recognize_fiedler",
]


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        for i, j in arcs:
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"invalid arc {(i, j)} on {self.n} vertices")
        object.__setattr__(self, "arcs", arcs)

    def pair_counts(self) -> Counter:
        """Underlying multigraph: unordered pair -> number of arcs (1 or 2)."""
        return Counter((min(i, j), max(i, j)) for i, j in self.arcs)

    def degree(self, v: int) -> int:
        return sum(1 for i, j in self.arcs if v in (i, j))

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(i for i, j in self.arcs if j == v)

    def out_neighbors(self, v: int) -> list[int]:
        return sorted(j for i, j in self.arcs if i == v)


@dataclass(frozen=True)
class Bigraph:
    m: int
    n: int
    edges: frozenset[tuple[int, int]]

    def vertices(self) -> list[Vertex]:
        return [Vertex("r", i) for i in range(self.m)] + [Vertex("c", j) for j in range(self.n)]

    def adjacency(self) -> dict[Vertex, list[Vertex]]:
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices()}
        for i, j in sorted(self.edges):
            adj[Vertex("r", i)].append(Vertex("c", j))
            adj[Vertex("c", j)].append(Vertex("r", i))
        return adj

    def has_edge(self, a: Vertex, b: Vertex) -> bool:
        if a.side == b.side:
            return False
        i, j = (a.index, b.index) if a.side == "r" else (b.index, a.index)
        return (i, j) in self.edges

    def to_pattern(self) -> Pattern:
        cells = np.zeros((self.m, self.n), dtype=bool)
        for i, j in self.edges:
            cells[i, j] = True
        return Pattern(cells)


def _vkey(v: Vertex) -> tuple[int, int]:
    return (0 if v.side == "r" else 1, v.index)


@dataclass(frozen=True)
class FiedlerCertificate:
    """Spine path, designated spine vertices, legs and extra pendant columns.

    ``legs`` holds ``(leaf, designated)`` pairs; ``pendant_columns`` holds
    ``(column, row)`` pairs for the column vertices added beyond the square core.
    """

    gamma: tuple[Vertex, ...]
    designated: tuple[Vertex, ...]
    legs: tuple[tuple[Vertex, Vertex], ...]
    pendant_columns: tuple[tuple[Vertex, Vertex], ...] = ()

    def designated_positions(self) -> list[int]:
        """1-based positions of the designated vertices along gamma."""
        pos = {v: k + 1 for k, v in enumerate(self.gamma)}
        return [pos[v] for v in self.designated]

    def validate(self, B: Bigraph) -> bool:
        """Re-check every structural condition of the certificate against B."""
        gamma = list(self.gamma)
        if len(set(gamma)) != len(gamma) or len(gamma) < 2:
            return False
        if any(not B.has_edge(a, b) for a, b in zip(gamma, gamma[1:])):
            return False
        on_gamma = set(gamma)
        legs = list(self.legs)
        pend = list(self.pendant_columns)
        # designated vertices are exactly the spine ends of the legs, one leg each
        if [d for _, d in legs] != list(self.designated):
            return False
        leaves = [u for u, _ in legs]
        if len(set(leaves)) != len(leaves) or on_gamma & set(leaves):
            return False
        if any(not B.has_edge(u, d) or d not in on_gamma for u, d in legs):
            return False
        b_deg = Counter(v for i, j in B.edges for v in (Vertex("r", i), Vertex("c", j)))
        if any(b_deg[u] != 1 for u in leaves):
            return False
        ell = len(gamma)
        positions = self.designated_positions()
        if positions != sorted(positions) or len(set(positions)) != len(positions):
            return False
        if positions and not (positions[0] > 1 and positions[-1] < ell):
            return False
        # every stretch of spine between legs must admit a perfect matching
        gaps = [positions[0] - 1] if positions else [ell]
        gaps += [b - a - 1 for a, b in zip(positions, positions[1:])]
        if positions:
            gaps.append(ell - positions[-1])
        if any(g % 2 for g in gaps):
            return False
        # pendant columns hang off spine rows
        core = on_gamma | set(leaves)
        for c, r in pend:
            if c.side != "c" or r.side != "r" or c in core or r not in on_gamma:
                return False
            if not B.has_edge(c, r):
                return False
        if len({c for c, _ in pend}) != len(pend):
            return False
        # spine ends are pendant in the square core
        core_edges = {(a, b) for a, b in zip(gamma, gamma[1:])} | set(legs)
        core_deg = Counter(v for e in core_edges for v in e)
        if core_deg[gamma[0]] != 1 or core_deg[gamma[-1]] != 1:
            return False
        # the pieces account for every edge and vertex of B
        all_edges = {frozenset(e) for e in core_edges} | {frozenset(e) for e in pend}
        b_edges = {frozenset((Vertex("r", i), Vertex("c", j))) for i, j in B.edges}
        if all_edges != b_edges:
            return False
        n_rows = sum(1 for v in core if v.side == "r")
        n_cols = sum(1 for v in core if v.side == "c")
        return n_rows == n_cols == B.m and n_cols + len(pend) == B.n

    def to_dict(self) -> dict:
        return {
            "spine": [v.label() for v in self.gamma],
            "designated": [v.label() for v in self.designated],
            "legs": [[u.label(), d.label()] for u, d in self.legs],
            "pendant_columns": [[c.label(), r.label()] for c, r in self.pendant_columns],
        }

    def render(self) -> str:
        d = self.to_dict()
        return "\n".join(
            [
                "spine: " + " - ".join(d["spine"]),
                "designated: " + ", ".join(d["designated"]),
                "legs: " + ", ".join(f"{d_}-{u}" for u, d_ in d["legs"]),
                "pendant_columns: " + ", ".join(f"{r}-{c}" for c, r in d["pendant_columns"]),
            ]
        )


def digraph_of(P: Pattern) -> Digraph:
    """Digraph of a square pattern in standard form (diagonal ignored)."""
    if P.m != P.n or not np.all(np.diag(P.cells)):
        raise NotStandardForm("digraph needs a square pattern with an all-ones diagonal")
    return Digraph(P.n, frozenset((i, j) for i, j in P.true_cells() if i != j))


def bigraph_of(P: Pattern) -> Bigraph:
    return Bigraph(P.m, P.n, frozenset(P.true_cells()))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def is_weak_path(D: Digraph) -> bool:
    """True iff the underlying multigraph is a simple path through all n vertices."""
    counts = D.pair_counts()
    if any(c > 1 for c in counts.values()) or len(counts) != D.n - 1:
        return False
    uf = _UnionFind(D.n)
    deg = Counter()
    for i, j in counts:
        if not uf.union(i, j):
            return False
        deg[i] += 1
        deg[j] += 1
    return all(d <= 2 for d in deg.values())


def has_weak_cycle(D: Digraph) -> bool:
    return find_weak_cycle(D) is not None


def find_weak_cycle(D: Digraph) -> Optional[list[int]]:
    """Vertices of a weak cycle in cyclic order, or None.

    Opposite arcs between a pair form a cycle of length 2. Otherwise the first
    (in sorted order) underlying edge that closes a cycle is returned together
    with the shortest path joining its ends.
    """
    counts = D.pair_counts()
    for pair in sorted(counts):
        if counts[pair] > 1:
            return list(pair)
    edges = sorted(counts)
    adj: dict[int, list[int]] = {v: [] for v in range(D.n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    uf = _UnionFind(D.n)
    for u, v in edges:
        if uf.union(u, v):
            continue
        # shortest u-v path avoiding edge (u, v)
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if (x, y) in ((u, v), (v, u)) or y in prev:
                    continue
                prev[y] = x
                queue.append(y)
        path = [v]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]
    return None


def max_degree_sum(D: Digraph) -> int:
    deg = Counter()
    for i, j in D.arcs:
        deg[i] += 1
        deg[j] += 1
    return max(deg.values(), default=0)


def connected_components(B: Bigraph) -> list[list[Vertex]]:
    """Components in order of their smallest vertex (rows before columns)."""
    adj = B.adjacency()
    seen: set[Vertex] = set()
    comps = []
    for v in B.vertices():
        if v in seen:
            continue
        comp = []
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(sorted(comp, key=_vkey))
    return comps


def is_connected(B: Bigraph) -> bool:
    return len(connected_components(B)) == 1


def _tree_path(adj: dict[Vertex, list[Vertex]], a: Vertex, b: Vertex) -> list[Vertex]:
    prev: dict[Vertex, Optional[Vertex]] = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _square_fiedler(adj: dict[Vertex, list[Vertex]]) -> Optional[tuple[list[Vertex], list[Vertex], list]]:
    """Spine decomposition of a tree with equal row/column counts, or None."""
    verts = sorted(adj, key=_vkey)
    deg = {v: len(adj[v]) for v in verts}
    if len(verts) == 2:
        return verts, [], []
    if any(d > 3 for d in deg.values()):
        return None
    ends = [v for v in verts if deg[v] == 1 and deg[adj[v][0]] <= 2]
    if len(ends) != 2:
        return None
    gamma = _tree_path(adj, ends[0], ends[1])
    on_gamma = set(gamma)
    designated, legs = [], []
    for pos, v in enumerate(gamma):
        off = [u for u in adj[v] if u not in on_gamma]
        if not off:
            continue
        u = off[0]
        if deg[u] != 1 or pos in (0, len(gamma) - 1):
            return None
        designated.append(v)
        legs.append((u, v))
    if len(gamma) + len(legs) != len(verts):
        return None
    positions = [gamma.index(v) + 1 for v in designated]
    ell = len(gamma)
    gaps = [positions[0] - 1] if positions else [ell]
    gaps += [b - a - 1 for a, b in zip(positions, positions[1:])]
    if positions:
        gaps.append(ell - positions[-1])
    if any(g % 2 for g in gaps):
        return None
    return gamma, designated, legs


def recognize_fiedler(B: Bigraph) -> Optional[FiedlerCertificate]:
    """Certificate that B is an m x n Fiedler graph (m <= n), or None.

    B must be a tree. Extra pendant columns are stripped so that at most one
    pendant column per row survives; the surviving pendant columns are then
    chosen (lowest rows first) so that a square core remains, which must
    decompose into a spine with legs whose gaps all have even length. Every
    stripped column must hang from a row on the spine, never from a leg leaf.
    """
    if B.m > B.n:
        raise ValueError("recognize_fiedler needs m <= n; transpose first")
    if len(B.edges) != B.m + B.n - 1 or not is_connected(B):
        return None
    adj = B.adjacency()
    deg = {v: len(nb) for v, nb in adj.items()}
    pendant_at: dict[Vertex, list[Vertex]] = {}
    inner_cols = []
    for j in range(B.n):
        c = Vertex("c", j)
        if deg[c] == 1:
            pendant_at.setdefault(adj[c][0], []).append(c)
        else:
            inner_cols.append(c)
    need = B.m - len(inner_cols)
    cand_rows = sorted(pendant_at, key=_vkey)
    if need < 0 or need > len(cand_rows):
        return None
    for chosen in combinations(cand_rows, need):
        core_cols = set(inner_cols) | {pendant_at[r][0] for r in chosen}
        extras = [(c, r) for r in cand_rows for c in pendant_at[r] if c not in core_cols]
        core = {v for v in adj if v.side == "r" or v in core_cols}
        core_adj = {v: [u for u in adj[v] if u in core] for v in core}
        found = _square_fiedler(core_adj)
        if found is None:
            continue
        gamma, designated, legs = found
        on_gamma = set(gamma)
        # a designated row may carry extras: merging them into its leg column leaves the core
        if any(r not in on_gamma for _, r in extras):
            continue
        extras.sort(key=lambda e: _vkey(e[0]))
        return FiedlerCertificate(
            gamma=tuple(gamma),
            designated=tuple(designated),
            legs=tuple(legs),
            pendant_columns=tuple(extras),
        )
    return None
