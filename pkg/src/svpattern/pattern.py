"""Zero-nonzero patterns and their structural operations.

A :class:`Pattern` is an immutable m x n boolean grid. The text format is one
row per line, cells written as ``0``/``1`` with optional interior whitespace,
optionally preceded by an ``m n`` header line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    HeaderMismatch,
    InvalidCharacter,
    RaggedRows,
)

__all__ = [
    "Pattern",
    "PatternPermutation",
    "parse_pattern",
    "render_pattern",
    "pattern_of",
    "direct_sum",
    "is_superpattern",
    "apply_permutation",
]


class Pattern:
    """Immutable m x n zero-nonzero pattern."""

    __slots__ = ("_cells", "_key")

    def __init__(self, cells):
        arr = np.array(cells, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"pattern must be a non-empty 2-D grid, got shape {arr.shape}")
        arr.setflags(write=False)
        self._cells = arr
        self._key = (arr.shape, np.packbits(arr).tobytes())

    @classmethod
    def from_rows(cls, rows: Iterable[str | Sequence[int]]) -> "Pattern":
        """Build from strings like ``"1011"`` or integer sequences."""
        grid = [[int(c) for c in r] if isinstance(r, str) else list(r) for r in rows]
        return cls(np.array(grid, dtype=int) != 0)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Pattern":
        return cls(np.zeros((m, n), dtype=bool))

    @classmethod
    def ones(cls, m: int, n: int) -> "Pattern":
        return cls(np.ones((m, n), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> "Pattern":
        return cls(np.eye(n, dtype=bool))

    @property
    def cells(self) -> np.ndarray:
        """Read-only boolean array of shape (m, n)."""
        return self._cells

    @property
    def m(self) -> int:
        return self._cells.shape[0]

    @property
    def n(self) -> int:
        return self._cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def T(self) -> "Pattern":
        return Pattern(self._cells.T)

    def __getitem__(self, idx):
        return self._cells[idx]

    def count(self) -> int:
        return int(self._cells.sum())

    def true_cells(self) -> list[tuple[int, int]]:
        """True cells in row-major order."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self._cells))]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Pattern":
        return Pattern(self._cells[np.ix_(list(rows), list(cols))])

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Pattern({render_pattern(self, header=False)!r})"

    def __str__(self):
        return render_pattern(self, header=False)


@dataclass(frozen=True)
class PatternPermutation:
    """Row and column permutations; ``result[i, j] = P[row_perm[i], col_perm[j]]``."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_perm", tuple(int(i) for i in self.row_perm))
        object.__setattr__(self, "col_perm", tuple(int(j) for j in self.col_perm))
        for name, perm in (("row_perm", self.row_perm), ("col_perm", self.col_perm)):
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{name} is not a permutation: {perm}")

    @classmethod
    def identity(cls, m: int, n: int) -> "PatternPermutation":
        return cls(tuple(range(m)), tuple(range(n)))

    def inverse(self) -> "PatternPermutation":
        return PatternPermutation(tuple(np.argsort(self.row_perm)), tuple(np.argsort(self.col_perm)))

    def compose(self, other: "PatternPermutation") -> "PatternPermutation":
        """Permutation equivalent to applying ``self`` and then ``other``."""
        return PatternPermutation(
            tuple(self.row_perm[i] for i in other.row_perm),
            tuple(self.col_perm[j] for j in other.col_perm),
        )

    def apply_matrix(self, A: np.ndarray) -> np.ndarray:
        return np.asarray(A)[np.ix_(self.row_perm, self.col_perm)]


def parse_pattern(text: str) -> Pattern:
    """Parse the 0/1 text format.

    Blank lines and lines starting with ``#`` are skipped. A first line made of
    exactly two integers is taken as an ``m n`` header when the remaining rows
    agree with it.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines()):
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append((lineno, raw))
    if not lines:
        raise EmptyInput()

    header = None
    tokens = lines[0][1].split()
    if len(tokens) == 2 and all(t.isdigit() for t in tokens) and len(lines) > 1:
        dims = (int(tokens[0]), int(tokens[1]))
        is_01_row = all(t in ("0", "1") for t in tokens)
        body = lines[1:]
        widths = {len("".join(r.split())) for _, r in body}
        consistent = len(body) == dims[0] and widths == {dims[1]}
        if consistent or not is_01_row:
            header = dims
            lines = body
    rows: list[list[bool]] = []
    width = None
    for idx, (lineno, raw) in enumerate(lines):
        row = []
        for col, ch in enumerate(raw):
            if ch in " \t\r":
                continue
            if ch not in "01":
                raise InvalidCharacter((lineno, col), ch)
            row.append(ch == "1")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRows(idx, width, len(row))
        rows.append(row)
    if header is not None and header != (len(rows), width):
        raise HeaderMismatch(f"header says {header[0]}x{header[1]}, body is {len(rows)}x{width}")
    return Pattern(rows)


def render_pattern(P: Pattern, header: bool = False) -> str:
    body = "\n".join("".join("1" if c else "0" for c in row) for row in P.cells)
    if header:
        return f"{P.m} {P.n}\n{body}"
    return body


def pattern_of(A, zero_tol: float = 0.0) -> Pattern:
    """Pattern of a real matrix: cell (i, j) is true iff ``|A[i, j]| > zero_tol``."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    return Pattern(np.abs(np.asarray(A, dtype=float)) > zero_tol)


def direct_sum(P: Pattern, Q: Pattern) -> Pattern:
    out = np.zeros((P.m + Q.m, P.n + Q.n), dtype=bool)
    out[: P.m, : P.n] = P.cells
    out[P.m :, P.n :] = Q.cells
    return Pattern(out)


def is_superpattern(S: Pattern, P: Pattern) -> bool:
    """True iff every true cell of ``P`` is true in ``S``."""
    if S.shape != P.shape:
        raise DimensionMismatch(f"shapes differ: {S.shape} vs {P.shape}")
    return bool(np.all(S.cells | ~P.cells))


def apply_permutation(P: Pattern, perm: PatternPermutation) -> Pattern:
    if len(perm.row_perm) != P.m or len(perm.col_perm) != P.n:
        raise DimensionMismatch(
            f"permutation is {len(perm.row_perm)}x{len(perm.col_perm)}, pattern is {P.m}x{P.n}"
        )
    return Pattern(perm.apply_matrix(P.cells))
