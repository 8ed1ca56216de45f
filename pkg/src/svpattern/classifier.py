"""Decide whether a pattern forces all singular values to be simple.

:func:`classify` works on the orientation with m <= n. Term-rank m - 2 or
less always gives 0 twice. At full term-rank the answer is decided by the
bigraph: a Fiedler graph certifies distinct singular values, and otherwise a
witness is built. Term-rank m - 1 is reported as unresolved together with
whatever partial structure could be found.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import CapExceeded, DimensionMismatch, HypothesisViolated, PreconditionTermRank
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, multiplicity, random_realization, singular_values
from .pattern import Pattern, PatternPermutation, apply_permutation
from .structure import (
    FiedlerCertificate,
    bigraph_of,
    connected_components,
    digraph_of,
    has_weak_cycle,
    max_degree_sum,
    recognize_fiedler,
)
from .termrank import max_matching, standard_form, term_rank
from .witness import (
    CLAW_R,
    Witness,
    coalescence_witness,
    column_duplicate,
    degree_witness,
    embed_and_lift,
    hessenberg_orthogonal,
    orthogonal_border,
    shared_sigma_direct_sum,
    subdivided_claw_witness,
    superpattern_lift,
    weak_cycle_witness,
)

log = logging.getLogger(__name__)

__all__ = [
    "Verdict",
    "Classification",
    "RankRequirementDecomposition",
    "SampleReport",
    "classify",
    "requires_full_rank",
    "rank_m_minus_1_decomposition",
    "sample_verify",
    "enumerate_patterns",
    "border_multiplicity_check",
    "witness_for",
]

ENUMERATION_CAP = 25
_SEED_TRIES = 3
_ALPHA_CAP = 5000


class Verdict(str, Enum):
    REQUIRES_DISTINCT = "RequiresDistinct"
    ALLOWS_MULTIPLE = "AllowsMultiple"
    ZERO_MULTIPLE = "ZeroMultiple"
    UNRESOLVED = "Unresolved"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RankRequirementDecomposition:
    """Row/column permutation exposing a rank-forcing block form.

    ``kind`` is ``"FullRank"`` (blocks ``S``, ``T``) or ``"RankMminus1"``
    (blocks ``P11``, ``P21``, ``P22`` with split sizes ``r`` and ``s``).
    """

    kind: str
    permutation: PatternPermutation
    blocks: dict = field(default_factory=dict)
    r: Optional[int] = None
    s: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "row_perm": list(self.permutation.row_perm),
            "col_perm": list(self.permutation.col_perm),
            "blocks": {k: str(v).splitlines() for k, v in self.blocks.items()},
        }
        if self.r is not None:
            out["r"], out["s"] = self.r, self.s
        return out


@dataclass
class Classification:
    verdict: Verdict
    pattern: Pattern
    certificate: Optional[FiedlerCertificate] = None
    witness: Optional[Witness] = None
    notes: list = field(default_factory=list)
    working: Optional[Pattern] = None
    decomposition: Optional[RankRequirementDecomposition] = None

    @property
    def exit_code(self) -> int:
        return {
            Verdict.REQUIRES_DISTINCT: 0,
            Verdict.ALLOWS_MULTIPLE: 10,
            Verdict.ZERO_MULTIPLE: 11,
            Verdict.UNRESOLVED: 12,
        }[self.verdict]

    def to_dict(self, tol: Tolerances = DEFAULT_TOL) -> dict:
        return {
            "verdict": str(self.verdict),
            "shape": list(self.pattern.shape),
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "witness": None if self.witness is None else witness_dict(self.witness, self.pattern, tol),
            "decomposition": None if self.decomposition is None else self.decomposition.to_dict(),
            "notes": list(self.notes),
        }


def witness_dict(w: Witness, pattern: Optional[Pattern], tol: Tolerances = DEFAULT_TOL) -> dict:
    out = {"route": w.route, "matrix": w.matrix.tolist()}
    out.update(w.check(pattern, tol))
    out["notes"] = list(w.notes)
    return out


# rank requirements ----------------------------------------------------------


def _peel(cells: np.ndarray) -> Optional[tuple[list[int], list[int]]]:
    m, n = cells.shape
    rows_left = set(range(m))
    cols_left = list(range(n))
    r_order: list[int] = []
    c_order: list[int] = []
    while rows_left:
        live = sorted(rows_left)
        for j in cols_left:
            support = [i for i in live if cells[i, j]]
            if len(support) == 1:
                r_order.append(support[0])
                c_order.append(j)
                rows_left.discard(support[0])
                cols_left.remove(j)
                break
        else:
            return None
    return r_order, c_order + cols_left


def requires_full_rank(P: Pattern) -> Optional[RankRequirementDecomposition]:
    """Permutation to [S | T] with S upper triangular and unit diagonal, if one exists.

    Peels a column with a single true cell among the remaining rows, removes
    that row, and repeats; any choice of column works, so the lowest index
    is taken.
    """
    if P.m > P.n:
        raise DimensionMismatch(f"need m <= n, pattern is {P.m}x{P.n}")
    found = _peel(P.cells)
    if found is None:
        return None
    rows, cols = found
    perm = PatternPermutation(tuple(rows), tuple(cols))
    Q = apply_permutation(P, perm)
    blocks = {"S": Q.submatrix(range(P.m), range(P.m))}
    if P.n > P.m:
        blocks["T"] = Q.submatrix(range(P.m), range(P.m, P.n))
    return RankRequirementDecomposition("FullRank", perm, blocks)


def _requires_full_column_rank(cells: np.ndarray) -> Optional[tuple[list[int], list[int]]]:
    """Orders (rows, cols) putting a tall block in upper triangular unit-diagonal form."""
    r, c = cells.shape
    if c == 0:
        return list(range(r)), []
    found = _peel(cells.T)
    if found is None:
        return None
    cols, rows = found  # transpose of [S|T] is [S^T; T^T] with S^T lower triangular
    lead_rows = rows[:c][::-1]
    return lead_rows + rows[c:], cols[::-1]


def rank_m_minus_1_decomposition(P: Pattern, cap: int = 16) -> Optional[RankRequirementDecomposition]:
    """Block form [[P11, O], [P21, P22]] showing that P requires rank m - 1.

    A line cover of size m - 1 forces a column set C1 whose supported rows
    number exactly |C1| + 1. Each such split is tried in order of |C1|; P11
    must then force full column rank and P22 full row rank.
    """
    m, n = P.shape
    if term_rank(P) != m - 1:
        raise PreconditionTermRank(f"term-rank is {term_rank(P)}, expected {m - 1}")
    if n > cap:
        raise CapExceeded(f"{n} columns exceeds the subset search cap of {cap}")
    cells = P.cells
    for size in range(0, n + 1):
        for C1 in combinations(range(n), size):
            c1 = set(C1)
            C2 = [j for j in range(n) if j not in c1]
            R1 = [i for i in range(m) if not cells[i, C2].any()]
            if len(R1) != size + 1:
                continue
            R2 = [i for i in range(m) if i not in R1]
            a = _requires_full_column_rank(cells[np.ix_(R1, list(C1))])
            if a is None:
                continue
            b = _peel(cells[np.ix_(R2, C2)]) if R2 else ([], list(range(len(C2))))
            if b is None:
                continue
            rows = [R1[i] for i in a[0]] + [R2[i] for i in b[0]]
            cols = [C1[j] for j in a[1]] + [C2[j] for j in b[1]]
            perm = PatternPermutation(tuple(rows), tuple(cols))
            Q = apply_permutation(P, perm)
            r = len(R1)
            s = n + 1 - r
            blocks = {"P11": Q.submatrix(range(r), range(r - 1)) if r > 1 else None}
            if R2:
                blocks["P21"] = Q.submatrix(range(r, m), range(r - 1)) if r > 1 else None
                blocks["P22"] = Q.submatrix(range(r, m), range(r - 1, n))
            blocks = {k: v for k, v in blocks.items() if v is not None}
            return RankRequirementDecomposition("RankMminus1", perm, blocks, r=r, s=s)
    return None


# sampling and enumeration ---------------------------------------------------


@dataclass(frozen=True)
class SampleReport:
    trials: int
    min_gap_observed: float
    any_multiple: bool

    def to_dict(self) -> dict:
        return {"trials": self.trials, "min_gap_observed": self.min_gap_observed, "any_multiple": self.any_multiple}


def sample_verify(P: Pattern, trials: int = 1000, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> SampleReport:
    """Monte-Carlo search for a multiple singular value among signed random realizations.

    Only ever able to show that P allows a multiple value; a clean report is
    evidence, not proof, that it requires distinct ones.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    mask = P.cells
    best = float("inf")
    hit = False
    for _ in range(trials):
        A = np.where(mask, rng.uniform(0.5, 2.0, P.shape) * rng.choice([-1.0, 1.0], P.shape), 0.0)
        s = singular_values(A)
        if s.size < 2:
            continue
        g = float(np.min(s[:-1] - s[1:]))
        best = min(best, g)
        if s[0] > 0 and g / s[0] <= tol.sv_cluster_tol:
            hit = True
    return SampleReport(trials, best, hit)


def enumerate_patterns(m: int, n: int, predicate: Optional[Callable[[Pattern], bool]] = None) -> Iterator[Pattern]:
    """All m x n patterns in counting order (bit ``i*n + j`` of the counter is cell (i, j))."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if m * n > ENUMERATION_CAP:
        raise CapExceeded(f"{m}x{n} has {m * n} cells; the cap is {ENUMERATION_CAP}")
    weights = 1 << np.arange(m * n)
    for k in range(1 << (m * n)):
        P = Pattern(((k & weights) != 0).reshape(m, n))
        if predicate is None or predicate(P):
            yield P


def border_multiplicity_check(A, U, sigma: float, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Interlacing bound: stacking l rows under A loses at most l copies of sigma."""
    A = as_matrix(A)
    U = as_matrix(U)
    if U.shape[1] != A.shape[1]:
        raise DimensionMismatch(f"U has {U.shape[1]} columns, A has {A.shape[1]}")
    k = multiplicity(A, sigma, tol)
    ell = U.shape[0]
    if ell >= k:
        raise HypothesisViolated(f"need fewer border rows ({ell}) than the multiplicity {k}")
    return multiplicity(np.vstack([A, U]), sigma, tol) >= k - ell


# witness routes -------------------------------------------------------------


def _square_witness(P: Pattern, seed: int, tol: Tolerances, max_iter: int) -> Optional[Witness]:
    """Witness for a square full-term-rank pattern whose digraph is not a weak path."""
    Ps, perm = standard_form(P)
    inv = np.argsort(perm.row_perm)
    D = digraph_of(Ps)
    w = None
    for k in range(_SEED_TRIES):
        if max_degree_sum(D) >= 3:
            w = degree_witness(Ps, seed + k, tol, max_iter)
        if w is None and has_weak_cycle(D):
            w = weak_cycle_witness(Ps, seed + k, tol, max_iter)
        if w is not None:
            break
    if w is None:
        return None
    return Witness(w.matrix[inv], w.target_sigma, 2, w.ssvp_claimed, w.route, w.notes)


def _is_single_support(cells: np.ndarray, j: int) -> Optional[int]:
    nz = np.flatnonzero(cells[:, j])
    return int(nz[0]) if nz.size == 1 else None


def _duplicate_columns(P: Pattern) -> list[tuple[int, int]]:
    """(duplicate, kept) pairs of single-support columns sharing a row."""
    first: dict[int, int] = {}
    dups = []
    for j in range(P.n):
        r = _is_single_support(P.cells, j)
        if r is None:
            continue
        if r in first:
            dups.append((j, first[r]))
        else:
            first[r] = j
    return dups


def _alpha_route(P: Pattern, seed: int, tol: Tolerances, max_iter: int) -> Optional[Witness]:
    m, n = P.shape
    for count, alpha in enumerate(combinations(range(n), m)):
        if count >= _ALPHA_CAP:
            break
        Pa = P.submatrix(range(m), alpha)
        if term_rank(Pa) < m:
            continue
        Ps, _ = standard_form(Pa)
        D = digraph_of(Ps)
        if not (has_weak_cycle(D) or max_degree_sum(D) >= 3):
            continue
        wa = _square_witness(Pa, seed, tol, max_iter)
        if wa is None:
            continue
        M0 = np.zeros(P.shape)
        M0[:, list(alpha)] = wa.matrix
        try:
            B = superpattern_lift(M0, P, seed, tol, max_iter)
        except HypothesisViolated:
            continue
        if B is None:
            continue
        cols = "".join(f"{a + 1}'" for a in alpha)
        return Witness(B, wa.target_sigma, 2, True, "square-submatrix", wa.notes + (f"columns {cols}",))
    return None


def _claw_route(P: Pattern, seed: int, tol: Tolerances, max_iter: int) -> Optional[Witness]:
    m, n = P.shape
    R = subdivided_claw_witness()
    for c in range(n):
        nbrs = [int(i) for i in np.flatnonzero(P.cells[:, c])]
        if len(nbrs) < 3:
            continue
        others = [j for j in range(n) if j != c]
        M = max_matching(P.submatrix(range(m), others))
        if len(M) < m:
            continue
        to_col = {i: others[j] for i, j in M.edges}
        for trio in combinations(nbrs, 3):
            rows = list(trio)
            cols = [to_col[r] for r in rows] + [c]
            B = embed_and_lift(P, R.matrix, rows, cols, seed, tol, max_iter)
            if B is not None:
                w = Witness(B, 1.0, 2, True, "subdivided-claw", (f"claw centred at column {c + 1}'",))
                if w.verify(P, tol):
                    return w
    return None


def _disconnected_witness(P: Pattern, seed: int) -> Witness:
    comps = connected_components(bigraph_of(P))
    first = comps[0]
    r1 = [v.index for v in first if v.side == "r"]
    c1 = [v.index for v in first if v.side == "c"]
    r2 = [i for i in range(P.m) if i not in r1]
    c2 = [j for j in range(P.n) if j not in c1]
    w = shared_sigma_direct_sum(P.submatrix(r1, c1), P.submatrix(r2, c2), seed)
    M = np.zeros(P.shape)
    M[np.ix_(r1 + r2, c1 + c2)] = w.matrix
    return Witness(M, 1.0, 2, False, "shared-sigma", (f"{len(comps)} components",))


def witness_for(P: Pattern, seed: int = 0, tol: Tolerances = DEFAULT_TOL, max_iter: int = 50) -> Optional[Witness]:
    """Witness for a full-term-rank m x n pattern (m <= n, no zero column) that is not Fiedler."""
    m, n = P.shape
    B = bigraph_of(P)
    if len(connected_components(B)) > 1:
        return _disconnected_witness(P, seed)
    if m == n:
        w = _square_witness(P, seed, tol, max_iter)
        return w or coalescence_witness(P, seed, tol)
    dups = _duplicate_columns(P)
    if dups:
        drop = {d for d, _ in dups}
        keep = [j for j in range(n) if j not in drop]
        reduced = P.submatrix(range(m), keep)
        wr = witness_for(reduced, seed, tol, max_iter)
        if wr is None:
            return None
        A = wr.matrix
        order = list(keep)
        for d, k in dups:
            A = column_duplicate(A, order.index(k), tol)
            order.append(d)
        A = A[:, np.argsort(order)]
        return Witness(A, wr.target_sigma, 2, False, wr.route + "+column-augment", wr.notes)
    for route in (_alpha_route, _claw_route):
        w = route(P, seed, tol, max_iter)
        if w is not None:
            return w
    return coalescence_witness(P, seed, tol)


def _hessenberg_embedding(P: Pattern, t: int, budget: int = 20000):
    """Row and column orders (length t) with P[r_i, c_j] true whenever j <= i + 1."""
    m, n = P.shape
    cells = P.cells
    nodes = 0

    def extend(rows, cols):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            return None
        i = len(rows)
        if i == t:
            return rows, cols
        need_cols = cols
        new_choices = [None] if len(cols) >= t else [j for j in range(n) if j not in cols]
        for cj in new_choices:
            cc = need_cols + ([cj] if cj is not None else [])
            for r in range(m):
                if r in rows or not cells[r, cc].all():
                    continue
                got = extend(rows + [r], cc)
                if got:
                    return got
        return None

    for c0 in range(n):
        got = extend([], [c0])
        if got:
            return got
    return None


def _orthogonal_border_route(P: Pattern, seed: int, tol: Tolerances, max_iter: int) -> Optional[Witness]:
    m, n = P.shape
    for t in range(m, 1, -1):
        k = m - t
        if t - k < 2:
            break
        emb = _hessenberg_embedding(P, t)
        if emb is None:
            continue
        rows, cols = emb
        rows = rows + [i for i in range(m) if i not in rows]
        cols = cols + [j for j in range(n) if j not in cols]
        S = P.submatrix(rows, cols)
        try:
            w = orthogonal_border(hessenberg_orthogonal(t), k, n - t, S, seed, tol, max_iter)
        except HypothesisViolated:
            continue
        A = np.zeros(P.shape)
        A[np.ix_(rows, cols)] = w.matrix
        out = Witness(A, w.target_sigma, w.claimed_multiplicity, False, w.route, (f"H_{t} block, {k} border rows",))
        if out.verify(P, tol):
            return out
    return None


def classify(P: Pattern, tol: Tolerances = DEFAULT_TOL, seed: int = 0, max_iter: int = 50) -> Classification:
    notes: list[str] = []
    transposed = P.m > P.n
    Pw = P.T if transposed else P
    if transposed:
        notes.append("transposed to put the shorter side on rows")
    m, n = Pw.shape
    tr = term_rank(Pw)
    notes.append(f"term-rank {tr} of {m}")

    def back(A: np.ndarray) -> np.ndarray:
        return A.T.copy() if transposed else A

    if tr <= m - 2:
        A = random_realization(P, seed)
        w = Witness(A, 0.0, 2, False, "term-rank")
        notes.append("0 is a singular value of every realization at least twice")
        return Classification(Verdict.ZERO_MULTIPLE, P, witness=w, notes=notes, working=Pw)

    if tr == m - 1:
        dec = None
        try:
            dec = rank_m_minus_1_decomposition(Pw)
        except CapExceeded as exc:
            notes.append(str(exc))
        if dec is not None:
            notes.append(f"requires rank {m - 1}: block split r={dec.r}, s={dec.s}")
        else:
            notes.append(f"does not require rank {m - 1}")
        w = _orthogonal_border_route(Pw, seed, tol, max_iter)
        if w is not None:
            w = Witness(back(w.matrix), w.target_sigma, w.claimed_multiplicity, False, w.route, w.notes)
            notes.append(f"orthogonal bordering gives multiplicity >= {w.claimed_multiplicity} at {w.target_sigma:g}")
        notes.append("term-rank m-1 has no general decision rule")
        return Classification(Verdict.UNRESOLVED, P, witness=w, notes=notes, working=Pw, decomposition=dec)

    keep = [j for j in range(n) if Pw.cells[:, j].any()]
    if len(keep) < n:
        notes.append(f"removed {n - len(keep)} zero column(s)")
    Pc = Pw.submatrix(range(m), keep)
    comps = connected_components(bigraph_of(Pc))
    if len(comps) == 1:
        cert = recognize_fiedler(bigraph_of(Pc))
        if cert is not None:
            notes.append("bigraph is a Fiedler graph")
            return Classification(Verdict.REQUIRES_DISTINCT, P, certificate=cert, notes=notes, working=Pc)
        notes.append("bigraph is connected but not a Fiedler graph")
    else:
        notes.append(f"bigraph has {len(comps)} components")
    w = witness_for(Pc, seed, tol, max_iter)
    if w is None:
        notes.append("no witness construction converged")
        return Classification(Verdict.UNRESOLVED, P, notes=notes, working=Pc)
    A = np.zeros((m, n))
    A[:, keep] = w.matrix
    w = Witness(back(A), w.target_sigma, 2, w.ssvp_claimed and len(keep) == n and not transposed, w.route, w.notes)
    if not w.verify(P, tol):
        notes.append("witness failed verification")
        return Classification(Verdict.UNRESOLVED, P, notes=notes, working=Pc)
    notes.append(f"witness route: {w.route}")
    return Classification(Verdict.ALLOWS_MULTIPLE, P, witness=w, notes=notes, working=Pc)
