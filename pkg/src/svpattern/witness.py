"""Explicit matrices with a prescribed pattern and a multiple singular value.

Most constructions start from a small matrix that has the SSVP and a repeated
singular value, place it in a direct sum with a diagonal block of distinct
values, and then move to the full target pattern along the orbit
``Q1 @ A @ Q2`` (orthogonal Q1, Q2), which never changes the singular values.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DifferentSupportRows,
    DimensionMismatch,
    HypothesisViolated,
    NoWeakCycle,
    NotSingleSupport,
    NotSquare,
    NotStandardForm,
    NotSuperpattern,
    ZeroPattern,
)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, multiplicity, random_realization, singular_values
from .pattern import Pattern, direct_sum, is_superpattern, pattern_of
from .ssvp import skew_from_params, ssvp_check, ssvp_wrt, tangent_operator
from .structure import bigraph_of, digraph_of, is_connected
from .termrank import max_matching, term_rank

log = logging.getLogger(__name__)

__all__ = [
    "Witness",
    "WITNESS_ZERO_TOL",
    "deg4_witness",
    "inout_witness",
    "subdivided_claw_witness",
    "shared_sigma_direct_sum",
    "liberation_newton",
    "superpattern_lift",
    "embed_and_lift",
    "sumplus_witness",
    "weak_cycle_witness",
    "degree_witness",
    "coalescence_witness",
    "column_augment_reduce",
    "column_duplicate",
    "hessenberg_orthogonal",
    "hessenberg_pattern",
    "orthogonal_border",
]

WITNESS_ZERO_TOL = 1e-12
# entries on required cells must clear this after liberation
_MIN_ENTRY = 1e-8


@dataclass(frozen=True)
class Witness:
    """A matrix together with the multiple singular value it is claimed to have."""

    matrix: np.ndarray
    target_sigma: float
    claimed_multiplicity: int
    ssvp_claimed: bool
    route: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.claimed_multiplicity < 2:
            raise ValueError("a witness must claim multiplicity at least 2")

    @property
    def pattern(self) -> Pattern:
        return pattern_of(self.matrix, WITNESS_ZERO_TOL)

    def measured_multiplicity(self, tol: Tolerances = DEFAULT_TOL) -> int:
        return multiplicity(self.matrix, self.target_sigma, tol)

    def check(self, pattern: Optional[Pattern] = None, tol: Tolerances = DEFAULT_TOL) -> dict:
        mult = self.measured_multiplicity(tol)
        out = {
            "target_sigma": float(self.target_sigma),
            "claimed_multiplicity": int(self.claimed_multiplicity),
            "measured_multiplicity": int(mult),
            "multiplicity_ok": mult >= self.claimed_multiplicity,
            "pattern_ok": True if pattern is None else self.pattern == pattern,
            "ssvp_claimed": bool(self.ssvp_claimed),
            "ssvp_ok": True,
        }
        if self.ssvp_claimed:
            out["ssvp_ok"] = ssvp_check(self.matrix, tol).holds
        return out

    def verify(self, pattern: Optional[Pattern] = None, tol: Tolerances = DEFAULT_TOL) -> bool:
        c = self.check(pattern, tol)
        return c["multiplicity_ok"] and c["pattern_ok"] and c["ssvp_ok"]


# fixed witnesses ------------------------------------------------------------

DEG4 = Pattern.from_rows(["1111", "0100", "0010", "0001"])
INOUT = Pattern.from_rows(["1100", "0111", "0010", "0001"])
CLAW_R = Pattern.from_rows(["1001", "0101", "0011"])


def deg4_witness() -> Witness:
    return Witness(DEG4.cells.astype(float), 1.0, 2, True, route="deg4")


def inout_witness() -> Witness:
    r = np.sqrt(2.0)
    A = np.array(
        [
            [1.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 1.0],
            [0.0, 0.0, r, 0.0],
            [0.0, 0.0, 0.0, r],
        ]
    )
    return Witness(A, r, 2, True, route="inout")


def subdivided_claw_witness() -> Witness:
    return Witness(CLAW_R.cells.astype(float), 1.0, 2, True, route="subdivided-claw")


def _sigma1_normalized(A: np.ndarray) -> np.ndarray:
    s = singular_values(A)
    return A / s[0]


def shared_sigma_direct_sum(P: Pattern, Q: Pattern, seed: int = 0) -> Witness:
    """A in Z(P) and B in Z(Q) rescaled to share their largest singular value 1."""
    if P.count() == 0 or Q.count() == 0:
        raise ZeroPattern("both summands need a nonzero cell")
    A = _sigma1_normalized(random_realization(P, seed))
    B = _sigma1_normalized(random_realization(Q, seed + 1))
    M = np.zeros((P.m + Q.m, P.n + Q.n))
    M[: P.m, : P.n] = A
    M[P.m :, P.n :] = B
    return Witness(M, 1.0, 2, False, route="shared-sigma")


# liberation -----------------------------------------------------------------


def _cayley(K: np.ndarray) -> np.ndarray:
    eye = np.eye(K.shape[0])
    return np.linalg.solve(eye - 0.5 * K, eye + 0.5 * K)


def _in_tangent_space(A: np.ndarray, D: np.ndarray) -> bool:
    T = tangent_operator(A)
    d = D.ravel()
    if T.shape[1] == 0:
        return bool(np.max(np.abs(d), initial=0.0) == 0.0)
    x = np.linalg.lstsq(T, d, rcond=None)[0]
    return bool(np.max(np.abs(T @ x - d), initial=0.0) <= 1e-8 * max(1.0, np.max(np.abs(d))))


def _orbit_newton(A, K0, L0, t, off, max_iter, scale):
    """Newton on (K, L) -> off-S cells of Cay(K) A Cay(L), started from t*(K0, L0)."""
    m, n = A.shape
    Q1 = _cayley(t * K0)
    Q2 = _cayley(t * L0)
    B = Q1 @ A @ Q2
    target = 1e-14 * scale
    if off.size == 0:
        return B, 0, 0.0
    res = np.max(np.abs(B.ravel()[off]))
    for it in range(max_iter):
        if res <= target:
            return B, it, res
        J = tangent_operator(B)[off]
        x = np.linalg.lstsq(J, -B.ravel()[off], rcond=None)[0]
        step = 1.0
        for _ in range(6):
            dK, dL = skew_from_params(step * x, m, n)
            Q1n = _cayley(dK) @ Q1
            Q2n = Q2 @ _cayley(dL)
            Bn = Q1n @ A @ Q2n
            rn = np.max(np.abs(Bn.ravel()[off]))
            if rn < res:
                break
            step *= 0.5
        else:
            return None, it, res
        Q1, Q2, B, res = Q1n, Q2n, Bn, rn
    return (B, max_iter, res) if res <= target else (None, max_iter, res)


def liberation_newton(
    A,
    D,
    S: Pattern,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 50,
    diagnostics: Optional[dict] = None,
) -> Optional[np.ndarray]:
    """Move A in the tangent direction D to a matrix with pattern exactly S and the same singular values.

    The iterate is always ``Q1 @ A @ Q2`` with Cayley-orthogonal factors, so
    the singular values are preserved to rounding; Newton only has to clear
    the cells outside S. The first step is of size ``t`` along D, with
    ``t = 1e-2`` halved whenever Newton fails. Returns None when no attempt
    converges; ``diagnostics`` (if given) records what happened.
    """
    A = as_matrix(A)
    D = as_matrix(D)
    diag = diagnostics if diagnostics is not None else {}
    if D.shape != A.shape or S.shape != A.shape:
        raise DimensionMismatch(f"A {A.shape}, D {D.shape}, S {S.shape}")
    P = pattern_of(A, tol.zero_tol)
    expected = Pattern(P.cells | (np.abs(D) > tol.zero_tol))
    if expected != S:
        raise HypothesisViolated("S must be the pattern of A in the direction of D")
    if not _in_tangent_space(A, D):
        raise HypothesisViolated("D is not in the tangent space of A")
    if S == P:
        diag.update(iterations=0, t=0.0, residual=0.0)
        return A.copy()
    if not ssvp_wrt(A, S, tol).holds:
        raise HypothesisViolated("A does not have the SSVP with respect to S")

    m, n = A.shape
    scale = max(1.0, float(np.max(np.abs(A))))
    Dn = D * (np.max(np.abs(A)) / np.max(np.abs(D)))
    T = tangent_operator(A)
    x0 = np.linalg.lstsq(T, Dn.ravel(), rcond=None)[0]
    K0, L0 = skew_from_params(x0, m, n)
    off = np.flatnonzero(~S.cells.ravel())
    sigma_a = singular_values(A)
    t = 1e-2
    attempts = []
    for _ in range(10):
        B, iters, res = _orbit_newton(A, K0, L0, t, off, max_iter, scale)
        attempts.append((t, iters, float(res)))
        if B is not None:
            B = B.copy()
            B[~S.cells] = 0.0
            small = np.min(np.abs(B[S.cells]))
            drift = np.max(np.abs(singular_values(B) - sigma_a))
            if small > _MIN_ENTRY and drift <= tol.sv_cluster_tol * max(1.0, sigma_a[0]):
                diag.update(iterations=iters, t=t, residual=float(res), attempts=attempts)
                return B
            attempts[-1] = (t, iters, float(res), "rejected: small entry or drift")
        t *= 0.5
    diag.update(attempts=attempts)
    log.debug("liberation did not converge: %s", attempts)
    return None


def superpattern_lift(
    A,
    S: Pattern,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 50,
    retries: int = 20,
) -> Optional[np.ndarray]:
    """A matrix with pattern exactly S and the singular values of A.

    Needs A to have the SSVP with respect to S. A tangent direction vanishing
    off S is drawn at random from the admissible subspace until it is
    nonzero on every new cell, then handed to :func:`liberation_newton`.
    """
    A = as_matrix(A)
    P = pattern_of(A, tol.zero_tol)
    if not is_superpattern(S, P):
        raise NotSuperpattern("S is not a superpattern of the pattern of A")
    if S == P:
        return A.copy()
    if not ssvp_wrt(A, S, tol).holds:
        raise HypothesisViolated("A does not have the SSVP with respect to S")
    m, n = A.shape
    T = tangent_operator(A)
    off = np.flatnonzero(~S.cells.ravel())
    new = np.flatnonzero((S.cells & ~P.cells).ravel())
    if off.size:
        _, s, Vt = np.linalg.svd(T[off], full_matrices=True)
        k = int(np.sum(s > tol.rank_tol * s[0])) if s.size and s[0] > 0 else 0
        N = Vt[k:].T
    else:
        N = np.eye(T.shape[1])
    span = T @ N
    if N.shape[1] == 0 or np.min(np.max(np.abs(span[new]), axis=1)) <= 1e-10:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        d = span @ rng.standard_normal(N.shape[1])
        vals = np.abs(d[new])
        if np.min(vals) < 0.05 * np.max(vals):
            continue
        D = d.reshape(m, n)
        D[~S.cells] = 0.0
        # entries of D that land on cells of A must not count towards the new pattern
        B = liberation_newton(A, D, Pattern(P.cells | (np.abs(D) > tol.zero_tol)), tol, max_iter)
        if B is not None and pattern_of(B, WITNESS_ZERO_TOL) == S:
            return B
    return None


# embedding ------------------------------------------------------------------


def _distinct_values(count: int, avoid: np.ndarray, rng: np.random.Generator) -> list[float]:
    vals: list[float] = []
    taken = list(np.asarray(avoid, dtype=float))
    while len(vals) < count:
        v = float(rng.uniform(0.3, 3.0))
        if all(abs(v - w) > 0.05 for w in taken):
            vals.append(v)
            taken.append(v)
    return vals


def _matching_within(P: Pattern, rows: Sequence[int], cols: Sequence[int]) -> Optional[list[tuple[int, int]]]:
    rows, cols = list(rows), list(cols)
    if not rows:
        return []
    if not cols:
        return None
    M = max_matching(P.submatrix(rows, cols))
    if len(M) < len(rows):
        return None
    return [(rows[i], cols[j]) for i, j in M.edges]


def embed_and_lift(
    P: Pattern,
    block,
    rows: Sequence[int],
    cols: Sequence[int],
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 50,
) -> Optional[np.ndarray]:
    """Place ``block`` at (rows, cols), match every other row to a free column with a
    distinct diagonal value, and lift the result to pattern P.

    The block must have the SSVP and no more rows than columns; the result then
    keeps the block's singular values. Returns None when the remaining rows
    cannot be matched or the lift fails.
    """
    block = as_matrix(block)
    rows, cols = list(rows), list(cols)
    if block.shape != (len(rows), len(cols)):
        raise DimensionMismatch("block shape does not match the index lists")
    rest_r = [i for i in range(P.m) if i not in rows]
    rest_c = [j for j in range(P.n) if j not in cols]
    match = _matching_within(P, rest_r, rest_c)
    if match is None:
        return None
    rng = np.random.default_rng(seed)
    M0 = np.zeros(P.shape)
    M0[np.ix_(rows, cols)] = block
    for (i, j), v in zip(match, _distinct_values(len(match), singular_values(block), rng)):
        M0[i, j] = v
    if not is_superpattern(P, pattern_of(M0, tol.zero_tol)):
        return None
    if not ssvp_wrt(M0, P, tol).holds:
        return None
    return superpattern_lift(M0, P, seed, tol, max_iter)


# sumplus and weak cycles ----------------------------------------------------


def _nonneg_unit_top(P: Pattern, rng: np.random.Generator) -> np.ndarray:
    A = random_realization(P, int(rng.integers(2**31)), signed=False)
    return _sigma1_normalized(A)


def sumplus_witness(
    P: Pattern,
    Q: Pattern,
    E: Pattern,
    F: Pattern,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 50,
    max_resample: int = 50,
) -> Optional[Witness]:
    """Witness for the block pattern [[P, E], [F, Q]].

    Nonnegative A in Z(P) and B in Z(Q) are scaled to top singular value 1 and
    resampled until no other singular values collide and A + B has the SSVP
    relative to the block pattern. The direct sum is then liberated into the
    off-diagonal cells given by E and F.
    """
    m, n = P.m, Q.m
    if P.m != P.n or Q.m != Q.n:
        raise HypothesisViolated("P and Q must be square")
    if E.shape != (m, n) or F.shape != (n, m):
        raise HypothesisViolated(f"E must be {m}x{n} and F {n}x{m}")
    for name, X in (("P", P), ("Q", Q)):
        if term_rank(X) != X.m:
            raise HypothesisViolated(f"{name} does not have full term-rank")
        if not is_connected(bigraph_of(X)):
            raise HypothesisViolated(f"the bigraph of {name} is not connected")
    if E.count() + F.count() < 2:
        raise HypothesisViolated("E and F need at least two nonzero cells between them")
    S = Pattern(np.block([[P.cells, E.cells], [F.cells, Q.cells]]))
    rng = np.random.default_rng(seed)
    gap = 10 * tol.sv_cluster_tol
    for _ in range(max_resample):
        A = _nonneg_unit_top(P, rng)
        B = _nonneg_unit_top(Q, rng)
        sa, sb = singular_values(A), singular_values(B)
        if (sa.size > 1 and sa[0] - sa[1] <= gap) or (sb.size > 1 and sb[0] - sb[1] <= gap):
            continue
        rest_a, rest_b = sa[1:], sb[1:]
        cross = np.concatenate([rest_a, rest_b])
        if cross.size and (np.min(np.abs(cross - 1.0)) <= gap):
            continue
        if rest_a.size and rest_b.size and np.min(np.abs(rest_a[:, None] - rest_b[None, :])) <= gap:
            continue
        M0 = np.zeros((m + n, m + n))
        M0[:m, :m] = A
        M0[m:, m:] = B
        if not ssvp_wrt(M0, S, tol).holds:
            continue
        W = superpattern_lift(M0, S, int(rng.integers(2**31)), tol, max_iter)
        if W is None:
            continue
        w = Witness(W, 1.0, 2, True, route="sumplus")
        if w.verify(S, tol):
            return w
    return None


def _underlying_adjacency(n: int, arcs) -> list[dict[int, int]]:
    adj: list[dict[int, int]] = [dict() for _ in range(n)]
    for i, j in arcs:
        adj[i][j] = adj[i].get(j, 0) + 1
        adj[j][i] = adj[j].get(i, 0) + 1
    return adj


def _shortest_weak_cycle(W: Pattern) -> Optional[list[int]]:
    """Vertices of a shortest weak cycle in cycle order (a 2-cycle if one exists)."""
    D = digraph_of(W)
    adj = _underlying_adjacency(D.n, D.arcs)
    for i in range(D.n):
        for j in sorted(adj[i]):
            if adj[i][j] > 1:
                return [i, j]
    best: Optional[list[int]] = None
    for src in range(D.n):
        parent = {src: -1}
        depth = {src: 0}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y == parent[x]:
                    continue
                if y in parent:
                    # closes a cycle through the BFS tree
                    px, py = [x], [y]
                    while px[-1] != src:
                        px.append(parent[px[-1]])
                    while py[-1] != src:
                        py.append(parent[py[-1]])
                    common = set(px) & set(py)
                    if len(common) != 1:
                        continue
                    cyc = px[::-1] + py[:-1]
                    if best is None or len(cyc) < len(best):
                        best = cyc
                    continue
                parent[y] = x
                depth[y] = depth[x] + 1
                queue.append(y)
    return best


def _complement_diag_lift(W: Pattern, block: np.ndarray, alpha: list[int], seed, tol, max_iter):
    return embed_and_lift(W, block, alpha, alpha, seed, tol, max_iter)


@lru_cache(maxsize=4096)
def _cycle_block(cells_key: bytes, k: int, seed: int, tol: Tolerances, max_iter: int):
    Wc = Pattern(np.frombuffer(cells_key, dtype=bool).reshape(k, k))
    Q = Wc.submatrix(range(1, k), range(1, k))
    E = Wc.submatrix([0], range(1, k))
    F = Wc.submatrix(range(1, k), [0])
    return sumplus_witness(Pattern.ones(1, 1), Q, E, F, seed, tol, max_iter)


def _require_standard_form(W: Pattern):
    if W.m != W.n:
        raise NotSquare(f"pattern is {W.m}x{W.n}")
    if not np.all(np.diag(W.cells)):
        raise NotStandardForm("diagonal has a zero cell")


def weak_cycle_witness(
    W: Pattern, seed: int = 0, tol: Tolerances = DEFAULT_TOL, max_iter: int = 50
) -> Optional[Witness]:
    """Witness for a standard-form pattern whose digraph has a weak cycle.

    The cycle block is built from [1] + (rest of cycle) with the two arcs at
    the first cycle vertex as the off-diagonal blocks, then embedded next to
    a diagonal and lifted to W.
    """
    _require_standard_form(W)
    cyc = _shortest_weak_cycle(W)
    if cyc is None:
        raise NoWeakCycle("digraph has no weak cycle")
    k = len(cyc)
    sub = W.cells[np.ix_(cyc, cyc)]
    # keep only the diagonal and the cycle arcs
    keep = np.eye(k, dtype=bool)
    for a in range(k):
        b = (a + 1) % k
        if k == 2:
            keep[0, 1] = keep[1, 0] = True
            break
        keep[a, b] |= sub[a, b]
        keep[b, a] |= sub[b, a]
    cells = np.ascontiguousarray(keep)
    wc = _cycle_block(cells.tobytes(), k, seed, tol, max_iter)
    if wc is None:
        return None
    B = _complement_diag_lift(W, wc.matrix, cyc, seed, tol, max_iter)
    if B is None:
        return None
    w = Witness(B, 1.0, 2, True, route="weak-cycle", notes=(f"cycle on vertices {[c + 1 for c in cyc]}",))
    return w if w.verify(W, tol) else None


def _degree_choice(W: Pattern) -> Optional[tuple[str, list[int]]]:
    """A vertex of total degree >= 3 and the local order matching deg4, inout or a transpose."""
    D = digraph_of(W)
    outs = [sorted(j for i, j in D.arcs if i == v) for v in range(D.n)]
    ins = [sorted(i for i, j in D.arcs if j == v) for v in range(D.n)]
    for v in range(D.n):
        o = [x for x in outs[v] if x not in ins[v]]
        i_ = [x for x in ins[v] if x not in outs[v]]
        if len(o) >= 3:
            return "deg4", [v] + o[:3]
        if len(i_) >= 3:
            return "deg4T", [v] + i_[:3]
        if len(o) >= 2 and len(i_) >= 1:
            return "inout", [i_[0], v] + o[:2]
        if len(i_) >= 2 and len(o) >= 1:
            return "inoutT", [o[0], v] + i_[:2]
    return None


def degree_witness(
    W: Pattern, seed: int = 0, tol: Tolerances = DEFAULT_TOL, max_iter: int = 50
) -> Optional[Witness]:
    """Witness for a standard-form pattern with a vertex of in+out degree at least 3.

    Only vertices with three distinct neighbours (no 2-cycle among them) are
    used; others are handled by :func:`weak_cycle_witness`.
    """
    _require_standard_form(W)
    choice = _degree_choice(W)
    if choice is None:
        return None
    kind, alpha = choice
    base = {"deg4": deg4_witness, "deg4T": deg4_witness, "inout": inout_witness, "inoutT": inout_witness}[kind]()
    block = base.matrix.T if kind.endswith("T") else base.matrix
    B = _complement_diag_lift(W, block, alpha, seed, tol, max_iter)
    if B is None:
        return None
    w = Witness(
        B,
        base.target_sigma,
        2,
        True,
        route=kind,
        notes=(f"{kind} block on vertices {[a + 1 for a in alpha]}",),
    )
    return w if w.verify(W, tol) else None


def coalescence_witness(
    P: Pattern,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 60,
    restarts: int = 12,
) -> Optional[Witness]:
    """Generic search for a matrix in Z(P) with two equal singular values.

    Two adjacent singular values coincide exactly when the corresponding 2x2
    block ``U2^T A V2`` is a multiple of a rotation, which is two equations
    in the free entries. Gauss-Newton on those equations from random starts;
    no SSVP is claimed.
    """
    m, n = P.shape
    if min(m, n) < 2:
        return None
    idx = np.flatnonzero(P.cells.ravel())
    rng = np.random.default_rng(seed)
    for r in range(restarts):
        A = random_realization(P, int(rng.integers(2**31)))
        k = min(m, n)
        s = np.linalg.svd(A, compute_uv=False)
        gaps = s[:-1] - s[1:]
        i = int(np.argsort(gaps)[r % (k - 1)]) if r else int(np.argmin(gaps))
        for _ in range(max_iter):
            U, s, Vt = np.linalg.svd(A)
            V = Vt.T
            res = np.array([s[i] - s[i + 1], 0.0])
            if res[0] <= 1e-14 * s[0]:
                break
            u1, u2, v1, v2 = U[:, i], U[:, i + 1], V[:, i], V[:, i + 1]
            g1 = (np.outer(u1, v1) - np.outer(u2, v2)).ravel()[idx]
            g2 = (np.outer(u1, v2) + np.outer(u2, v1)).ravel()[idx]
            J = np.vstack([g1, g2])
            step = np.linalg.lstsq(J, -res, rcond=None)[0]
            flat = A.ravel().copy()
            flat[idx] += step
            A = flat.reshape(m, n)
        else:
            continue
        mags = np.abs(A.ravel()[idx])
        if np.min(mags) < 1e-3 * np.max(mags):
            continue
        sig = float(0.5 * (s[i] + s[i + 1]))
        w = Witness(A, sig, 2, False, route="coalescence")
        if w.verify(P, tol):
            return w
    return None


# column augmentation --------------------------------------------------------


def _single_support_row(B: np.ndarray, col: int, tol: float) -> int:
    nz = np.flatnonzero(np.abs(B[:, col]) > tol)
    if nz.size != 1:
        raise NotSingleSupport(f"column {col} has support {nz.size}, expected 1")
    return int(nz[0])


def column_augment_reduce(B, col_a: int, col_b: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Merge two single-support columns on the same row into one; singular values are unchanged."""
    B = as_matrix(B)
    if col_a == col_b:
        raise ValueError("columns must differ")
    ia = _single_support_row(B, col_a, tol.zero_tol)
    ib = _single_support_row(B, col_b, tol.zero_tol)
    if ia != ib:
        raise DifferentSupportRows(f"columns are supported on rows {ia} and {ib}")
    c, d = B[ia, col_a], B[ib, col_b]
    r = np.hypot(c, d)
    G = np.array([[c, d], [d, -c]]) / r
    out = B.copy()
    out[:, [col_a, col_b]] = B[:, [col_a, col_b]] @ G
    out[:, col_b] = 0.0
    out[ia, col_a] = r
    return np.delete(out, col_b, axis=1)


def column_duplicate(A, col: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Append a copy of a single-support column, rotated so singular values are unchanged."""
    A = as_matrix(A)
    _single_support_row(A, col, tol.zero_tol)
    out = np.hstack([A, np.zeros((A.shape[0], 1))])
    G = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2.0)
    last = out.shape[1] - 1
    out[:, [col, last]] = out[:, [col, last]] @ G
    return out


# Hessenberg and bordering ---------------------------------------------------


def hessenberg_pattern(n: int) -> Pattern:
    """H_n: ones on and below the first superdiagonal."""
    return Pattern(np.tri(n, n, 1, dtype=bool))


def hessenberg_orthogonal(n: int) -> np.ndarray:
    """Orthogonal matrix with pattern exactly H_n, built from adjacent plane rotations."""
    if n < 1:
        raise ValueError("n must be positive")
    Q = np.eye(n)
    for k in range(n - 1):
        th = 0.6 + 0.1 * k
        G = np.eye(n)
        c, s = np.cos(th), np.sin(th)
        G[k, k], G[k, k + 1], G[k + 1, k], G[k + 1, k + 1] = c, -s, s, c
        Q = Q @ G
    return Q.T.copy()


def orthogonal_border(
    Q,
    k: int,
    p: int,
    S: Pattern,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 50,
) -> Witness:
    """Pad Q with p zero columns, lift to the top n rows of S and border with k sampled rows.

    Q must have mutually orthogonal rows of common length l and the SSVP;
    interlacing then leaves l with multiplicity at least n - k.
    """
    Q = as_matrix(Q)
    n = Q.shape[0]
    if Q.shape[1] != n:
        raise HypothesisViolated("Q must be square")
    if not 0 <= k < n or p < k:
        raise HypothesisViolated("need 0 <= k < n and p >= k")
    if n - k < 2:
        raise HypothesisViolated("n - k must be at least 2 for a multiple singular value")
    if S.shape != (n + k, n + p):
        raise HypothesisViolated(f"S must be {n + k}x{n + p}, got {S.m}x{S.n}")
    G = Q @ Q.T
    ell2 = float(np.mean(np.diag(G)))
    if np.max(np.abs(G - ell2 * np.eye(n))) > 1e-10 * max(1.0, ell2):
        raise HypothesisViolated("rows of Q are not orthogonal with a common length")
    if not ssvp_check(Q, tol).holds:
        raise HypothesisViolated("Q does not have the SSVP")
    base = np.zeros((n + k, n + p), dtype=bool)
    base[:n, :n] = pattern_of(Q, tol.zero_tol).cells
    if not is_superpattern(S, Pattern(base)):
        raise HypothesisViolated("S is not a superpattern of the bordered pattern of Q")
    top = np.hstack([Q, np.zeros((n, p))])
    S_top = S.submatrix(range(n), range(n + p))
    B = superpattern_lift(top, S_top, seed, tol, max_iter)
    if B is None:
        raise HypothesisViolated("could not lift Q to the top block of S")
    if k:
        bottom = random_realization(S.submatrix(range(n, n + k), range(n + p)), seed)
        M = np.vstack([B, bottom])
    else:
        M = B
    ell = float(np.sqrt(ell2))
    return Witness(M, ell, n - k, False, route="orthogonal-border")
