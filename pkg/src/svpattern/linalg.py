"""Small dense real linear algebra built on Jacobi rotations.

The SVD is one-sided (Hestenes) Jacobi and the symmetric eigensolver is
cyclic two-sided Jacobi. Both sweep in round-robin order so that each round
applies a set of disjoint plane rotations at once. They target desk-scale
matrices (a few dozen rows) where accuracy matters more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import MatrixParseError, NonFiniteInput, NotSymmetric
from .pattern import Pattern

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SvdResult",
    "as_matrix",
    "svd",
    "singular_values",
    "multiplicity",
    "min_singular_gap",
    "rank",
    "nullspace_basis",
    "symmetric_eig",
    "random_realization",
    "format_matrix",
    "parse_matrix",
]

_EPS = np.finfo(float).eps
_MAX_SWEEPS = 80


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances.

    ``sv_cluster_tol`` is compared with differences of singular values divided
    by the largest singular value; ``rank_tol`` is relative to the largest
    singular value; ``zero_tol`` is the absolute threshold below which an
    entry counts as zero when reading off a pattern.
    """

    sv_cluster_tol: float = 1e-8
    rank_tol: float = 1e-10
    orth_tol: float = 1e-12
    zero_tol: float = 1e-12

    def __post_init__(self):
        for name in ("sv_cluster_tol", "rank_tol", "orth_tol", "zero_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SvdResult:
    """``A = U[:, :k] @ diag(sigma) @ V[:, :k].T`` with ``k = min(m, n)``."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray


def as_matrix(A) -> np.ndarray:
    arr = np.array(A, dtype=float, copy=True)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("matrix has NaN or infinite entries")
    return arr


@lru_cache(maxsize=None)
def _rounds(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Round-robin schedule: n-1 (or n) rounds of disjoint index pairs covering all pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    k = len(players)
    out = []
    for _ in range(k - 1):
        ps, qs = [], []
        for i in range(k // 2):
            a, b = players[i], players[k - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        if ps:
            out.append((np.array(ps), np.array(qs)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(out)


def _complete_basis(Q: np.ndarray, n: int) -> np.ndarray:
    """Extend orthonormal columns ``Q`` (n x r) to an n x n orthogonal matrix."""
    cols = [Q[:, j] for j in range(Q.shape[1])]
    for e in np.eye(n):
        if len(cols) == n:
            break
        v = e.copy()
        for _ in range(2):  # twice is enough
            for c in cols:
                v -= (c @ v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    return np.column_stack(cols) if cols else np.zeros((n, 0))


def _hestenes_rows(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate rows of the wide matrix A until mutually orthogonal. Returns (U, W) with W = U.T A."""
    m, n = A.shape
    if m < 2:
        return np.eye(m), A.copy()
    # rows of Z are [W | U^T]; one rotation updates both halves
    Z = np.hstack([A, np.eye(m)])
    tiny = (1e-150 + 1e-17 * np.linalg.norm(A)) ** 2
    schedule = _rounds(m)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p, q in schedule:
            W = Z[:, :n]
            G = W @ W.T
            alpha, beta, gamma = G[p, p], G[q, q], G[p, q]
            act = (np.abs(gamma) > 2 * _EPS * np.sqrt(alpha * beta)) & (np.abs(gamma) > tiny)
            if not act.any():
                continue
            rotated = True
            if not act.all():
                p, q = p[act], q[act]
                alpha, beta, gamma = alpha[act], beta[act], gamma[act]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = (c * t)[:, None]
            c = c[:, None]
            Zp, Zq = Z[p], Z[q]
            Z[p] = c * Zp - s * Zq
            Z[q] = s * Zp + c * Zq
        if not rotated:
            break
    return Z[:, n:].T.copy(), Z[:, :n].copy()


def svd(A) -> SvdResult:
    """Full SVD by one-sided Jacobi. Singular values are returned in descending order."""
    A = as_matrix(A)
    m, n = A.shape
    if m > n:
        r = svd(A.T)
        return SvdResult(U=r.V, sigma=r.sigma, V=r.U)
    U, W = _hestenes_rows(A)
    norms = np.linalg.norm(W, axis=1)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    U = U[:, order]
    W = W[order]
    cutoff = max(sigma[0] if m else 0.0, 1e-300) * 1e-13
    keep = sigma > cutoff
    Vtop = (W[keep] / sigma[keep][:, None]).T
    # re-orthonormalise the numerically nonzero directions before completing
    if Vtop.shape[1]:
        Vtop = _gram_schmidt(Vtop)
    V = _complete_basis(Vtop, n)
    return SvdResult(U=U, sigma=sigma, V=V)


def _gram_schmidt(Q: np.ndarray) -> np.ndarray:
    cols = []
    for j in range(Q.shape[1]):
        v = Q[:, j].copy()
        for _ in range(2):
            for c in cols:
                v -= (c @ v) * c
        cols.append(v / np.linalg.norm(v))
    return np.column_stack(cols)


def singular_values(A) -> np.ndarray:
    return svd(A).sigma


def _scale(sigma: np.ndarray) -> float:
    return float(sigma[0]) if sigma.size and sigma[0] > 0 else 1.0


def multiplicity(A, sigma: float, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values of A within ``sv_cluster_tol`` (relative to sigma_1) of ``sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    s = singular_values(A)
    return int(np.sum(np.abs(s - sigma) / _scale(s) <= tol.sv_cluster_tol))


def min_singular_gap(A) -> float:
    s = singular_values(A)
    if s.size < 2:
        return float("inf")
    return float(np.min(s[:-1] - s[1:]))


def _rank_of(s: np.ndarray, tol: Tolerances) -> int:
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_tol * s[0]))


def rank(A, tol: Tolerances = DEFAULT_TOL) -> int:
    return _rank_of(singular_values(A), tol)


def nullspace_basis(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right nullspace, as columns of an n x k array."""
    A = as_matrix(A)
    r = svd(A)
    k = _rank_of(r.sigma, tol) if A.size else 0
    return r.V[:, k:].copy()


def symmetric_eig(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthogonal eigenvectors of a symmetric matrix."""
    S = as_matrix(S)
    n = S.shape[0]
    if S.shape[1] != n:
        raise NotSymmetric(f"matrix is {S.shape[0]}x{S.shape[1]}")
    scale = max(1.0, float(np.max(np.abs(S)))) if S.size else 1.0
    if np.max(np.abs(S - S.T), initial=0.0) > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-12")
    S = 0.5 * (S + S.T)
    Q = np.eye(n)
    thresh = 1e-17 * max(np.linalg.norm(S), 1e-300)
    schedule = _rounds(n) if n > 1 else ()
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p, q in schedule:
            spq = S[p, q]
            act = np.abs(spq) > thresh
            if not act.any():
                continue
            rotated = True
            p, q, spq = p[act], q[act], spq[act]
            tau = (S[q, q] - S[p, p]) / (2.0 * spq)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            J = np.eye(n)
            J[p, p] = c
            J[q, q] = c
            J[p, q] = s
            J[q, p] = -s
            S = J.T @ S @ J
            S[p, q] = 0.0
            S[q, p] = 0.0
            Q = Q @ J
        if not rotated:
            break
    lam = np.diag(S).copy()
    order = np.argsort(-lam, kind="stable")
    return lam[order], Q[:, order]


def random_realization(P: Pattern, seed: int = 0, signed: bool = True) -> np.ndarray:
    """Random matrix with pattern exactly P; magnitudes uniform on [0.5, 2]."""
    rng = np.random.default_rng(seed)
    mags = rng.uniform(0.5, 2.0, size=P.shape)
    signs = rng.choice([-1.0, 1.0], size=P.shape)
    A = mags * signs if signed else mags
    return np.where(P.cells, A, 0.0)


def format_matrix(A) -> str:
    A = as_matrix(A)
    lines = [f"{A.shape[0]} {A.shape[1]}"]
    for row in A:
        lines.append(" ".join(f"{x:.17g}" for x in row))
    return "\n".join(lines)


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise MatrixParseError("empty matrix input")
    try:
        m, n = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise MatrixParseError(f"bad header line {lines[0]!r}: expected 'm n'") from exc
    rows = lines[1:]
    if len(rows) != m:
        raise MatrixParseError(f"header says {m} rows, found {len(rows)}")
    data = []
    for i, ln in enumerate(rows):
        try:
            vals = [float(t) for t in ln.split()]
        except ValueError as exc:
            raise MatrixParseError(f"row {i}: {exc}") from exc
        if len(vals) != n:
            raise MatrixParseError(f"row {i} has {len(vals)} entries, expected {n}")
        data.append(vals)
    return as_matrix(np.array(data).reshape(m, n))
