"""The Strong Singular Value Property as a finite linear system.

For an m x n matrix A the unknown X ranges over a coordinate subspace of
R^{m x n}. Symmetry of A^T X gives n(n-1)/2 equations and symmetry of X A^T
gives m(m-1)/2 more; A has the property when the only solution supported
off the pattern of A is X = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NotSuperpattern
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    singular_values,
    symmetric_eig,
)
from .pattern import Pattern, is_superpattern, pattern_of

__all__ = [
    "SsvpReport",
    "SubspaceBasis",
    "symmetry_operator",
    "tangent_operator",
    "ssvp_check",
    "ssvp_wrt",
    "normal_space_basis",
    "tangent_space_basis",
    "sylvester_symmetric_basis",
    "direct_sum_ssvp_predicate",
]


@dataclass(frozen=True)
class SsvpReport:
    """Outcome of an SSVP test.

    ``margin`` holds the two singular values of the constraint matrix that
    bracket the rank decision (the smallest one counted as nonzero and the
    largest one counted as zero), so callers can judge how clear-cut the
    verdict was.
    """

    holds: bool
    nullity: int
    witness: Optional[np.ndarray] = None
    unknowns: int = 0
    margin: tuple[float, float] = (float("nan"), float("nan"))

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "nullity": self.nullity,
            "unknowns": self.unknowns,
            "margin": list(self.margin),
            "witness": None if self.witness is None else self.witness.tolist(),
        }


@dataclass(frozen=True)
class SubspaceBasis:
    ambient_dims: tuple[int, int]
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def gram(self) -> np.ndarray:
        flat = np.array([b.ravel() for b in self.basis]).reshape(self.dim, -1)
        return flat @ flat.T

    def as_columns(self) -> np.ndarray:
        """Basis flattened row-major into the columns of an (m*n) x dim array."""
        m, n = self.ambient_dims
        if not self.basis:
            return np.zeros((m * n, 0))
        return np.column_stack([b.ravel() for b in self.basis])


def symmetry_operator(A) -> np.ndarray:
    """Matrix of X -> (strict upper parts of A^T X - X^T A and X A^T - A X^T).

    Columns index X row-major, so column ``i*n + j`` is the unknown X[i, j].
    """
    A = as_matrix(A)
    m, n = A.shape
    rows = []
    # (A^T X)_{pq} - (A^T X)_{qp} = sum_i A[i,p] X[i,q] - A[i,q] X[i,p]
    for p in range(n):
        for q in range(p + 1, n):
            r = np.zeros((m, n))
            r[:, q] += A[:, p]
            r[:, p] -= A[:, q]
            rows.append(r.ravel())
    # (X A^T)_{pq} - (X A^T)_{qp} = sum_j X[p,j] A[q,j] - X[q,j] A[p,j]
    for p in range(m):
        for q in range(p + 1, m):
            r = np.zeros((m, n))
            r[p, :] += A[q, :]
            r[q, :] -= A[p, :]
            rows.append(r.ravel())
    if not rows:
        return np.zeros((0, m * n))
    return np.array(rows)


def _right_singular(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Singular values (padded with zeros to the column count) and all right singular vectors of C.

    The constraint systems here have up to a few hundred rows, so they go
    through LAPACK rather than the Jacobi routine used for user matrices.
    """
    _, s, Vt = np.linalg.svd(C, full_matrices=True)
    return s, Vt.T


def _solve_restricted(A: np.ndarray, free: np.ndarray, tol: Tolerances) -> SsvpReport:
    m, n = A.shape
    idx = np.flatnonzero(free.ravel())
    u = idx.size
    if u == 0:
        return SsvpReport(holds=True, nullity=0, unknowns=0)
    C = symmetry_operator(A)[:, idx]
    if C.shape[0] == 0:
        s = np.zeros(0)
        nullity = u
        V = np.eye(u)
    else:
        s, V = _right_singular(C)
        k = 0 if s[0] == 0 else int(np.sum(s > tol.rank_tol * s[0]))
        nullity = u - k
    padded = np.concatenate([s, np.zeros(max(0, u - s.size))])
    rank_ = u - nullity
    lo_nonzero = float(padded[rank_ - 1]) if rank_ > 0 else float("inf")
    hi_zero = float(padded[rank_]) if rank_ < u else 0.0
    witness = None
    if nullity:
        x = V[:, -1]
        X = np.zeros(m * n)
        X[idx] = x
        X = X.reshape(m, n)
        X /= np.max(np.abs(X))
        X[np.abs(X) < 1e-15] = 0.0
        witness = X
    return SsvpReport(
        holds=nullity == 0,
        nullity=int(nullity),
        witness=witness,
        unknowns=int(u),
        margin=(lo_nonzero, hi_zero),
    )


def ssvp_check(A, tol: Tolerances = DEFAULT_TOL) -> SsvpReport:
    A = as_matrix(A)
    P = pattern_of(A, tol.zero_tol)
    return _solve_restricted(A, ~P.cells, tol)


def ssvp_wrt(A, S: Pattern, tol: Tolerances = DEFAULT_TOL) -> SsvpReport:
    """SSVP of A with respect to the superpattern S: unknowns live on the zero cells of S."""
    A = as_matrix(A)
    if S.shape != A.shape:
        raise DimensionMismatch(f"pattern {S.shape} vs matrix {A.shape}")
    if not is_superpattern(S, pattern_of(A, tol.zero_tol)):
        raise NotSuperpattern("S is not a superpattern of the pattern of A")
    return _solve_restricted(A, ~S.cells, tol)


def _orthonormal_columns(M: np.ndarray, tol: Tolerances) -> np.ndarray:
    if M.shape[1] == 0:
        return M
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if not s.size or s[0] == 0:
        return np.zeros((M.shape[0], 0))
    k = int(np.sum(s > tol.rank_tol * s[0]))
    return U[:, :k]


def _to_basis(cols: np.ndarray, m: int, n: int) -> SubspaceBasis:
    return SubspaceBasis((m, n), [cols[:, k].reshape(m, n).copy() for k in range(cols.shape[1])])


def normal_space_basis(A, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of {X : A^T X and X A^T symmetric}."""
    A = as_matrix(A)
    m, n = A.shape
    C = symmetry_operator(A)
    if C.shape[0] == 0:
        return _to_basis(np.eye(m * n), m, n)
    s, V = _right_singular(C)
    k = 0 if s[0] == 0 else int(np.sum(s > tol.rank_tol * s[0]))
    return _to_basis(V[:, k:], m, n)


def tangent_operator(A) -> np.ndarray:
    """Matrix of (K, L) -> K A + A L over the elementary skew generators.

    The first m(m-1)/2 columns are K = E_pq - E_qp (p < q, m x m), the rest
    L = E_pq - E_qp (n x n); rows index the result row-major.
    """
    A = as_matrix(A)
    m, n = A.shape
    cols = []
    for p in range(m):
        for q in range(p + 1, m):
            D = np.zeros((m, n))
            D[p, :] += A[q, :]
            D[q, :] -= A[p, :]
            cols.append(D.ravel())
    for p in range(n):
        for q in range(p + 1, n):
            D = np.zeros((m, n))
            D[:, q] += A[:, p]
            D[:, p] -= A[:, q]
            cols.append(D.ravel())
    if not cols:
        return np.zeros((m * n, 0))
    return np.column_stack(cols)


def skew_from_params(x: np.ndarray, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of the parametrisation used by :func:`tangent_operator`."""
    K = np.zeros((m, m))
    L = np.zeros((n, n))
    k = 0
    for p in range(m):
        for q in range(p + 1, m):
            K[p, q], K[q, p] = x[k], -x[k]
            k += 1
    for p in range(n):
        for q in range(p + 1, n):
            L[p, q], L[q, p] = x[k], -x[k]
            k += 1
    return K, L


def tangent_space_basis(A, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    A = as_matrix(A)
    m, n = A.shape
    return _to_basis(_orthonormal_columns(tangent_operator(A), tol), m, n)


def sylvester_symmetric_basis(A, B, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Basis {u_i v_j^T : lambda_i = mu_j} of the solutions of A X = X B for symmetric A, B."""
    A = as_matrix(A)
    B = as_matrix(B)
    lam, U = symmetric_eig(A)
    mu, V = symmetric_eig(B)
    scale = max(np.max(np.abs(lam), initial=0.0), np.max(np.abs(mu), initial=0.0), 1e-300)
    basis = []
    for i in range(lam.size):
        for j in range(mu.size):
            if abs(lam[i] - mu[j]) <= tol.sv_cluster_tol * scale:
                basis.append(np.outer(U[:, i], V[:, j]))
    return SubspaceBasis((A.shape[0], B.shape[0]), basis)


def _has_independent_rows(A: np.ndarray, tol: Tolerances) -> bool:
    s = singular_values(A)
    if A.shape[0] > A.shape[1]:
        return False
    return bool(s.size and s[0] > 0 and s[-1] > tol.rank_tol * s[0])


def direct_sum_ssvp_predicate(A, B, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Conditions (a)-(d) under which the direct sum of A and B has the SSVP.

    (a) each block has no more rows than columns; (b) both blocks have the
    SSVP; (c) no common nonzero singular value; (d) both blocks have linearly
    independent rows, or one of them is square and invertible.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    (m, n), (p, q) = A.shape, B.shape
    if m + p > n + q:
        raise DimensionMismatch("direct sum has more rows than columns; transpose both blocks")
    if not (m <= n and p <= q):
        return False
    if not (ssvp_check(A, tol).holds and ssvp_check(B, tol).holds):
        return False
    sa, sb = singular_values(A), singular_values(B)
    scale = max(sa[0], sb[0], 1e-300)
    nz_a = sa[sa > tol.rank_tol * scale]
    nz_b = sb[sb > tol.rank_tol * scale]
    if nz_a.size and nz_b.size and np.min(np.abs(nz_a[:, None] - nz_b[None, :])) <= tol.sv_cluster_tol * scale:
        return False
    ind_a, ind_b = _has_independent_rows(A, tol), _has_independent_rows(B, tol)
    invertible_a = m == n and ind_a
    invertible_b = p == q and ind_b
    return (ind_a and ind_b) or invertible_a or invertible_b
