import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from conftest import DEG4, R_MATRIX
from svpattern.errors import MatrixParseError, NonFiniteInput, NotSymmetric
from svpattern.linalg import (
    Tolerances,
    format_matrix,
    min_singular_gap,
    multiplicity,
    nullspace_basis,
    parse_matrix,
    random_realization,
    rank,
    singular_values,
    svd,
    symmetric_eig,
)
from svpattern.pattern import Pattern
from svpattern.witness import inout_witness

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 7).flatmap(
        lambda n: arrays(np.float64, (m, n), elements=st.floats(-10, 10, allow_nan=False, width=64))
    )
)


def _check_svd(A):
    r = svd(A)
    m, n = A.shape
    k = min(m, n)
    assert np.all(np.diff(r.sigma) <= 1e-12 * max(1.0, r.sigma[0]))
    assert np.allclose(r.U.T @ r.U, np.eye(m), atol=1e-12)
    assert np.allclose(r.V.T @ r.V, np.eye(n), atol=1e-12)
    recon = r.U[:, :k] @ np.diag(r.sigma) @ r.V[:, :k].T
    assert np.max(np.abs(recon - A), initial=0.0) <= 1e-10 * max(1.0, np.max(np.abs(A), initial=0.0))
    return r


def test_svd_examples():
    assert np.allclose(svd(np.eye(3)).sigma, [1, 1, 1], atol=1e-14)
    assert np.allclose(svd(R_MATRIX).sigma, [2, 1, 1], atol=1e-10)
    assert np.allclose(svd([[1, 1], [1, -1]]).sigma, [math.sqrt(2)] * 2, atol=1e-14)


@given(matrices)
def test_svd_properties(A):
    r = _check_svd(A)
    assert np.allclose(r.sigma, oracles.singular_values(A), atol=1e-10 * max(1.0, np.abs(A).max()))


def test_svd_tall_and_rank_deficient():
    A = np.outer([1.0, 2, 3, 4], [1.0, -1])
    _check_svd(A)
    _check_svd(np.zeros((3, 2)))
    _check_svd(np.array([[1e-200, 0], [0, 1.0]]))


def test_multiplicity_examples():
    assert multiplicity(R_MATRIX, 1.0) == 2
    assert multiplicity(np.eye(3), 0.0) == 0
    assert multiplicity(inout_witness().matrix, math.sqrt(2)) == 2
    with pytest.raises(ValueError):
        multiplicity(np.eye(2), -1.0)


def test_gap_examples():
    assert min_singular_gap(np.eye(2)) == pytest.approx(0.0, abs=1e-14)
    assert min_singular_gap(np.diag([3.0, 1.0])) == pytest.approx(2.0)
    assert min_singular_gap(R_MATRIX) == pytest.approx(0.0, abs=1e-12)
    assert min_singular_gap(np.ones((1, 3))) == math.inf


def test_rank_and_nullspace():
    P = DEG4.cells.astype(float)
    G = P @ P.T - np.eye(4)
    assert rank(G) == 2
    N = nullspace_basis(G)
    assert N.shape == (4, 2)
    assert np.allclose(G @ N, 0, atol=1e-12)
    assert rank(np.eye(3)) == 3 and nullspace_basis(np.eye(3)).shape == (3, 0)
    assert rank(np.zeros((2, 3))) == 0 and nullspace_basis(np.zeros((2, 3))).shape == (3, 3)


@given(matrices)
def test_rank_matches_lapack(A):
    # only compare away from the threshold
    s = oracles.singular_values(A)
    if s.size and s[0] > 0 and np.any(np.abs(s / s[0] - 1e-10) < 1e-6):
        return
    assert rank(A) == np.linalg.matrix_rank(A, tol=1e-10 * s[0] if s.size and s[0] > 0 else None)


def test_symmetric_eig_examples():
    lam, Q = symmetric_eig(np.diag([2.0, 1.0]))
    assert np.allclose(lam, [2, 1]) and np.allclose(np.abs(Q), np.eye(2))
    lam, Q = symmetric_eig(np.ones((2, 2)))
    assert np.allclose(lam, [2, 0], atol=1e-14)
    assert np.allclose(np.abs(Q), 1 / math.sqrt(2))
    lam, Q = symmetric_eig(np.eye(3))
    assert np.allclose(lam, 1) and np.allclose(Q, np.eye(3))
    with pytest.raises(NotSymmetric):
        symmetric_eig([[1, 2], [0, 1]])


@given(st.integers(1, 7).flatmap(lambda n: arrays(np.float64, (n, n), elements=st.floats(-5, 5, width=64))))
def test_symmetric_eig_properties(B):
    S = B + B.T
    lam, Q = symmetric_eig(S)
    scale = max(1.0, np.abs(S).max())
    assert np.allclose(Q.T @ Q, np.eye(S.shape[0]), atol=1e-12)
    assert np.max(np.abs(Q @ np.diag(lam) @ Q.T - S)) <= 1e-10 * scale
    assert np.allclose(lam, np.sort(np.linalg.eigvalsh(S))[::-1], atol=1e-10 * scale)


def test_random_realization():
    assert np.all(random_realization(Pattern.zeros(2, 3), 4) == 0)
    D = random_realization(Pattern.identity(3), 7)
    off = D[~np.eye(3, dtype=bool)]
    assert np.all(off == 0)
    assert np.all((np.abs(np.diag(D)) >= 0.5) & (np.abs(np.diag(D)) <= 2))
    P = Pattern.ones(3, 4)
    assert np.array_equal(random_realization(P, 11), random_realization(P, 11))
    assert np.all(random_realization(P, 3, signed=False) > 0)


def test_matrix_io_round_trip():
    A = np.array([[1.0, -2.5e-7], [math.pi, 0.0]])
    assert np.array_equal(parse_matrix(format_matrix(A)), A)
    with pytest.raises(MatrixParseError):
        parse_matrix("2 2\n1 2\n3")
    with pytest.raises(MatrixParseError):
        parse_matrix("")
    with pytest.raises(NonFiniteInput):
        parse_matrix("1 2\n1 nan")


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(sv_cluster_tol=0.0)
