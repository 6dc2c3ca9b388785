import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polygon_cc.circulant import (
    CirculantMatrix,
    build_A,
    decompose,
    eigenvalue,
    eigenvalue_vanishing_check,
    eigenvalues,
    eigenvector,
    reconstruct,
    spectral_decomposition,
)
from polygon_cc.errors import DomainError
from polygon_cc.identities import csc_sum

rng = np.random.default_rng(20240611)


def random_row(n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def test_entries_follow_shift_rule():
    C = CirculantMatrix(random_row(6))
    for k in range(2, 7):
        for j in range(2, 7):
            assert C.entry(k, j) == C.entry(k - 1, j - 1)
    # wrap-around: index 0 is identified with n
    assert C.entry(1, 3) == C.entry(6, 2)


def test_eigenvalue_examples():
    a, b, c = 2.0, -1.5, 0.25j
    assert eigenvalue(CirculantMatrix([a, b, c]), 1) == pytest.approx(a + b + c)
    assert eigenvalue(CirculantMatrix([0, 1, 0, 0]), 3) == pytest.approx(-1, abs=1e-15)
    assert abs(eigenvalue(build_A(5), 3)) < 1e-13


@pytest.mark.parametrize("k", [0, 5, -1])
def test_eigen_index_domain(k):
    with pytest.raises(DomainError):
        eigenvalue(CirculantMatrix([1, 2, 3, 4]), k)
    with pytest.raises(DomainError):
        eigenvector(4, k)


def test_eigenvector_examples():
    np.testing.assert_allclose(eigenvector(4, 1), [1, 1, 1, 1])
    np.testing.assert_allclose(eigenvector(4, 2), [1j, -1, -1j, 1], atol=1e-15)


@pytest.mark.parametrize("n", range(2, 13))
def test_eigenvectors_orthogonal(n):
    V = np.array([eigenvector(n, k) for k in range(1, n + 1)])
    gram = V.conj() @ V.T
    np.testing.assert_allclose(gram, n * np.eye(n), atol=1e-12)


@pytest.mark.parametrize("n", range(2, 17))
def test_eigen_equation_random_rows(n):
    C = CirculantMatrix(random_row(n))
    dense = C.dense()
    for k in range(1, n + 1):
        v = eigenvector(n, k)
        lhs = dense @ v
        rhs = eigenvalue(C, k) * v
        assert np.linalg.norm(lhs - rhs) <= 1e-11 * max(1.0, np.linalg.norm(lhs))


def test_matvec_matches_dense():
    C = CirculantMatrix(random_row(9))
    v = random_row(9)
    np.testing.assert_allclose(C.matvec(v), C.dense() @ v, atol=1e-13)


def test_build_A_small():
    np.testing.assert_allclose(build_A(2).first_row, [0, 0.25], atol=1e-16)
    A4 = build_A(4)
    assert A4.entry(1, 3) == pytest.approx(0.25, abs=1e-16)
    # |1 - i|**3 = 2*sqrt(2)
    s = 1 / (2 * math.sqrt(2))
    assert A4.entry(1, 2) == pytest.approx(complex(s, -s), abs=1e-15)


def test_build_A_matches_componentwise_definition():
    N = 7
    A = build_A(N).dense()
    for k in range(1, N + 1):
        for j in range(1, N + 1):
            if k == j:
                assert A[k - 1, j - 1] == 0
            else:
                q = cmath.exp(2j * math.pi * (j - k) / N)
                assert A[k - 1, j - 1] == pytest.approx((1 - q) / abs(1 - q) ** 3, abs=1e-14)


@pytest.mark.parametrize("N", range(2, 65))
def test_lambda1_real_positive_equals_csc_sum(N):
    lam1 = eigenvalue(build_A(N), 1)
    assert abs(lam1.imag) < 1e-12
    assert lam1.real > 0
    if N <= 32:
        assert abs(lam1 - csc_sum(N)) < 1e-12


def test_A_action_on_real_vectors_via_spectrum():
    # real vector -> expand in eigenbasis -> scale by eigenvalues -> rebuild
    N = 8
    A = build_A(N)
    x = rng.uniform(0.5, 2.0, size=N)
    alpha = decompose(N, x)
    spectral = reconstruct(alpha * eigenvalues(A))
    np.testing.assert_allclose(spectral, A.dense() @ x, atol=1e-12)


def test_decompose_examples():
    np.testing.assert_allclose(decompose(5, eigenvector(5, 2)), [0, 1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(decompose(6, np.ones(6)), [1, 0, 0, 0, 0, 0], atol=1e-15)
    # inner products with (1,1,1,1), (i,-1,-i,1), (-1,1,-1,1), (-i,-1,i,1):
    # (3,1,3,1) = 2*nu_1 - nu_3
    np.testing.assert_allclose(decompose(4, [3, 1, 3, 1]), [2, 0, -1, 0], atol=1e-15)


def test_decompose_length_mismatch():
    with pytest.raises(DomainError):
        decompose(4, [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 16).flatmap(
    lambda n: st.lists(st.complex_numbers(max_magnitude=1e3), min_size=n, max_size=n)))
def test_decompose_reconstruct_roundtrip(values):
    v = np.array(values)
    back = reconstruct(decompose(len(v), v))
    assert np.linalg.norm(back - v) <= 1e-11 * max(1.0, np.linalg.norm(v))


def test_spectral_decomposition_bundle():
    C = CirculantMatrix(random_row(5))
    v = random_row(5)
    sd = spectral_decomposition(C, v)
    np.testing.assert_allclose(sd.eigenvalues, eigenvalues(C))
    np.testing.assert_allclose(reconstruct(sd.coefficients), v, atol=1e-12)
    assert spectral_decomposition(C).coefficients is None


def test_vanishing_check_examples():
    chk5 = eigenvalue_vanishing_check(5)
    assert chk5.passed and chk5.vanishing_index == 3
    assert chk5.magnitudes[2] < 1e-12
    assert all(chk5.magnitudes[k] > 1e-3 for k in (0, 1, 3))

    chk4 = eigenvalue_vanishing_check(4)
    assert chk4.passed and chk4.vanishing_index is None
    assert np.all(chk4.magnitudes > 1e-3)

    chk7 = eigenvalue_vanishing_check(7)
    assert chk7.magnitudes[3] < 1e-12


def test_vanishing_index_by_direct_dft():
    # independent DFT of the first row of A_7 at k = 4
    N = 7
    total = 0j
    for j in range(2, N + 1):
        q = cmath.exp(2j * math.pi * (j - 1) / N)
        total += (1 - q) / abs(1 - q) ** 3 * cmath.exp(2j * math.pi * 3 * (j - 1) / N)
    assert abs(total) < 1e-12


@pytest.mark.parametrize("N", range(4, 41))
def test_vanishing_check_sweep(N):
    assert eigenvalue_vanishing_check(N).passed


@pytest.mark.parametrize("N", [2, 3])
def test_vanishing_check_requires_n4(N):
    with pytest.raises(DomainError):
        eigenvalue_vanishing_check(N)


def test_dense_limit():
    with pytest.raises(DomainError):
        CirculantMatrix(np.ones(65)).dense()
