"""Circulant matrices and their Fourier eigenstructure.

A circulant matrix is stored by its first row ``c``; entry ``(k, j)`` is
``c[(j - k) mod n]``. Every such matrix has the eigenpairs

    lambda_k = sum_j c_{1,j} w**((k-1)(j-1)),   nu_k = (w**(k-1), w**(2(k-1)), ..., w**(n(k-1)))

with ``w = exp(2*pi*i/n)`` and ``k = 1..n``. Eigenvalues are evaluated by that
explicit sum (O(n**2)), not by an FFT or a general eigensolver.

Indices ``k`` in the public functions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .geometry import unit_roots

TOLERANCE_ZERO = 1e-10
TOLERANCE_NONZERO = 1e-6
DENSE_LIMIT = 64


def _phase(n: int, exponent) -> np.ndarray:
    # exact integer reduction into (-n/2, n/2] keeps conjugate phases exact
    e = np.mod(exponent, n)
    e = np.where(2 * e > n, e - n, e)
    angle = 2.0 * np.pi * e / n
    return np.cos(angle) + 1j * np.sin(angle)


def _check_index(n, k):
    if int(k) != k or not 1 <= k <= n:
        raise DomainError(f"index k={k} outside 1..{n}")
    return int(k)


@dataclass(frozen=True)
class CirculantMatrix:
    first_row: np.ndarray

    def __post_init__(self):
        row = np.asarray(self.first_row, dtype=complex).reshape(-1)
        if len(row) < 2:
            raise DomainError("circulant matrix needs n >= 2")
        row.setflags(write=False)
        object.__setattr__(self, "first_row", row)

    @property
    def n(self) -> int:
        return len(self.first_row)

    def entry(self, k: int, j: int) -> complex:
        """Entry in row ``k``, column ``j`` (both 1-based)."""
        k = _check_index(self.n, k)
        j = _check_index(self.n, j)
        return complex(self.first_row[(j - k) % self.n])

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.n,):
            raise DomainError(f"vector of length {self.n} expected")
        idx = (np.arange(self.n)[None, :] - np.arange(self.n)[:, None]) % self.n
        return (self.first_row[idx] * v[None, :]).sum(axis=1)

    def dense(self) -> np.ndarray:
        """Materialize the full matrix (cross-checks only, n <= 64)."""
        if self.n > DENSE_LIMIT:
            raise DomainError(f"dense form limited to n <= {DENSE_LIMIT}")
        idx = (np.arange(self.n)[None, :] - np.arange(self.n)[:, None]) % self.n
        return self.first_row[idx].copy()


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    coefficients: Optional[np.ndarray] = None


def eigenvalue(C: CirculantMatrix, k: int) -> complex:
    k = _check_index(C.n, k)
    j = np.arange(C.n)
    return complex(np.sum(C.first_row * _phase(C.n, (k - 1) * j)))


def eigenvalues(C: CirculantMatrix) -> np.ndarray:
    return np.array([eigenvalue(C, k) for k in range(1, C.n + 1)])


def eigenvector(n: int, k: int) -> np.ndarray:
    """Fourier vector ``nu_k``; ``nu_1`` is all ones."""
    if n < 2:
        raise DomainError("n must be >= 2")
    k = _check_index(n, k)
    j = np.arange(1, n + 1)
    return _phase(n, (k - 1) * j)


def decompose(n: int, v) -> np.ndarray:
    """Coefficients ``alpha`` with ``v = sum_k alpha_k nu_k``.

    Uses orthogonality ``conj(nu_k) . nu_j = n * delta_kj``.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    if len(v) != n:
        raise DomainError(f"vector of length {n} expected, got {len(v)}")
    return np.array([np.vdot(eigenvector(n, k), v) / n for k in range(1, n + 1)])


def reconstruct(coefficients) -> np.ndarray:
    alpha = np.asarray(coefficients, dtype=complex)
    n = len(alpha)
    return sum(alpha[k - 1] * eigenvector(n, k) for k in range(1, n + 1))


def spectral_decomposition(C: CirculantMatrix, v=None) -> SpectralDecomposition:
    alpha = None if v is None else decompose(C.n, v)
    return SpectralDecomposition(eigenvalues=eigenvalues(C), coefficients=alpha)


def build_A(N: int) -> CirculantMatrix:
    """Circulant kernel matrix of the N-gon.

    Off-diagonal entry ``(k, j)`` is ``(1 - q_{j-k}) / |1 - q_{j-k}|**3`` with
    ``q_m = exp(2*pi*i*m/N)``; the diagonal is zero.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    N = int(N)
    d = 1.0 - unit_roots(N)[:-1]
    row = np.zeros(N, dtype=complex)
    row[1:] = d / np.abs(d) ** 3
    return CirculantMatrix(row)


@dataclass(frozen=True)
class VanishingCheck:
    """Eigenvalue magnitudes of the N-gon kernel matrix for ``k = 1..N-1``."""

    n: int
    magnitudes: np.ndarray
    vanishing_index: Optional[int]
    passed: bool
    tolerance_zero: float
    tolerance_nonzero: float


def eigenvalue_vanishing_check(N: int, tolerance_zero=TOLERANCE_ZERO,
                               tolerance_nonzero=TOLERANCE_NONZERO) -> VanishingCheck:
    """Check which eigenvalues of ``build_A(N)`` vanish, for N >= 4.

    For ``k`` in ``1..N-1`` every eigenvalue must be bounded away from zero,
    except ``k = (N+1)/2`` when N is odd, which must vanish.
    """
    if int(N) != N or N < 4:
        raise DomainError(f"check is stated for N >= 4, got {N}")
    N = int(N)
    A = build_A(N)
    mags = np.abs([eigenvalue(A, k) for k in range(1, N)])
    zero_k = (N + 1) // 2 if N % 2 else None
    ok = True
    for k, mag in enumerate(mags, start=1):
        if k == zero_k:
            ok &= bool(mag < tolerance_zero)
        else:
            ok &= bool(mag > tolerance_nonzero)
    return VanishingCheck(n=N, magnitudes=mags, vanishing_index=zero_k, passed=ok,
                          tolerance_zero=tolerance_zero,
                          tolerance_nonzero=tolerance_nonzero)
