"""Numeric checks of the roots-of-unity summation identities.

Two identities link sums over the regular N-gon to the cosecant sum

    S(N) = 1/4 * sum_{j=1}^{N-1} csc(j*pi/N),

which is the normalizer in the equal-mass formula:

* cosecant identity: ``sum_{j<N} (1 - q_j) / |1 - q_j|**3 == S(N)``
* pair identity: ``(1/N) * sum_{j<k} 1 / |q_j - q_k| == Re sum_{j<N} (1 - q_j) / |1 - q_j|**3``

with ``q_j = exp(2*pi*i*j/N)``. Sums are accumulated with :func:`math.fsum`
because the terms near ``j = 1`` and ``j = N - 1`` dominate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import unit_roots


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity at one N."""

    n: int
    lhs: complex
    rhs: float
    abs_difference: float

    @classmethod
    def from_sides(cls, n, lhs, rhs):
        return cls(n=n, lhs=complex(lhs), rhs=float(rhs),
                   abs_difference=abs(complex(lhs) - rhs))

    def passed(self, tol: float) -> bool:
        return self.abs_difference < tol


def _check_n(N):
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    return int(N)


def complex_fsum(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def csc_sum(N: int) -> float:
    """Return ``1/4 * sum_{j=1}^{N-1} 1/sin(j*pi/N)``."""
    N = _check_n(N)
    return 0.25 * math.fsum(1.0 / math.sin(j * math.pi / N) for j in range(1, N))


def unit_root_kernel(N: int) -> np.ndarray:
    """Terms ``(1 - q_j) / |1 - q_j|**3`` for ``j = 1..N-1``."""
    q = unit_roots(N)[:-1]
    d = 1.0 - q
    return d / np.abs(d) ** 3


def verify_cosecant_identity(N: int) -> IdentityReport:
    """Complex kernel sum against the cosecant sum.

    The left side stays complex, so the difference also certifies that its
    imaginary part cancels.
    """
    N = _check_n(N)
    return IdentityReport.from_sides(N, complex_fsum(unit_root_kernel(N)), csc_sum(N))


def verify_pair_identity(N: int) -> IdentityReport:
    """Mean inverse pairwise distance of the N-gon against the kernel sum."""
    N = _check_n(N)
    q = unit_roots(N)
    iu, ju = np.triu_indices(N, k=1)
    lhs = math.fsum(1.0 / np.abs(q[iu] - q[ju])) / N
    rhs = complex_fsum(unit_root_kernel(N)).real
    return IdentityReport.from_sides(N, lhs, rhs)
