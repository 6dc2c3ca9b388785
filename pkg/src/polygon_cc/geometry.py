"""Planar configurations of point masses.

Points in the plane are stored as complex numbers ``x + iy``. Bodies are
numbered ``1..N+1`` in reports; arrays are zero-based, so the central body of
a polygon-plus-center configuration sits at index ``N``.

The gravitational constant is fixed at G = 1 throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPositionsError, DomainError

#: Pairwise distances below this are treated as coincident bodies.
COINCIDENCE_THRESHOLD = 1e-12

PlanarPoint = complex


def as_points(values) -> np.ndarray:
    """Coerce complex numbers or ``(x, y)`` pairs to a complex array."""
    arr = np.asarray(values)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.asarray(arr, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DomainError("positions must be finite")
    return arr


def min_pairwise_distance(positions: np.ndarray) -> float:
    diff = np.abs(positions[:, None] - positions[None, :])
    n = len(positions)
    if n < 2:
        return math.inf
    return float(diff[~np.eye(n, dtype=bool)].min())


@dataclass(frozen=True)
class Configuration:
    """Positions and positive masses of a set of point bodies.

    Parameters
    ----------
    positions : array_like
        Complex positions, or an ``(n, 2)`` array of coordinates.
    masses : array_like
        Strictly positive masses, one per body.
    """

    positions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        positions = as_points(self.positions)
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        if len(masses) != len(positions):
            raise DomainError(
                f"got {len(positions)} positions but {len(masses)} masses")
        if len(masses) == 0:
            raise DomainError("a configuration needs at least one body")
        if not np.all(np.isfinite(masses)) or np.any(masses <= 0):
            raise DomainError("all masses must be strictly positive")
        if min_pairwise_distance(positions) < COINCIDENCE_THRESHOLD:
            raise CoincidentPositionsError("configuration has coincident positions")
        positions.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "masses", masses)

    @property
    def n_bodies(self) -> int:
        return len(self.masses)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def translated(self, offset: complex) -> Configuration:
        return Configuration(self.positions + offset, self.masses)

    def rotated(self, angle: float) -> Configuration:
        return Configuration(self.positions * np.exp(1j * angle), self.masses)

    def with_masses(self, masses) -> Configuration:
        return Configuration(self.positions, masses)


@dataclass(frozen=True)
class ConfigurationMetrics:
    potential_U: float
    inertia_I: float
    mass_center: complex


def unit_roots(n: int) -> np.ndarray:
    """Return ``exp(2*pi*i*j/n)`` for ``j = 1..n`` (the last one is 1)."""
    e = np.arange(1, n + 1) % n
    # angles reduced to (-pi, pi]: q_n is exactly 1 and q_{n-j} == conj(q_j)
    e = np.where(2 * e > n, e - n, e)
    angle = 2.0 * np.pi * e / n
    return np.cos(angle) + 1j * np.sin(angle)


def regular_polygon_vertices(N: int) -> np.ndarray:
    """Vertices of the regular N-gon inscribed in the unit circle.

    Vertex ``j`` (1-based) is at angle ``2*j*pi/N``, so the last vertex is
    ``1 + 0j``. Each angle is computed directly rather than by repeated
    rotation.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"polygon needs N >= 2 vertices, got {N}")
    return unit_roots(int(N))


def polygon_plus_center_configuration(N, polygon_masses, center_mass) -> Configuration:
    """N bodies on the unit-circle N-gon plus one body at the origin."""
    vertices = regular_polygon_vertices(N)
    polygon_masses = np.asarray(polygon_masses, dtype=float).reshape(-1)
    if len(polygon_masses) != N:
        raise DomainError(f"expected {N} polygon masses, got {len(polygon_masses)}")
    if center_mass <= 0:
        raise DomainError("center mass must be strictly positive")
    positions = np.append(vertices, 0j)
    masses = np.append(polygon_masses, float(center_mass))
    return Configuration(positions, masses)


def mass_center(config: Configuration) -> complex:
    m = config.masses
    return complex(np.sum(m * config.positions) / m.sum())


def potential(positions: np.ndarray, masses: np.ndarray) -> float:
    """Newtonian potential ``sum_{k<j} m_j m_k / |x_j - x_k|`` (positive)."""
    iu, ju = np.triu_indices(len(positions), k=1)
    r = np.abs(positions[iu] - positions[ju])
    if np.any(r < COINCIDENCE_THRESHOLD):
        raise CoincidentPositionsError("coincident positions")
    return float(np.sum(masses[iu] * masses[ju] / r))


def metrics(config: Configuration) -> ConfigurationMetrics:
    """Potential, moment of inertia about the mass center, and the mass center."""
    c0 = mass_center(config)
    U = potential(config.positions, config.masses)
    I = float(np.sum(config.masses * np.abs(config.positions - c0) ** 2))
    return ConfigurationMetrics(potential_U=U, inertia_I=I, mass_center=c0)
