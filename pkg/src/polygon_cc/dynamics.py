"""Fixed-step integration of the planar Newtonian N-body equations.

Used to certify that a central configuration, launched with rigid-rotation
velocities, really rotates rigidly about its mass center. Positions and
velocities are complex numbers; G = 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CoincidentPositionsError, DomainError
from .geometry import COINCIDENCE_THRESHOLD, Configuration, mass_center

CLOSE_APPROACH = 1e-6
METHODS = ("rk4", "leapfrog")
CSV_HEADER = ["t", "body", "x", "y", "vx", "vy", "energy", "Lz", "px", "py"]


@dataclass(frozen=True)
class BodyState:
    position: complex
    velocity: complex


@dataclass(frozen=True)
class CloseApproach:
    time: float
    bodies: tuple
    distance: float


@dataclass(frozen=True)
class Trajectory:
    """Snapshots of an integration run.

    ``positions`` and ``velocities`` have shape ``(n_snapshots, n_bodies)``.
    If a close approach aborted the run, ``event`` records it and the arrays
    hold the part integrated so far.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray
    energy_log: np.ndarray
    angular_momentum_log: np.ndarray
    linear_momentum_log: np.ndarray
    event: Optional[CloseApproach] = None

    @property
    def states(self):
        return [[BodyState(complex(x), complex(v)) for x, v in zip(xs, vs)]
                for xs, vs in zip(self.positions, self.velocities)]

    @property
    def aborted(self) -> bool:
        return self.event is not None

    def relative_energy_drift(self) -> float:
        e = self.energy_log
        return float(np.max(np.abs(e - e[0])) / abs(e[0]))

    def angular_momentum_drift(self) -> float:
        L = self.angular_momentum_log
        return float(np.max(np.abs(L - L[0])))

    def linear_momentum_drift(self) -> float:
        P = self.linear_momentum_log
        return float(np.max(np.abs(P - P[0])))


def period(omega: float) -> float:
    return 2.0 * math.pi / abs(omega)


def relative_equilibrium_state(config: Configuration, omega: float):
    """Initial states for rigid counterclockwise rotation at rate ``omega``.

    Each velocity is ``omega`` times the offset from the mass center, turned a
    quarter turn counterclockwise.
    """
    c0 = mass_center(config)
    return [BodyState(complex(x), complex(1j * omega * (x - c0)))
            for x in config.positions]


def _accelerations(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    diff = x[None, :] - x[:, None]
    r = np.abs(diff)
    np.fill_diagonal(r, np.inf)
    return (m[None, :] * diff / r**3).sum(axis=1)


def accelerations(config: Configuration) -> np.ndarray:
    """Acceleration of each body, ``sum_j m_j (x_j - x_k) / |x_j - x_k|**3``."""
    return _accelerations(config.positions, config.masses)


def _energy(x, v, m):
    iu, ju = np.triu_indices(len(x), k=1)
    U = np.sum(m[iu] * m[ju] / np.abs(x[iu] - x[ju]))
    return 0.5 * np.sum(m * np.abs(v) ** 2) - U


def _angular_momentum(x, v, m):
    return float(np.sum(m * (x.conj() * v).imag))


def _closest_pair(x):
    n = len(x)
    if n < 2:
        return math.inf, ()
    r = np.abs(x[None, :] - x[:, None])
    np.fill_diagonal(r, np.inf)
    k, j = np.unravel_index(np.argmin(r), r.shape)
    return float(r[k, j]), (int(min(k, j)) + 1, int(max(k, j)) + 1)


def _rk4_step(x, v, m, h):
    a1 = _accelerations(x, m)
    x2, v2 = x + 0.5 * h * v, v + 0.5 * h * a1
    a2 = _accelerations(x2, m)
    x3, v3 = x + 0.5 * h * v2, v + 0.5 * h * a2
    a3 = _accelerations(x3, m)
    x4, v4 = x + h * v3, v + h * a3
    a4 = _accelerations(x4, m)
    x_new = x + h / 6.0 * (v + 2 * v2 + 2 * v3 + v4)
    v_new = v + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
    return x_new, v_new


def integrate(initial: Sequence[BodyState], masses, step: float, n_steps: int,
              method: str = "rk4") -> Trajectory:
    """Integrate from ``initial`` with ``n_steps`` fixed steps.

    ``method`` is ``"rk4"`` (classical fourth order) or ``"leapfrog"``
    (kick-drift-kick, symplectic). The run stops early if two bodies come
    within 1e-6 of each other.
    """
    if not step > 0:
        raise DomainError("step must be positive")
    if int(n_steps) != n_steps or n_steps < 1:
        raise DomainError("n_steps must be a positive integer")
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    m = np.asarray(masses, dtype=float)
    x = np.array([s.position for s in initial], dtype=complex)
    v = np.array([s.velocity for s in initial], dtype=complex)
    if len(m) != len(x):
        raise DomainError("one mass per body state required")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
        raise DomainError("states must be finite")
    if _closest_pair(x)[0] < COINCIDENCE_THRESHOLD:
        raise CoincidentPositionsError("coincident initial positions")

    n_steps = int(n_steps)
    xs = np.empty((n_steps + 1, len(x)), dtype=complex)
    vs = np.empty_like(xs)
    xs[0], vs[0] = x, v
    event = None
    done = n_steps
    a = _accelerations(x, m)
    for i in range(1, n_steps + 1):
        if method == "rk4":
            x, v = _rk4_step(x, v, m, step)
        else:
            v_half = v + 0.5 * step * a
            x = x + step * v_half
            a = _accelerations(x, m)
            v = v_half + 0.5 * step * a
        xs[i], vs[i] = x, v
        dist, pair = _closest_pair(x)
        if dist < CLOSE_APPROACH:
            event = CloseApproach(time=i * step, bodies=pair, distance=dist)
            done = i
            break

    xs, vs = xs[:done + 1], vs[:done + 1]
    times = step * np.arange(done + 1)
    energy = np.array([_energy(xi, vi, m) for xi, vi in zip(xs, vs)])
    Lz = np.array([_angular_momentum(xi, vi, m) for xi, vi in zip(xs, vs)])
    P = (vs * m[None, :]).sum(axis=1)
    return Trajectory(times=times, positions=xs, velocities=vs, masses=m,
                      energy_log=energy, angular_momentum_log=Lz,
                      linear_momentum_log=P, event=event)


def rigid_rotation_error(trajectory: Trajectory, config: Configuration,
                         omega: float) -> float:
    """Largest distance from the ideal rigid rotation about the mass center.

    The mass center is held fixed, which holds for relative-equilibrium
    initial data since its total linear momentum is zero.
    """
    c0 = mass_center(config)
    phase = np.exp(1j * omega * trajectory.times)[:, None]
    ideal = c0 + phase * (config.positions[None, :] - c0)
    return float(np.max(np.abs(trajectory.positions - ideal)))


def write_csv(trajectory: Trajectory, path) -> None:
    """One row per (snapshot, body); bodies numbered from 1."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for t, xs, vs, e, L, P in zip(trajectory.times, trajectory.positions,
                                      trajectory.velocities, trajectory.energy_log,
                                      trajectory.angular_momentum_log,
                                      trajectory.linear_momentum_log):
            for body, (x, v) in enumerate(zip(xs, vs), start=1):
                values = (t, x.real, x.imag, v.real, v.imag, e, L, P.real, P.imag)
                cells = [repr(float(c)) for c in values]
                writer.writerow(cells[:1] + [body] + cells[1:])


def read_csv(path):
    """Read a trajectory CSV back as a list of row dicts with float fields."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in row:
            row[key] = int(row[key]) if key == "body" else float(row[key])
    return rows
