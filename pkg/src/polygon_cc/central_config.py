"""Central-configuration residuals and mass solvers for the centred N-gon.

A configuration is central with rotation rate ``omega`` when, for every body k,

    sum_{j != k} m_j m_k (x_j - x_k) / |x_j - x_k|**3 + omega**2 m_k (x_k - c0) = 0

where ``c0`` is the mass center. For N bodies on the unit N-gon plus one body
of mass ``m_c`` at the origin, this holds exactly when all polygon masses equal

    m = (omega**2 - m_c) / S(N),   S(N) = 1/4 * sum_{j=1}^{N-1} csc(j*pi/N).

Three routes to that mass are provided: the closed form, a spectral solve of
the circulant linear system that holds when the weighted vertex sum vanishes,
and damped Newton on the full nonlinear residual in the masses.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import circulant
from .errors import (
    CoincidentPositionsError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    SingularityError,
)
from .geometry import (
    COINCIDENCE_THRESHOLD,
    Configuration,
    mass_center,
    metrics,
    polygon_plus_center_configuration,
    regular_polygon_vertices,
)
from .identities import csc_sum

log = logging.getLogger(__name__)

NEWTON_MAX_ITERATIONS = 200
NEWTON_TOLERANCE = 1e-11
NEWTON_MAX_HALVINGS = 30
NEWTON_POLISH_STEPS = 3
FD_RELATIVE_STEP = 1e-7
BRANCH_TOLERANCE = 1e-8
EQUAL_MASS_TOLERANCE = 1e-9


class Branch(str, enum.Enum):
    """Which alternative of the central body's equation a solution satisfies.

    The central body's equation reduces to ``sum_j m_j q_j = 0`` or
    ``omega**2 = total mass``.
    """

    SUM_CONDITION = "sum-condition"
    OMEGA_CONDITION = "omega-condition"


@dataclass(frozen=True)
class ResidualReport:
    """Per-body residual vectors (as complex numbers) and their sup norm.

    ``virial_gap`` is ``|omega**2 - U/I|`` when the report comes from a
    forward verification, else ``None``.
    """

    per_body: np.ndarray
    sup_norm: float
    omega_squared: float
    mass_center: complex = 0j
    virial_gap: Optional[float] = None

    @property
    def per_body_norms(self) -> np.ndarray:
        return np.abs(self.per_body)


@dataclass(frozen=True)
class MassSolution:
    masses: np.ndarray
    center_mass: float
    branch: Optional[Branch]
    max_deviation_from_equal: float
    branches: tuple = ()
    iterations: int = 0
    residual: float = 0.0

    @property
    def is_equal_mass(self) -> bool:
        return self.max_deviation_from_equal < EQUAL_MASS_TOLERANCE


def _check_n(N, minimum=2):
    if int(N) != N or N < minimum:
        raise DomainError(f"N must be an integer >= {minimum}, got {N}")
    return int(N)


def _check_feasible(omega_squared, center_mass):
    if not omega_squared > 0:
        raise DomainError("omega_squared must be positive")
    if not center_mass >= 0:
        raise DomainError("center mass must be non-negative")
    if omega_squared <= center_mass:
        raise InfeasibleError(
            f"need omega^2 > m_center, got omega^2={omega_squared!r} <= "
            f"m_center={center_mass!r}")


def residual_vectors(positions, masses, omega_squared, per_unit_mass=False) -> np.ndarray:
    """Raw residual per body; masses may be any real numbers here.

    With ``per_unit_mass`` each body's equation is divided by its own mass,
    so a vanishing mass no longer satisfies its equation trivially.
    """
    positions = np.asarray(positions, dtype=complex)
    masses = np.asarray(masses, dtype=float)
    diff = positions[None, :] - positions[:, None]  # x_j - x_k in [k, j]
    r = np.abs(diff)
    np.fill_diagonal(r, np.inf)
    if r.min() < COINCIDENCE_THRESHOLD:
        raise CoincidentPositionsError("coincident positions")
    pull = (masses[None, :] * diff / r**3).sum(axis=1)
    c0 = np.sum(masses * positions) / masses.sum()
    accel_gap = pull + omega_squared * (positions - c0)
    return accel_gap if per_unit_mass else masses * accel_gap


def cc_residual(config: Configuration, omega_squared: float) -> ResidualReport:
    if not omega_squared > 0:
        raise DomainError("omega_squared must be positive")
    per_body = residual_vectors(config.positions, config.masses, omega_squared)
    return ResidualReport(per_body=per_body, sup_norm=float(np.abs(per_body).max()),
                          omega_squared=float(omega_squared),
                          mass_center=mass_center(config))


def theorem_masses(N: int, omega_squared: float, center_mass: float) -> float:
    """Common polygon mass ``(omega**2 - m_c) / S(N)``."""
    N = _check_n(N)
    _check_feasible(omega_squared, center_mass)
    return (omega_squared - center_mass) / csc_sum(N)


def theorem_configuration(N, omega_squared, center_mass) -> Configuration:
    m = theorem_masses(N, omega_squared, center_mass)
    return polygon_plus_center_configuration(N, np.full(N, m), center_mass)


def verify_theorem_forward(N, omega_squared, center_mass) -> ResidualReport:
    """Residual of the equal-mass configuration, with the U/I cross-check."""
    config = theorem_configuration(N, omega_squared, center_mass)
    report = cc_residual(config, omega_squared)
    met = metrics(config)
    gap = abs(omega_squared - met.potential_U / met.inertia_I)
    return ResidualReport(per_body=report.per_body, sup_norm=report.sup_norm,
                          omega_squared=report.omega_squared,
                          mass_center=report.mass_center, virial_gap=gap)


def classify_branch(masses, center_mass, omega_squared):
    """Return every branch condition satisfied by polygon ``masses``."""
    masses = np.asarray(masses, dtype=float)
    q = regular_polygon_vertices(len(masses))
    found = []
    if abs(np.sum(masses * q)) < BRANCH_TOLERANCE:
        found.append(Branch.SUM_CONDITION)
    if abs(omega_squared - masses.sum() - center_mass) < BRANCH_TOLERANCE * omega_squared:
        found.append(Branch.OMEGA_CONDITION)
    return tuple(found)


def _deviation(masses):
    return float(np.max(np.abs(masses - masses.mean())))


def solve_masses_circulant(N, omega_squared, center_mass,
                           tolerance=circulant.TOLERANCE_ZERO) -> MassSolution:
    """Solve ``A m = (omega**2 - m_c) nu_1`` in the Fourier eigenbasis of A.

    The right-hand side is expanded in the eigenvectors of the circulant
    kernel matrix ``A``; each nonzero coefficient is divided by its
    eigenvalue. Components along vanishing eigenvalues are set to zero.
    """
    N = _check_n(N, minimum=4)
    _check_feasible(omega_squared, center_mass)
    A = circulant.build_A(N)
    lam = circulant.eigenvalues(A)
    rhs = (omega_squared - center_mass) * circulant.eigenvector(N, 1)
    beta = circulant.decompose(N, rhs)
    scale = np.abs(beta).max()
    alpha = np.zeros(N, dtype=complex)
    for k in range(N):
        if abs(beta[k]) <= 1e-14 * scale:
            continue
        if abs(lam[k]) < tolerance:
            raise SingularityError(f"eigenvalue {k + 1} of A vanishes "
                                   f"(|lambda|={abs(lam[k]):.3g})")
        alpha[k] = beta[k] / lam[k]
    masses = circulant.reconstruct(alpha).real
    return MassSolution(
        masses=masses, center_mass=float(center_mass), branch=Branch.SUM_CONDITION,
        max_deviation_from_equal=_deviation(masses),
        branches=classify_branch(masses, center_mass, omega_squared))


def _stacked(N, center_mass, omega_squared, positions):
    def fun(m):
        r = residual_vectors(positions, np.append(m, center_mass), omega_squared,
                             per_unit_mass=True)
        return np.concatenate([r.real, r.imag])
    return fun


def _fd_jacobian(fun, m, f0):
    J = np.empty((len(f0), len(m)))
    for j in range(len(m)):
        h = FD_RELATIVE_STEP * max(1.0, abs(m[j]))
        mp = m.copy()
        mp[j] += h
        J[:, j] = (fun(mp) - f0) / h
    return J


def _sup(f):
    half = len(f) // 2
    return float(np.hypot(f[:half], f[half:]).max())


def solve_masses_newton(N, omega_squared, center_mass, initial_masses,
                        max_iterations=NEWTON_MAX_ITERATIONS,
                        tolerance=NEWTON_TOLERANCE) -> MassSolution:
    """Damped Newton on the full residual with only the polygon masses free.

    The ``2(N+1)`` real residual components (each body's equation divided by
    its mass) are driven to zero over the ``N`` unknown masses. Each step is
    the least-squares Newton step with a forward-difference Jacobian, halved
    until the residual norm drops. Once the sup residual is below
    ``tolerance``, a few more full steps are taken while they still reduce it,
    which pushes the masses to rounding level.
    """
    N = _check_n(N)
    _check_feasible(omega_squared, center_mass)
    m = np.asarray(initial_masses, dtype=float).reshape(-1).copy()
    if len(m) != N:
        raise DomainError(f"expected {N} initial masses, got {len(m)}")
    if np.any(m <= 0):
        raise DomainError("initial masses must be positive")
    positions = np.append(regular_polygon_vertices(N), 0j)
    fun = _stacked(N, center_mass, omega_squared, positions)

    f = fun(m)
    norm = np.linalg.norm(f)
    for it in range(max_iterations + 1):
        if _sup(f) < tolerance:
            break
        if it == max_iterations:
            raise ConvergenceError(
                f"Newton did not converge in {max_iterations} iterations",
                iterate=m, residual=_sup(f))
        J = _fd_jacobian(fun, m, f)
        step = np.linalg.lstsq(J, -f, rcond=None)[0]
        t = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            trial = m + t * step
            f_trial = fun(trial)
            trial_norm = np.linalg.norm(f_trial)
            if trial_norm < norm:
                break
            t *= 0.5
        else:
            raise ConvergenceError("line search failed to reduce the residual",
                                   iterate=m, residual=_sup(f))
        m, f, norm = trial, f_trial, trial_norm
    # a few undamped steps past the tolerance, kept only while they help
    for _ in range(NEWTON_POLISH_STEPS):
        step = np.linalg.lstsq(_fd_jacobian(fun, m, f), -f, rcond=None)[0]
        f_trial = fun(m + step)
        if not np.linalg.norm(f_trial) < norm:
            break
        m, f, norm = m + step, f_trial, np.linalg.norm(f_trial)
    log.debug("newton converged in %d iterations, residual %.3g", it, _sup(f))

    if np.any(m <= 0):
        raise InfeasibleError(f"Newton converged to non-positive masses {m.tolist()}")
    branches = classify_branch(m, center_mass, omega_squared)
    return MassSolution(
        masses=m, center_mass=float(center_mass),
        branch=branches[0] if branches else None,
        max_deviation_from_equal=_deviation(m), branches=branches,
        iterations=it, residual=_sup(f))
