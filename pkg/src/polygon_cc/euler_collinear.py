"""Euler's collinear three-body condition in rational form.

Body 1 sits at 0, body 2 at 1 and body 3 at ``Q`` in between. The bodies form
a collinear central configuration when

    (m3/Q**2 + m2) / (m3*Q + m2) == (m1 + m3/(1-Q)**2) / (m1 + m3*(1-Q)).

The same condition can be cleared of denominators into a quintic in ``Q``;
we work with the rational form directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, DomainError

BISECTION_WIDTH = 1e-8
NEWTON_STEP = 1e-7
ROOT_TOLERANCE = 1e-13
BRACKET_EDGE = 1e-9


@dataclass(frozen=True)
class EulerProblem:
    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        for name in ("m1", "m2", "m3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite mass, got {value}")


def euler_residual(problem: EulerProblem, Q: float) -> float:
    """Left side minus right side of the collinear condition at ``Q``.

    Positive when body 3 is too close to body 1, negative when too close to
    body 2.
    """
    if not 0.0 < Q < 1.0:
        raise DomainError(f"Q must lie in (0, 1), got {Q}")
    m1, m2, m3 = problem.m1, problem.m2, problem.m3
    p = 1.0 - Q
    return (m3 / (Q * Q) + m2) / (m3 * Q + m2) - (m1 + m3 / (p * p)) / (m1 + m3 * p)


def solve_Q(problem: EulerProblem) -> float:
    """Position of the interior body in the collinear configuration.

    Bisection brackets the root to width 1e-8, then Newton with a central
    difference derivative polishes it. If Newton cannot reach the residual
    tolerance, bisection continues down to adjacent floats.
    """
    f = lambda q: euler_residual(problem, q)
    lo, hi = BRACKET_EDGE, 1.0 - BRACKET_EDGE
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}] for {problem}")

    while hi - lo > BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid

    q = 0.5 * (lo + hi)
    for _ in range(20):
        fq = f(q)
        if abs(fq) < ROOT_TOLERANCE:
            return q
        h = NEWTON_STEP * min(q, 1.0 - q, 1.0)
        slope = (f(q + h) - f(q - h)) / (2.0 * h)
        q_new = q - fq / slope
        if not lo <= q_new <= hi:
            break
        q = q_new

    # residual tolerance out of reach in floating point: finish by bisection
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    candidates = [c for c in (lo, hi, q) if 0.0 < c < 1.0]
    return min(candidates, key=lambda c: abs(f(c)))


def midpoint_residual(m1: float, m2: float, m3: float) -> float:
    """Collinear residual with the third body at the midpoint.

    This vanishes exactly when ``m1 == m2``: a body at the midpoint of the
    other two can only be in a collinear central configuration when the two
    outer masses agree.
    """
    return euler_residual(EulerProblem(m1, m2, m3), 0.5)
