import numpy as np
import pytest

from polygon_cc.central_config import cc_residual
from polygon_cc.errors import BracketError, DomainError
from polygon_cc.euler_collinear import EulerProblem, euler_residual, midpoint_residual, solve_Q
from polygon_cc.geometry import Configuration, metrics


def force_balance_gap(m1, m2, m3, Q):
    """Collinear condition written from accelerations on the line.

    Bodies at 0, 1, Q; central when a_1 - a_3 = omega^2 Q and
    a_1 - a_2 = omega^2 with the same omega.
    """
    a1 = m2 + m3 / Q**2
    a2 = -m1 - m3 / (1 - Q) ** 2
    a3 = -m1 / Q**2 + m2 / (1 - Q) ** 2
    return (a1 - a3) / Q - (a1 - a2)


def bisect(f, a, b):
    fa = f(a)
    while b - a > 1e-15:
        c = 0.5 * (a + b)
        if (f(c) > 0) == (fa > 0):
            a, fa = c, f(c)
        else:
            b = c
    return 0.5 * (a + b)


def test_equal_outer_masses_midpoint_root():
    for m3 in (0.01, 1.0, 100.0):
        assert abs(euler_residual(EulerProblem(2.0, 2.0, m3), 0.5)) < 1e-15


def test_residual_signs():
    assert euler_residual(EulerProblem(1, 1, 1), 0.3) > 0
    assert euler_residual(EulerProblem(1, 1, 1), 0.3) == pytest.approx(
        (1 / 0.09 + 1) / 1.3 - (1 + 1 / 0.49) / 1.7, rel=1e-15)
    assert abs(euler_residual(EulerProblem(2, 1, 0.5), 0.5)) > 1e-2


@pytest.mark.parametrize("Q", [0, 1, -0.1, 1.5])
def test_residual_domain(Q):
    with pytest.raises(DomainError):
        euler_residual(EulerProblem(1, 1, 1), Q)


@pytest.mark.parametrize("masses", [(0, 1, 1), (1, -1, 1), (1, 1, float("nan"))])
def test_problem_rejects_bad_masses(masses):
    with pytest.raises(DomainError):
        EulerProblem(*masses)


@pytest.mark.parametrize("masses, expected", [
    ((1, 1, 5), 0.5),
    # 40-digit roots of the force-balance form
    ((1, 2, 1), 0.45274991578002423735),
    ((3, 1, 0.01), 0.61028065788987517669),
    ((2, 1, 0.5), 0.55659360098446314797),
])
def test_solve_Q(masses, expected):
    p = EulerProblem(*masses)
    Q = solve_Q(p)
    assert Q == pytest.approx(expected, abs=1e-13)
    assert abs(euler_residual(p, Q)) < 1e-13


def test_solve_Q_agrees_with_force_balance_root():
    rng = np.random.default_rng(5)
    for _ in range(30):
        m = rng.uniform(0.05, 20, size=3)
        oracle = bisect(lambda q: force_balance_gap(*m, q), 1e-6, 1 - 1e-6)
        assert solve_Q(EulerProblem(*m)) == pytest.approx(oracle, abs=1e-11)


def test_heavier_body2_root_below_half():
    assert solve_Q(EulerProblem(1, 2, 1)) < 0.5


def test_midpoint_residual():
    assert abs(midpoint_residual(1, 1, 0.7)) < 1e-15
    assert abs(midpoint_residual(1, 2, 0.7)) > 1e-2
    assert abs(midpoint_residual(5, 5, 1e-6)) < 1e-15


def test_antisymmetry_random():
    rng = np.random.default_rng(17)
    for _ in range(100):
        m1, m2, m3 = rng.uniform(0.01, 100, size=3)
        Q = rng.uniform(0.05, 0.95)
        a = euler_residual(EulerProblem(m1, m2, m3), Q)
        b = euler_residual(EulerProblem(m2, m1, m3), 1 - Q)
        assert abs(a + b) <= 1e-13 * max(1.0, abs(a))


@pytest.mark.parametrize("masses", [(1, 1, 1), (1, 2, 1), (3, 1, 0.01)])
def test_collinear_solution_is_central(masses):
    Q = solve_Q(EulerProblem(*masses))
    cfg = Configuration([0, 1, Q], masses)
    met = metrics(cfg)
    assert cc_residual(cfg, met.potential_U / met.inertia_I).sup_norm < 1e-10


def test_antisymmetry_exact_for_dyadic_Q():
    # with 1 - Q exact the two evaluations mirror each other term by term
    rng = np.random.default_rng(29)
    for _ in range(100):
        m1, m2, m3 = rng.uniform(0.01, 100, size=3)
        Q = rng.integers(1, 2**20) / 2**20
        a = euler_residual(EulerProblem(m1, m2, m3), Q)
        assert abs(a + euler_residual(EulerProblem(m2, m1, m3), 1 - Q)) < 1e-13


def test_single_sign_change_on_grid():
    rng = np.random.default_rng(23)
    grid = np.linspace(0, 1, 10_002)[1:-1]
    for _ in range(200):
        p = EulerProblem(*np.exp(rng.uniform(np.log(0.01), np.log(100), size=3)))
        values = np.array([euler_residual(p, q) for q in grid])
        assert np.count_nonzero(np.diff(np.sign(values)) != 0) == 1


@pytest.mark.parametrize("m1", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("m3", [0.01, 1.0, 100.0])
def test_equal_outer_masses_solve_to_half(m1, m3):
    assert solve_Q(EulerProblem(m1, m1, m3)) == pytest.approx(0.5, abs=1e-13)


def test_bracket_failure_is_reported(monkeypatch):
    import polygon_cc.euler_collinear as ec

    monkeypatch.setattr(ec, "euler_residual", lambda problem, Q: 1.0)
    with pytest.raises(BracketError):
        ec.solve_Q(EulerProblem(1, 1, 1))
