import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from wavepack import variational as v
from wavepack.errors import DomainError, InvalidInput, InvalidRegime, NoSolution, StepTooLarge

FP, TP = v.FreeParams, v.TrapParams


# --- free particle ------------------------------------------------------------

@pytest.mark.parametrize(
    "y, gamma, delta0, expected",
    [(1.0, 0.0, 1.0, 0.5), (1.0, -0.5, 1.0, 0.0), (4.0, -2.0, 2.0, -0.875)],
)
def test_free_rhs(y, gamma, delta0, expected):
    assert v.free_rhs(y, FP(gamma, delta0)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("y", [0.0, -1.0])
def test_free_rhs_domain(y):
    with pytest.raises(DomainError):
        v.free_rhs(y, FP(1.0, 1.0))


def test_params_validate_width():
    with pytest.raises(InvalidInput):
        FP(1.0, 0.0)
    with pytest.raises(InvalidInput):
        TP(1.0, -0.5)


def test_free_potential_values():
    assert v.free_potential(0.0, FP(-3.0, 0.7)) == 0.0
    assert v.free_potential(16.0, FP(-0.5, 2.0)) == pytest.approx(2.0, abs=1e-14)


def test_free_potential_repulsive_is_decreasing():
    ys = np.linspace(0.0, 50.0, 2001)
    vs = np.array([v.free_potential(y, FP(1.0, 1.0)) for y in ys])
    assert np.all(np.diff(vs) < 0)


def test_free_critical_spread():
    c = v.free_critical(FP(-0.5, 0.5))
    assert c.delta_c == pytest.approx(1.0)
    assert c.regime is v.Regime.SPREAD


def test_free_critical_collapse():
    c = v.free_critical(FP(-2.0, 2.0))
    assert c.delta_c == pytest.approx(0.25)
    assert c.regime is v.Regime.COLLAPSE


def test_free_critical_barrier_location_matches_numeric_maximum():
    p = FP(-0.5, 2.0)
    c = v.free_critical(p)
    assert c.y_c == pytest.approx(16.0, abs=1e-12)
    res = minimize_scalar(lambda y: -v.free_potential(y, p), bounds=(0.1, 100.0), method="bounded",
                          options={"xatol": 1e-10})
    assert res.x == pytest.approx(16.0, abs=1e-5)


@pytest.mark.parametrize("gamma", [0.0, 0.1, 2.0])
def test_free_critical_repulsive(gamma):
    c = v.free_critical(FP(gamma, 2.0))
    assert c.regime is v.Regime.SPREAD
    assert c.y_c is None and c.delta_c is None


def test_free_critical_marginal():
    assert v.free_critical(FP(-0.5, 1.0)).regime is v.Regime.MARGINAL


# --- harmonic trap ----------------------------------------------------------------

@pytest.mark.parametrize(
    "delta, beta, expected, tol",
    [(1.0, 0.0, 2.0, 1e-15), (0.5, -1.625, -2.25, 1e-14), (0.75, -0.8, 0.2069, 1e-4)],
)
def test_trap_D(delta, beta, expected, tol):
    assert v.trap_D(TP(beta, delta)) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize(
    "delta, beta, y, expected",
    [(0.5, -1.625, 0.25, 0.0), (1.0, 0.0, 1.0, -2.0), (1.0, 0.0, 0.5, 0.0)],
)
def test_trap_rhs(delta, beta, y, expected):
    assert v.trap_rhs(y, TP(beta, delta)) == pytest.approx(expected, abs=1e-14)


def test_trap_rhs_domain():
    with pytest.raises(DomainError):
        v.trap_rhs(0.0, TP(-1.0, 0.5))


def test_trap_potential_values():
    assert v.trap_potential(0.0, TP(-1.625, 0.5)) == 0.0
    p = TP(-1.625, 0.5)
    h = 1e-6
    dV = (v.trap_potential(0.25 + h, p) - v.trap_potential(0.25 - h, p)) / (2 * h)
    assert abs(dV) < 1e-8


def _stationary_points(p, y_max=5.0, n=200001):
    ys = np.linspace(1e-6, y_max, n)
    dV = -np.array([v.trap_rhs(y, p) for y in ys])
    idx = np.nonzero(np.sign(dV[1:]) != np.sign(dV[:-1]))[0]
    return [(ys[i], "min" if dV[i] < 0 else "max") for i in idx]


def test_trap_potential_repulsive_has_a_minimum():
    # for beta = 1, delta = 1 the potential has a shallow maximum near the
    # origin and a minimum beyond it; the minimum is the equilibrium width
    pts = _stationary_points(TP(1.0, 1.0))
    kinds = [k for _, k in pts]
    assert kinds == ["max", "min"]


def test_extrema_threshold():
    r = v.trap_extrema_threshold(TP(1.0, 1.0))
    assert r.threshold == pytest.approx(3 * 4 ** (-1 / 3), abs=1e-12)
    assert r.threshold == pytest.approx(1.8899, abs=1e-4)
    assert r.exists
    r = v.trap_extrema_threshold(TP(0.01, 0.2))
    assert v.trap_D(TP(0.01, 0.2)) == pytest.approx(25.14, abs=1e-12)
    # direct arithmetic: 3 * 4**(1/3) * (0.01/4)**(2/3)
    assert r.threshold == pytest.approx(0.0877205, abs=1e-6)
    assert r.exists
    tiny = v.trap_extrema_threshold(TP(1e-12, 1.0))
    assert tiny.threshold < 1e-7 and tiny.exists


@pytest.mark.parametrize("beta", [0.0, -1.0])
def test_extrema_threshold_rejects_attractive(beta):
    with pytest.raises(InvalidRegime):
        v.trap_extrema_threshold(TP(beta, 1.0))


def _ymin_oracle(p):
    # Y_min = u^2 with u the positive root of 4u^3 - D u - |beta| = 0
    roots = np.roots([4.0, 0.0, -v.trap_D(p), -abs(p.beta)])
    u = max(r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0)
    return u * u


def test_ymin_on_locus():
    assert v.trap_ymin(TP(-1.625, 0.5)) == pytest.approx(0.25, abs=1e-10)


def test_ymin_small_coupling_limit():
    assert v.trap_ymin(TP(-1e-12, 1.0)) == pytest.approx(0.5, abs=1e-9)


def test_ymin_against_cubic_root_oracle():
    p = TP(-0.8, 0.75)
    assert v.trap_ymin(p) == pytest.approx(0.378, abs=1e-3)
    assert v.trap_ymin(p) == pytest.approx(_ymin_oracle(p), rel=1e-11)


@pytest.mark.parametrize("beta", [0.0, 0.5])
def test_ymin_requires_attractive(beta):
    with pytest.raises(InvalidRegime):
        v.trap_ymin(TP(beta, 0.5))


def test_ymin_random_against_oracle():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = TP(-rng.uniform(1e-3, 5.0), rng.uniform(0.1, 2.0))
        y = v.trap_ymin(p)
        assert y == pytest.approx(_ymin_oracle(p), rel=1e-10)
        assert v.trap_rhs(y, p) == pytest.approx(0.0, abs=1e-10 * max(1.0, abs(v.trap_D(p))))


def test_beta_for_constant_width():
    assert v.beta_for_constant_width(0.5) == 1.625
    assert v.beta_for_constant_width(0.75) == pytest.approx(0.06771, abs=1e-5)
    assert v.beta_for_constant_width(3 ** -0.25) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(NoSolution):
        v.beta_for_constant_width(3 ** -0.25 + 1e-9)


def test_stability_frequency_values():
    p = TP(-v.beta_for_constant_width(0.75), 0.75)
    assert v.stability_frequency(p) == pytest.approx(0.3215, abs=1e-3)
    assert v.stability_frequency(TP(-1e-12, 0.9)) == pytest.approx(1 / math.pi, abs=1e-6)
    assert v.stability_frequency(TP(-0.8, 0.75)) == pytest.approx(0.381, abs=5e-3)


def test_stability_frequency_matches_finite_difference_linearization():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = TP(-rng.uniform(0.01, 3.0), rng.uniform(0.2, 1.5))
        y = v.trap_ymin(p)
        h = 1e-5 * y
        k = -(v.trap_rhs(y + h, p) - v.trap_rhs(y - h, p)) / (2 * h)
        assert v.stability_frequency(p) == pytest.approx(math.sqrt(k) / (2 * math.pi), rel=1e-7)


# --- integrate_width ------------------------------------------------------------------

def test_free_linear_closed_form():
    s = v.integrate_width(FP(0.0, 1.0), 1.0, 0.0, 2.0, 1e-3)
    assert s.status is v.SeriesStatus.COMPLETED
    assert s.t[-1] == pytest.approx(2.0)
    assert s.y[-1] == pytest.approx(2.0, abs=1e-6)
    np.testing.assert_allclose(s.y, 1.0 + s.t**2 / 4.0, atol=1e-12)


def test_trap_fixed_point_holds():
    s = v.integrate_width(TP(-1.625, 0.5), 0.25, 0.0, 50.0, 1e-3)
    assert np.max(np.abs(s.y - 0.25)) < 1e-9


def _collapse_time_oracle(gamma, delta0):
    # release from rest: t = int_0^Y0 dY / sqrt(2 (V(Y0) - V(Y))), with Y = Y0 (1 - s^2)
    y0 = delta0**2
    V = lambda y: -y / (2 * delta0**2) - 2 * gamma * math.sqrt(y)
    slope = -1 / (2 * delta0**2) - gamma / math.sqrt(y0)

    def f(s):
        if s == 0.0:
            return 2 * y0 / math.sqrt(2 * y0 * slope)
        return 2 * y0 * s / math.sqrt(2 * (V(y0) - V(y0 * (1 - s * s))))

    return quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def test_free_collapse_time_matches_quadrature():
    s = v.integrate_width(FP(-2.0, 2.0), 4.0, 0.0, 10.0, 1e-3)
    assert s.status is v.SeriesStatus.COLLAPSED
    t_c = _collapse_time_oracle(-2.0, 2.0)
    assert t_c == pytest.approx(2.830876, abs=1e-6)
    assert abs(s.stop_time - t_c) <= 1e-3
    assert np.all(s.y > v.Y_FLOOR)
    assert np.all(np.diff(s.t) > 0)


def test_step_limit():
    with pytest.raises(StepTooLarge):
        v.integrate_width(FP(0.0, 1.0), 1.0, 0.0, 1.0, 0.02)


def test_integrate_rejects_bad_start():
    with pytest.raises(DomainError):
        v.integrate_width(FP(0.0, 1.0), 0.0, 0.0, 1.0, 1e-3)


def _energy(series):
    V = np.array([v.effective_potential(y, series.params) for y in series.y])
    return 0.5 * series.ydot**2 + V


@pytest.mark.parametrize(
    "params, y0, ydot0",
    [
        (FP(-0.5, 0.5), 0.25, 0.0),
        (FP(1.0, 1.0), 1.0, 0.3),
        (TP(-0.8, 0.75), 0.5625, 0.0),
        (TP(1.0, 0.75), 0.5625, 0.0),
        (TP(-1.625, 0.5), 0.3, 0.1),
    ],
)
def test_energy_invariant(params, y0, ydot0):
    t_end = 10.0
    s = v.integrate_width(params, y0, ydot0, t_end, 1e-3)
    E = _energy(s)
    assert np.max(np.abs(E - E[0])) / t_end < 1e-8


def test_force_is_minus_potential_gradient():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        y = rng.uniform(0.05, 10.0)
        h = 1e-6 * max(1.0, y)
        for p, rhs in (
            (FP(rng.uniform(-3, 3), rng.uniform(0.2, 3)), v.free_rhs),
            (TP(rng.uniform(-3, 3), rng.uniform(0.2, 3)), v.trap_rhs),
        ):
            V = lambda yy: v.effective_potential(yy, p)
            fd = -(V(y + h) - V(y - h)) / (2 * h)
            expected = rhs(y, p)
            assert fd == pytest.approx(expected, rel=1e-5, abs=1e-5 * max(1.0, abs(expected)))


def test_ymin_is_a_potential_minimum():
    for delta, beta in [(0.5, -1.625), (0.75, -0.8), (1.2, -0.3), (0.3, -4.0)]:
        p = TP(beta, delta)
        y = v.trap_ymin(p)
        assert abs(v.trap_rhs(y, p)) < 1e-10
        assert v.trap_rhs(y * (1 - 1e-4), p) > 0 > v.trap_rhs(y * (1 + 1e-4), p)


def test_locus_and_ymin_consistent():
    for delta in np.linspace(0.1, 3 ** -0.25, 40, endpoint=False)[1:]:
        p = TP(-v.beta_for_constant_width(delta), delta)
        assert v.trap_ymin(p) == pytest.approx(delta**2, abs=1e-9)


def _integrated_regime(series):
    if series.collapsed:
        return v.Regime.COLLAPSE
    if series.ydot[-1] > 0 and series.y[-1] > series.y[0]:
        return v.Regime.SPREAD
    return None


def test_regime_map_agrees_with_integration():
    for gamma in np.linspace(-2.0, -0.1, 20):
        for delta0 in np.linspace(0.1, 3.0, 20):
            p = FP(gamma, delta0)
            s = v.integrate_width(p, delta0**2, 0.0, 200.0, 1e-3)
            assert _integrated_regime(s) is v.free_critical(p).regime, (gamma, delta0)


def test_small_perturbation_frequency():
    for delta, beta in [(0.75, -0.8), (0.5, -1.625), (0.75, -v.beta_for_constant_width(0.75))]:
        p = TP(beta, delta)
        y_min = v.trap_ymin(p)
        s = v.integrate_width(p, y_min * (1 + 1e-3), 0.0, 20.0, 1e-3)
        d = s.y - y_min
        up = s.t[1:][(d[:-1] < 0) & (d[1:] >= 0)]
        f = (up.size - 1) / (up[-1] - up[0])
        assert f == pytest.approx(v.stability_frequency(p), rel=0.01)
