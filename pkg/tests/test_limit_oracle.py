import math

import numpy as np
import pytest

from tailcens.distributions import Burr, Frechet, Pareto
from tailcens.exceptions import DomainError, ParameterError
from tailcens.limit_oracle import (GaussianFunctionalConfig, functional_weights, gaussian_functional_variance_formula,
                                   gaussian_functional_variance_mc, numeric_identity, pareto_identity_closed_form)


def test_closed_form_values():
    assert pareto_identity_closed_form(1.5, 0.5, 1.0, 8.0) == pytest.approx(0.998046875, rel=1e-15)
    assert pareto_identity_closed_form(1.5, 0.5, 0.7, math.inf) == 0.7
    assert pareto_identity_closed_form(1.5, 0.5, 0.7, 1.0) == 0.0


def test_closed_form_increasing_and_bounded():
    T = np.logspace(0, 6, 50)
    v = [pareto_identity_closed_form(1.01, 0.3, 0.7, t) for t in T]
    assert np.all(np.diff(v) >= 0) and max(v) <= 0.7


def test_closed_form_domain():
    with pytest.raises(DomainError):
        pareto_identity_closed_form(1.5, 1.2, 1.0, 8.0)
    with pytest.raises(DomainError):
        pareto_identity_closed_form(1.5, 0.5, 1.0, 0.5)


def test_numeric_pareto_example():
    val = numeric_identity(Pareto(0.7), 2.0, 0.4, 1.0, 100.0)
    assert abs(val - 0.7 * (1 - 100 ** (-2 / (0.4 * 0.7)))) < 1e-8


@pytest.mark.parametrize("beta", [1.01, 1.5, 2.0])
@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("gamma1", [0.4, 0.7, 1.0])
def test_numeric_matches_closed_form(beta, p, gamma1):
    for t in (1.0, 37.0):
        val = numeric_identity(Pareto(gamma1), beta, p, t, 50.0 * t)
        assert abs(val - pareto_identity_closed_form(beta, p, gamma1, 50.0)) <= 1e-8


def test_numeric_burr_limit():
    val = numeric_identity(Burr(0.4, 0.25), 1.01, 0.3, 1e6, 1e9)
    assert abs(val - 0.4) < 0.02


def test_numeric_frechet_approaches_gamma1():
    errs = [abs(numeric_identity(Frechet(0.7), 1.5, 0.5, t, 1e3 * t) - 0.7) for t in (1.0, 10.0, 1e3, 1e6)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-3


def test_numeric_empty_interval_and_domain():
    assert numeric_identity(Burr(0.4, 0.25), 1.5, 0.5, 3.0, 3.0) == 0.0
    with pytest.raises(DomainError):
        numeric_identity(Pareto(0.4), 1.5, 0.5, 3.0, 2.0)


def test_variance_formula():
    assert gaussian_functional_variance_formula(0.3, 1.5) == pytest.approx(3.75, rel=1e-15)
    assert gaussian_functional_variance_formula(0.75, 1.01) == pytest.approx(1.333464, abs=1e-6)
    assert gaussian_functional_variance_formula(0.4, 1 + 1e-12) == pytest.approx(1 / 0.4, rel=1e-9)
    with pytest.raises(DomainError):
        gaussian_functional_variance_formula(0.4, 1.0)


@pytest.mark.parametrize("beta", [1.01, 1.5, 2.0, 3.0])
def test_weights_integrate_a_linear_path_exactly(beta):
    # W(s) = s: int_0^1 s^(beta-2) s ds = 1/beta; the trapezoid error is O(h^2)
    m = 2000
    c = functional_weights(beta, m)
    assert np.sum(c) / m == pytest.approx(1 / beta, rel=1e-5)


def test_weights_covariance_matches_theory():
    # Var(int s^(beta-2) W ds) for standard W is sum c_l^2 / m = 2 / (beta (2 beta - 1))
    for beta in (1.01, 1.5, 2.0):
        c = functional_weights(beta, 10_000)
        assert np.sum(c * c) / 10_000 == pytest.approx(2 / (beta * (2 * beta - 1)), rel=2e-3)


def test_mc_small_run():
    cfg = GaussianFunctionalConfig(0.5, 2.0, paths=20_000, grid_points=1000, seed=4)
    res = gaussian_functional_variance_mc(cfg)
    truth = 8 / 3
    assert res.variance == pytest.approx(truth, rel=0.05)
    assert abs(res.mean) < 3 * math.sqrt(res.variance / cfg.paths)
    assert res.integral_variance == pytest.approx(2 * 0.5 / (2.0 * 3.0), rel=0.05)
    again = gaussian_functional_variance_mc(cfg)
    assert again == res


def test_mc_error_shrinks_with_paths():
    f = gaussian_functional_variance_formula(0.5, 2.0)

    def mse(paths):
        return np.mean([(gaussian_functional_variance_mc(
            GaussianFunctionalConfig(0.5, 2.0, paths=paths, grid_points=1000, seed=s)).variance - f) ** 2
            for s in range(5)])

    assert mse(40_000) < 0.6 * mse(10_000)


def test_config_validation():
    for kw in ({"beta": 1.0}, {"p": 1.0}, {"grid_points": 500}, {"paths": 5000}, {"chunk": 0}):
        with pytest.raises(ParameterError):
            GaussianFunctionalConfig(**{"p": 0.5, "beta": 1.5, **kw})
