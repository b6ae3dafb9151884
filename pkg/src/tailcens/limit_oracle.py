"""Numerical checks of the limit theory behind the truncated NA estimator.

Two targets:

* the truncated tail identity
  ``(beta/p) * int_1^T y**-1 * (Fbar(t y) / Fbar(t))**(beta/p) dy -> gamma1``,
  in closed form for exact Pareto and by quadrature for any law;
* the variance of the Gaussian functional ::

      N(beta) = c1 * int_0^1 s**(beta-2) W1(s) ds
              + beta * int_0^1 s**(beta-2) W2(s) ds
              - (beta/p) * W1(1),        c1 = beta (p + beta - 1) / p,

  where ``W1``, ``W2`` are independent Brownian motions with variances
  ``p s`` and ``(1-p) s``.  Its variance is ``beta**2 / (p (2 beta - 1))``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import DomainError, ParameterError, QuadratureError

__all__ = [
    "pareto_identity_closed_form",
    "numeric_identity",
    "gaussian_functional_variance_formula",
    "GaussianFunctionalConfig",
    "GaussianFunctionalResult",
    "gaussian_functional_variance_mc",
    "functional_weights",
]


def _check_beta_p(beta, p, beta_min=1.0):
    if not beta > beta_min:
        raise DomainError(f"beta must exceed {beta_min:g}, got {beta}")
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def pareto_identity_closed_form(beta, p, gamma1, T):
    """``gamma1 * (1 - T**(-beta / (p gamma1)))`` for ``Fbar(x) = x**(-1/gamma1)``."""
    _check_beta_p(beta, p, beta_min=0.0)
    if not gamma1 > 0:
        raise DomainError(f"gamma1 must be positive, got {gamma1}")
    if not T >= 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if math.isinf(T):
        return float(gamma1)
    return float(-gamma1 * math.expm1(-beta / (p * gamma1) * math.log(T)))


def numeric_identity(spec, beta, p, t, u_t, tol=1e-10):
    """Quadrature of ``(beta/p) int_1^{u_t/t} y**-1 (Fbar(t y)/Fbar(t))**(beta/p) dy``.

    Integrated in ``s = log y``, where the integrand is smooth and bounded by 1.
    Raises :class:`QuadratureError` if the error estimate exceeds ``10 * tol``.
    """
    _check_beta_p(beta, p, beta_min=0.0)
    if not (t > 0 and u_t >= t):
        raise DomainError(f"need u_t >= t > 0, got t={t}, u_t={u_t}")
    sf_t = spec.survival(t)
    if not sf_t > 0:
        raise DomainError("survival at t must be positive")
    a = beta / p
    upper = math.log(u_t / t)
    if upper == 0:
        return 0.0
    log_sf_t = math.log(sf_t)

    def integrand(s):
        ratio = spec.survival(t * math.exp(s))
        if ratio <= 0:
            return 0.0
        return math.exp(a * (math.log(ratio) - log_sf_t))

    val, err = integrate.quad(integrand, 0.0, upper, epsabs=tol, epsrel=1e-12, limit=500)
    if not err <= 10 * tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} above tolerance {tol:.3g}")
    return a * val


def gaussian_functional_variance_formula(p, beta):
    """``beta**2 / (p (2 beta - 1))``."""
    _check_beta_p(beta, p)
    return beta**2 / (p * (2.0 * beta - 1.0))


@dataclass(frozen=True)
class GaussianFunctionalConfig:
    p: float
    beta: float
    paths: int = 100_000
    grid_points: int = 10_000
    seed: int = 0
    chunk: int = 1_000

    def __post_init__(self):
        if not self.beta > 1:
            raise ParameterError(f"beta must exceed 1, got {self.beta}")
        if not 0 < self.p < 1:
            raise ParameterError(f"p must lie in (0, 1), got {self.p}")
        if self.grid_points < 1000:
            raise ParameterError(f"grid_points must be >= 1000, got {self.grid_points}")
        if self.paths < 10_000:
            raise ParameterError(f"paths must be >= 10000, got {self.paths}")
        if self.chunk < 1:
            raise ParameterError(f"chunk must be >= 1, got {self.chunk}")


@dataclass(frozen=True)
class GaussianFunctionalResult:
    variance: float
    mean: float
    #: sample variance of int_0^1 s**(beta-2) W1(s) ds
    integral_variance: float
    paths: int


def functional_weights(beta, grid_points):
    """Weights turning grid increments into ``int_0^1 s**(beta-2) W(s) ds``.

    The grid is ``s_j = j/m``, ``j = 1..m``.  On ``[0, s_1]`` the path is taken
    linear, ``W(s) = W(s_1) s / s_1``, which integrates exactly against
    ``s**(beta-2)`` to ``s_1**(beta-1) / beta * W(s_1)``; the rest is the
    trapezoid rule.  Returns ``c`` with ``integral = sum_l c_l dW_l``.
    """
    m = int(grid_points)
    s = np.arange(1, m + 1) / m
    h = 1.0 / m
    f = s ** (beta - 2.0)
    # coefficient of W(s_j) in the quadrature
    wj = h * f
    wj[0] = 0.5 * h * f[0] + s[0] ** (beta - 1.0) / beta
    wj[-1] = 0.5 * h * f[-1]
    # W(s_j) = sum_{l<=j} dW_l, so dW_l collects the tail sum of wj
    return np.cumsum(wj[::-1])[::-1]


def gaussian_functional_variance_mc(cfg):
    """Monte Carlo variance of ``N(beta)`` over ``cfg.paths`` simulated paths.

    Paths are generated in chunks from independent child seeds of
    ``cfg.seed``; statistics are accumulated in chunk order.
    """
    m = cfg.grid_points
    c = functional_weights(cfg.beta, m)
    c1 = cfg.beta * (cfg.p + cfg.beta - 1.0) / cfg.p
    sd1 = math.sqrt(cfg.p / m)
    sd2 = math.sqrt((1.0 - cfg.p) / m)
    n_chunks = -(-cfg.paths // cfg.chunk)
    children = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    vals, ints = [], []
    done = 0
    for child in children:
        size = min(cfg.chunk, cfg.paths - done)
        rng = np.random.default_rng(child)
        dw1 = rng.standard_normal((size, m))
        i1 = sd1 * (dw1 @ c)
        w1_end = sd1 * dw1.sum(axis=1)
        del dw1
        dw2 = rng.standard_normal((size, m))
        i2 = sd2 * (dw2 @ c)
        del dw2
        vals.append(c1 * i1 + cfg.beta * i2 - cfg.beta / cfg.p * w1_end)
        ints.append(i1)
        done += size
    x = np.concatenate(vals)
    i1 = np.concatenate(ints)
    return GaussianFunctionalResult(
        variance=float(np.var(x, ddof=1)),
        mean=float(np.mean(x)),
        integral_variance=float(np.var(i1, ddof=1)),
        paths=cfg.paths,
    )
