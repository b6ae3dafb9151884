"""Tail-index estimators for randomly right-censored heavy-tailed data.

Notation, with ``i = 1..n`` counting from the top::

    Z_(i)  = Z_{n-i+1:n}          the i-th largest observation
    d_i    = delta_[n-i+1:n]      its concomitant indicator
    L_i(k) = log(Z_(i) / Z_{n-k:n})

All estimators use ``L_i(k)`` for ``i <= k``; they only see ratios of
observations, so rescaling the data leaves them unchanged.

Scalar functions (``hill``, ``efg``, ``na_tr``, ...) evaluate one ``k``.
:func:`trace` evaluates an estimator on a grid of ``k`` at once and flags
entries where it is undefined instead of raising.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .exceptions import AllCensoredInTail, DegenerateKM, DomainError, ParameterError, SigmaPUndefined
from .survival import km_curve

__all__ = [
    "ESTIMATORS",
    "EstimatorTrace",
    "LimitParams",
    "hill",
    "phat",
    "efg",
    "worms",
    "br",
    "mns",
    "na_tr",
    "trace",
    "asymptotic_mean_var",
    "variance_gap",
]

ESTIMATORS = ("hill", "phat", "efg", "worms", "br", "mns", "na_tr")


def _check_k(s, k):
    if int(k) != k or not 1 <= k < s.n:
        raise DomainError(f"k must be an integer with 1 <= k < n = {s.n}, got {k!r}")
    return int(k)


def _logratios(s, k):
    return s.log_top[:k] - s.log_top[k]


def hill(s, k):
    """Hill estimator on the top ``k`` observed values."""
    k = _check_k(s, k)
    return float(np.mean(_logratios(s, k)))


def phat(s, k):
    """Fraction of uncensored values among the top ``k``."""
    k = _check_k(s, k)
    return float(np.count_nonzero(s.top_delta[:k]) / k)


def efg(s, k):
    """Hill estimator divided by ``phat(k)``."""
    p = phat(s, k)
    if p == 0:
        raise AllCensoredInTail(f"all top {k} observations are censored")
    return hill(s, k) / p


def worms(s, k):
    """Kaplan-Meier weighted Hill estimator.

    Weights are ratios of the full-sample Kaplan-Meier curve,
    ``S(Z_(i)-) / S(Z_{n-k:n})``.
    """
    k = _check_k(s, k)
    curve = km_curve(s)
    den = curve.survival[s.n - k - 1]
    if den == 0:
        raise DegenerateKM(f"Kaplan-Meier survival vanishes at Z_(n-{k}:n)")
    i = np.arange(1, k + 1)
    ratio = curve.before(s.n - i) / den
    return float(np.sum(s.top_delta[:k] / i * ratio * _logratios(s, k)))


def br(s, k):
    """Extreme Kaplan-Meier estimator in explicit product form.

    Weight of term ``i`` is ``prod_{j=i+1}^{k} ((j-1)/j)**d_j``.  Algebraically
    identical to :func:`worms`.
    """
    k = _check_k(s, k)
    j = np.arange(1, k + 1)
    factor = np.where(s.top_delta[:k], (j - 1) / j, 1.0)
    # suffix[i] = prod_{j=i+1}^{k} (0-based: factor[i:]); empty product = 1
    suffix = np.append(np.cumprod(factor[::-1])[::-1], 1.0)[1:]
    return float(np.sum(s.top_delta[:k] / j * suffix * _logratios(s, k)))


def _hazard_tail(s, k):
    # H_i = sum_{j<=i} d_j / j, so the NA tail ratio is exp(-(H_k - H_i))
    j = np.arange(1, k + 1)
    return np.cumsum(s.top_delta[:k] / j)


def mns(s, k):
    """Nelson-Aalen weighted Hill estimator."""
    k = _check_k(s, k)
    i = np.arange(1, k + 1)
    hz = _hazard_tail(s, k)
    ratio = np.exp(-(hz[-1] - hz))
    return float(np.sum(s.top_delta[:k] / i * ratio * _logratios(s, k)))


def _ratio_power(exponent, a):
    if exponent == "a":
        return a
    if exponent == "a-1":
        return a - 1.0
    raise ParameterError(f"exponent must be 'a' or 'a-1', got {exponent!r}")


def na_tr(s, k, beta, m_n, exponent="a"):
    """Weighted and truncated Nelson-Aalen estimator.

    With ``a = beta / phat(k)`` and ``R_i = prod_{j=i+1}^{k} exp(-d_j / j)``
    the Nelson-Aalen tail ratio::

        a**2 * sum_{i=m_n}^{k} d_i / i * R_i**e * L_i(k)

    ``exponent="a"`` (default) uses ``e = a``: the weight ``R_i**(a-1)`` times
    the factor ``R_i`` carried by the jump of ``F_n`` at ``Z_(i)``.  This is
    consistent for ``gamma1``.  ``exponent="a-1"`` drops that factor; it
    is a shorter closed form that converges to
    ``beta**2 gamma1 / (beta - p)**2`` instead, so it is kept only for
    comparison.

    The inner sums come from one cumulative sum, so the cost is O(k).
    """
    k = _check_k(s, k)
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    if int(m_n) != m_n or not 1 <= m_n <= k:
        raise ParameterError(f"truncation index must satisfy 1 <= m_n <= k = {k}, got {m_n!r}")
    m_n = int(m_n)
    p = phat(s, k)
    if p == 0:
        raise AllCensoredInTail(f"all top {k} observations are censored")
    a = beta / p
    e = _ratio_power(exponent, a)
    hz = _hazard_tail(s, k)
    i = np.arange(m_n, k + 1)
    w = np.exp(-e * (hz[-1] - hz[m_n - 1:]))
    terms = s.top_delta[m_n - 1:k] / i * w * _logratios(s, k)[m_n - 1:]
    return float(a * a * np.sum(terms))


@dataclass(frozen=True, eq=False)
class EstimatorTrace:
    """Estimator values over a grid of ``k``.

    ``defined`` is False where the estimator does not exist (``estimates`` is
    NaN there).  ``degenerate`` marks ``k`` with ``Z_{n-k:n} == Z_{n:n}``, where
    every log ratio is 0 and so is the estimate.
    """

    k_values: np.ndarray
    estimates: np.ndarray
    estimator_id: str
    defined: np.ndarray
    degenerate: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        k = np.asarray(self.k_values, dtype=np.int64)
        if np.any(np.diff(k) <= 0):
            raise DomainError("k_values must be strictly increasing")
        object.__setattr__(self, "k_values", k)
        object.__setattr__(self, "estimates", np.asarray(self.estimates, dtype=float))
        object.__setattr__(self, "defined", np.asarray(self.defined, dtype=bool))
        object.__setattr__(self, "degenerate", np.asarray(self.degenerate, dtype=bool))

    def __len__(self):
        return self.k_values.size

    def at(self, k):
        idx = np.searchsorted(self.k_values, k)
        if idx == len(self) or self.k_values[idx] != k:
            raise KeyError(k)
        return float(self.estimates[idx])


MnRule = Union[int, Callable[[int], int]]


def _resolve_m(m_n, ks):
    if callable(m_n):
        return np.array([m_n(int(k)) for k in ks], dtype=np.int64)
    return np.full(ks.size, int(m_n), dtype=np.int64)


def _tail_matrix(s, ks):
    """Log-ratio matrix ``L[r, i-1] = L_i(ks[r])`` and the mask ``i <= ks[r]``."""
    kmax = int(ks[-1])
    i = np.arange(1, kmax + 1)
    mask = i[None, :] <= ks[:, None]
    lr = np.where(mask, s.log_top[None, :kmax] - s.log_top[ks][:, None], 0.0)
    return i, mask, lr


def trace(s, estimator_id, k_values, beta=None, m_n: Optional[MnRule] = None, exponent="a"):
    """Evaluate an estimator for every ``k`` in ``k_values``.

    ``beta``, ``m_n`` and ``exponent`` are only used by ``"na_tr"``; ``m_n``
    is an int or a callable ``k -> m_n``.  Values of ``k`` must satisfy
    ``2 <= k < n``.
    """
    ks = np.asarray(k_values, dtype=np.int64)
    params = {}
    if ks.size == 0:
        empty = np.empty(0)
        return EstimatorTrace(ks, empty, estimator_id, empty.astype(bool), empty.astype(bool), params)
    if np.any(np.diff(ks) <= 0) or ks[0] < 2 or ks[-1] >= s.n:
        raise DomainError(f"k_values must be increasing within [2, n-1] = [2, {s.n - 1}]")
    if estimator_id not in ESTIMATORS:
        raise ParameterError(f"unknown estimator {estimator_id!r}; expected one of {ESTIMATORS}")

    kmax = int(ks[-1])
    d = s.top_delta[:kmax].astype(float)
    nd = np.cumsum(d)[ks - 1]
    ph = nd / ks
    degenerate = s.log_top[ks] == s.log_top[0]
    defined = np.ones(ks.size, dtype=bool)

    if estimator_id in ("hill", "efg", "phat"):
        csum = np.cumsum(s.log_top[:kmax])[ks - 1]
        h = csum / ks - s.log_top[ks]
        if estimator_id == "hill":
            est = h
        elif estimator_id == "phat":
            est = ph
        else:
            defined = ph > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                est = np.where(defined, h / ph, np.nan)
    else:
        i, mask, lr = _tail_matrix(s, ks)
        a = d / i
        if estimator_id == "worms":
            curve = km_curve(s)
            sb = curve.before(s.n - np.arange(1, kmax + 1))  # S(Z_(i)-), i = 1..kmax
            den = sb[ks - 1]  # S(Z_(k)-) = S(Z_{n-k:n})
            defined = den > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                w = sb[None, :kmax] / den[:, None]
        elif estimator_id == "br":
            with np.errstate(divide="ignore"):
                lf = np.where(d > 0, np.log1p(-1.0 / i), 0.0)
            lf[0] = 0.0  # j = 1 never enters a product over j >= i+1 >= 2
            c = np.cumsum(lf)
            w = np.exp(c[ks - 1][:, None] - c[None, :])
        else:
            hz = np.cumsum(a)
            gap = hz[ks - 1][:, None] - hz[None, :]
            if estimator_id == "mns":
                w = np.exp(-gap)
            else:
                if beta is None or not beta > 1:
                    raise ParameterError(f"beta must exceed 1, got {beta}")
                if m_n is None:
                    raise ParameterError("na_tr needs a truncation rule m_n")
                params = {"beta": float(beta), "m_n": getattr(m_n, "__name__", m_n), "exponent": exponent}
                ms = _resolve_m(m_n, ks)
                defined = (ph > 0) & (ms >= 1) & (ms <= ks)
                with np.errstate(divide="ignore"):
                    alpha = np.where(ph > 0, beta / np.where(ph > 0, ph, 1.0), 0.0)
                w = np.exp(-_ratio_power(exponent, alpha)[:, None] * gap)
                mask = mask & (i[None, :] >= ms[:, None])
        terms = np.where(mask, a[None, :] * w * lr, 0.0)
        est = terms.sum(axis=1)
        if estimator_id == "na_tr":
            est = alpha * alpha * est
        est = np.where(defined, est, np.nan)

    return EstimatorTrace(ks, est, estimator_id, defined, degenerate & defined, params)


@dataclass(frozen=True)
class LimitParams:
    """Inputs of the limiting normal law of the truncated NA estimator.

    ``lam`` is the limit of ``sqrt(k) A_1(h)`` and ``tau1 <= 0`` the
    second-order parameter; both are user-supplied, never estimated.
    """

    p: float
    beta: float
    gamma1: float
    tau1: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ParameterError(f"p must lie in (0, 1), got {self.p}")
        if not self.beta > 1:
            raise ParameterError(f"beta must exceed 1, got {self.beta}")
        if not self.gamma1 > 0:
            raise ParameterError(f"gamma1 must be positive, got {self.gamma1}")
        if not self.tau1 <= 0:
            raise ParameterError(f"tau1 must be <= 0, got {self.tau1}")


def asymptotic_mean_var(lp):
    """Mean and variance of the normal limit of ``sqrt(k) (estimate - gamma1)``.

    ``mu = lam * beta / (beta - p * tau1)`` and
    ``sigma^2 = gamma1^2 * beta^2 / (p * (2 beta - 1))``.
    """
    mu = lp.lam * lp.beta / (lp.beta - lp.p * lp.tau1)
    sigma2 = lp.beta**2 / (lp.p * (2.0 * lp.beta - 1.0)) * lp.gamma1**2
    return mu, sigma2


def variance_gap(beta, p, gamma1):
    """Asymptotic variance of ``na_tr`` minus that of ``mns`` (``p > 1/2`` only).

    The untruncated variance is ``gamma1^2 p / (2p - 1)``; the difference
    factors as ``gamma1^2 (beta - p)(2 p beta - p - beta) / (p (2p-1)(2 beta-1))``
    and is negative for ``1 < beta < p / (2p - 1)``.
    """
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    if not 0 < p < 1:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    if p <= 0.5:
        raise SigmaPUndefined(f"untruncated variance needs p > 1/2, got {p}")
    return gamma1**2 * (beta - p) * (2 * p * beta - p - beta) / (p * (2 * p - 1) * (2 * beta - 1))
