"""Kaplan-Meier and Nelson-Aalen estimates of the lifetime survival function.

Both are step functions over the order statistics.  With ``r_i = n - i + 1``
subjects at risk at ``Z_{i:n}``::

    KM:  prod_{Z_{i:n} <= z} (1 - delta_[i:n] / r_i)
    NA:  prod_{Z_{i:n} <= z} exp(-delta_[i:n] / r_i)

Products are closed at ``z`` (right-continuous curves).  The tail ratios used
by the integral estimators instead compare the value just *before* the
``i``-th largest point with the value *at* the ``(k+1)``-th largest, which is
what makes the ratio the product over ``j = i+1..k``.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSample, DomainError

__all__ = [
    "SurvivalCurve",
    "km_curve",
    "na_curve",
    "km_survival",
    "na_survival",
    "na_tail_ratio",
    "km_tail_ratio",
    "loglog_curve",
]


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    """Survival estimate just after each order statistic.

    ``survival[i]`` is the estimate at ``support[i]`` including that point's
    own factor; :meth:`before` gives the value just before it.
    """

    support: np.ndarray
    survival: np.ndarray
    method: str

    def __call__(self, z):
        m = np.searchsorted(self.support, z, side="right")
        out = np.concatenate(([1.0], self.survival))[m]
        return float(out) if np.ndim(z) == 0 else out

    def before(self, index):
        """Survival just before the order statistic at 0-based ``index``."""
        index = np.asarray(index)
        out = np.where(index > 0, self.survival[np.maximum(index - 1, 0)], 1.0)
        return float(out) if out.ndim == 0 else out


def _at_risk(n):
    return np.arange(n, 0, -1, dtype=float)


def km_curve(sorted_sample):
    s = sorted_sample
    factors = 1.0 - s.delta_concomitant / _at_risk(s.n)
    return SurvivalCurve(s.z_sorted, np.cumprod(factors), "KM")


def na_curve(sorted_sample):
    s = sorted_sample
    hazard = np.cumsum(s.delta_concomitant / _at_risk(s.n))
    return SurvivalCurve(s.z_sorted, np.exp(-hazard), "NA")


def km_survival(sorted_sample, z):
    """Kaplan-Meier survival ``1 - F_n^(KM)(z)``."""
    return km_curve(sorted_sample)(z)


def na_survival(sorted_sample, z):
    """Nelson-Aalen survival ``1 - F_n^(NA)(z)``."""
    return na_curve(sorted_sample)(z)


def _check_ik(n, i, k):
    if not (1 <= i <= k < n):
        raise DomainError(f"need 1 <= i <= k < n, got i={i}, k={k}, n={n}")


def na_tail_ratio(sorted_sample, i, k):
    """``prod_{j=i+1}^{k} exp(-delta_[n-j+1:n] / j)``; equal to 1 when ``i == k``."""
    s = sorted_sample
    _check_ik(s.n, i, k)
    j = np.arange(i + 1, k + 1)
    return float(np.exp(-np.sum(s.top_delta[j - 1] / j)))


def km_tail_ratio(sorted_sample, i, k):
    """Kaplan-Meier counterpart of :func:`na_tail_ratio`.

    Evaluated from the full KM curve rather than the tail product, as
    ``S(Z_{n-i+1:n}-) / S(Z_{n-k:n})``.
    """
    s = sorted_sample
    _check_ik(s.n, i, k)
    curve = km_curve(s)
    den = curve.survival[s.n - k - 1]
    return float(curve.before(s.n - i) / den)


def loglog_curve(sorted_sample):
    """Points ``(log z, log S_NA(z))`` at each distinct uncensored value.

    Points where the survival estimate is zero are dropped.  Returns two
    arrays.  Raises :class:`DegenerateSample` with fewer than two usable
    distinct points.
    """
    s = sorted_sample
    curve = na_curve(s)
    z = s.z_sorted
    # last index of each run of tied values carries the closed-at-z value
    last = np.r_[z[1:] != z[:-1], True]
    has_event = np.zeros(s.n, dtype=bool)
    run_id = np.cumsum(np.r_[True, z[1:] != z[:-1]]) - 1
    has_event_run = np.bincount(run_id, weights=s.delta_concomitant, minlength=run_id[-1] + 1) > 0
    has_event[last] = has_event_run
    keep = last & has_event & (curve.survival > 0)
    if np.count_nonzero(keep) < 2:
        raise DegenerateSample("need at least two distinct uncensored points with positive survival")
    return np.log(z[keep]), np.log(curve.survival[keep])
