"""Adaptive choice of the threshold ``k`` and of the truncation index ``m_n``."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DomainError, InsufficientTrace, ParameterError

__all__ = [
    "SelectionConfig",
    "reiss_thomas_criterion",
    "kopt_reiss_thomas",
    "mn_loglog",
    "mn_power",
    "lower_median",
]


@dataclass(frozen=True)
class SelectionConfig:
    """Scan settings for :func:`kopt_reiss_thomas`.

    ``k_max=None`` means the last ``k`` of the trace.  A ``k`` is only a
    candidate once its window holds ``min_window`` defined entries.  With the
    default of 1 the first entry always scores 0 and wins, so for real use
    ``min_window`` of a few dozen is advisable.
    """

    nu: float = 0.3
    k_min: int = 2
    k_max: Optional[int] = None
    min_window: int = 1

    def __post_init__(self):
        if not 0 <= self.nu <= 0.5:
            raise ParameterError(f"nu must lie in [0, 0.5], got {self.nu}")
        if self.k_min < 2:
            raise ParameterError(f"k_min must be at least 2, got {self.k_min}")
        if self.k_max is not None and self.k_max <= self.k_min:
            raise ParameterError(f"k_max ({self.k_max}) must exceed k_min ({self.k_min})")
        if self.min_window < 1:
            raise ParameterError(f"min_window must be at least 1, got {self.min_window}")


def lower_median(values):
    """Order statistic at rank ``ceil(m/2)`` of ``m`` values."""
    v = np.sort(np.asarray(values, dtype=float))
    return float(v[(v.size - 1) // 2])


def reiss_thomas_criterion(k_values, estimates, nu):
    """Criterion value at every defined ``k``, by direct summation.

    For each ``k`` the window is every defined entry with index ``<= k``::

        (1/k) * sum_i i**nu * |xi_i - median(window)|

    Returns ``(ks, values)`` over the defined entries.
    """
    ks = np.asarray(k_values, dtype=np.int64)
    xs = np.asarray(estimates, dtype=float)
    ok = np.isfinite(xs)
    ks, xs = ks[ok], xs[ok]
    weights = ks.astype(float) ** nu
    vals = np.empty(ks.size)
    for r in range(ks.size):
        med = lower_median(xs[: r + 1])
        vals[r] = np.sum(weights[: r + 1] * np.abs(xs[: r + 1] - med)) / ks[r]
    return ks, vals


def kopt_reiss_thomas(trace, cfg=SelectionConfig()):
    """Reiss-Thomas threshold: argmin of :func:`reiss_thomas_criterion`.

    Only trace entries with ``k_min <= k <= k_max`` that are defined take part,
    both in the sums and in the medians.  Ties go to the smaller ``k``.
    """
    ks = np.asarray(trace.k_values)
    xs = np.where(trace.defined, trace.estimates, np.nan)
    k_max = cfg.k_max if cfg.k_max is not None else (int(ks[-1]) if ks.size else cfg.k_min)
    sel = (ks >= cfg.k_min) & (ks <= k_max)
    ks, xs = ks[sel], xs[sel]
    if np.count_nonzero(np.isfinite(xs)) < 3:
        raise InsufficientTrace("need at least 3 defined trace entries in [k_min, k_max]")
    cand, vals = reiss_thomas_criterion(ks, xs, cfg.nu)
    first = cfg.min_window - 1
    if first >= cand.size:
        raise InsufficientTrace(f"fewer than min_window = {cfg.min_window} defined entries")
    return int(cand[first + int(np.argmin(vals[first:]))])


def mn_loglog(k):
    """``max(3, floor(log log k))`` with natural logarithms."""
    if k < 2:
        raise DomainError(f"log log k needs k >= 2, got {k}")
    return max(3, math.floor(math.log(math.log(k))))


def mn_power(k, rho):
    """``floor(k**rho)``, at least 1.

    The admissible range ``rho < 1 - 1/(2 beta)`` depends on ``beta`` and is
    the caller's responsibility.
    """
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    if not 0 < rho < 1:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    return max(1, math.floor(k**rho))
