"""Random right censoring: samples, order statistics and design algebra.

We observe ``Z = min(X, C)`` and ``delta = 1{X <= C}``.  Sorting carries the
indicator along as a concomitant.  Tied values are ordered censored first
(``delta = 0`` before ``delta = 1``), so a death at ``t`` counts as happening
after every censoring at ``t``.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import distributions
from .exceptions import CSVParseError, DomainError, ParameterError

__all__ = [
    "CensoredSample",
    "SortedSample",
    "CensoringDesign",
    "gamma2_from_p",
    "generate",
    "sort_with_concomitants",
    "empirical_subdists",
    "load_csv",
    "P_MAX",
]

#: largest admissible design proportion; ``p -> 1`` means no censoring at all
P_MAX = 0.999


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """Observed minima ``z`` with indicators ``delta`` (True = uncensored)."""

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z = np.array(self.z, dtype=float).ravel()
        delta = np.asarray(self.delta).ravel()
        if z.size == 0:
            raise DomainError("empty sample")
        if delta.shape != z.shape:
            raise DomainError(f"z has {z.size} values but delta has {delta.size}")
        if not np.all(np.isfinite(z)) or np.any(z <= 0):
            raise DomainError("observations must be finite and strictly positive")
        if delta.dtype != bool:
            if not np.all((delta == 0) | (delta == 1)):
                raise DomainError("censoring indicators must be 0 or 1")
            delta = delta.astype(bool)
        else:
            delta = delta.copy()
        object.__setattr__(self, "z", _readonly(z))
        object.__setattr__(self, "delta", _readonly(delta))

    def __len__(self):
        return self.z.size


@dataclass(frozen=True, eq=False)
class SortedSample:
    """Ascending order statistics with their concomitant indicators.

    Besides the ascending arrays, the tail-oriented views used by the
    estimators are precomputed: ``top[i-1] = Z_{n-i+1:n}`` and
    ``top_delta[i-1] = delta_{[n-i+1:n]}`` for ``i = 1..n``.
    """

    z_sorted: np.ndarray
    delta_concomitant: np.ndarray
    log_top: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        z = np.array(self.z_sorted, dtype=float)
        d = np.array(self.delta_concomitant, dtype=bool)
        if z.ndim != 1 or z.shape != d.shape or z.size == 0:
            raise DomainError("z_sorted and delta_concomitant must be equal-length 1-d arrays")
        if np.any(np.diff(z) < 0):
            raise DomainError("z_sorted must be non-decreasing")
        object.__setattr__(self, "z_sorted", _readonly(z))
        object.__setattr__(self, "delta_concomitant", _readonly(d))
        object.__setattr__(self, "log_top", _readonly(np.log(z[::-1])))

    @property
    def n(self):
        return self.z_sorted.size

    @property
    def top(self):
        return self.z_sorted[::-1]

    @property
    def top_delta(self):
        return self.delta_concomitant[::-1]

    def threshold(self, k):
        """``Z_{n-k:n}``, the ``(k+1)``-th largest observation."""
        return self.z_sorted[self.n - k - 1]


def sort_with_concomitants(sample):
    """Stable ascending sort of ``z`` carrying ``delta`` along.

    Ties in ``z`` put censored observations before uncensored ones.
    """
    # lexsort: last key is primary
    order = np.lexsort((sample.delta, sample.z))
    return SortedSample(sample.z[order], sample.delta[order])


def empirical_subdists(sorted_sample, z):
    """Return ``(H_n(z), H_n^(1)(z), H_n^(0)(z))`` at the query point ``z``.

    ``H_n^(1)`` counts uncensored and ``H_n^(0)`` censored observations, so the
    first value is always the sum of the other two.
    """
    n = sorted_sample.n
    m = int(np.searchsorted(sorted_sample.z_sorted, z, side="right"))
    n1 = int(np.count_nonzero(sorted_sample.delta_concomitant[:m]))
    return m / n, n1 / n, (m - n1) / n


def gamma2_from_p(gamma1, p):
    """Censoring tail index giving tail proportion ``p = g2 / (g1 + g2)``."""
    gamma1 = float(gamma1)
    p = float(p)
    if not gamma1 > 0:
        raise DomainError(f"gamma1 must be positive, got {gamma1}")
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    return p * gamma1 / (1.0 - p)


@dataclass(frozen=True)
class CensoringDesign:
    """Same-family lifetime/censoring pair with tail proportion ``p``.

    ``gamma2`` is derived from ``gamma1`` and ``p``.  ``eta`` is the shared
    Burr parameter.  ``loggamma_fixed_scale`` switches log-gamma designs to
    ``shape = 1/gamma_i`` with a common ``scale = 2`` for both variables
    (under which the true tail index of ``X`` is 2, not ``gamma1``).
    """

    family: str
    gamma1: float
    p: float
    eta: float = 0.25
    loggamma_fixed_scale: bool = False

    def __post_init__(self):
        if not 0 < self.p <= P_MAX:
            raise ParameterError(
                f"p must lie in (0, {P_MAX}]; for uncensored data use delta = 1 directly"
            )
        if not self.gamma1 > 0:
            raise ParameterError(f"gamma1 must be positive, got {self.gamma1}")
        object.__setattr__(self, "family", self.family.lower())
        # build both laws once so bad families or parameters fail here
        self.lifetime, self.censoring

    @property
    def gamma2(self):
        return gamma2_from_p(self.gamma1, self.p)

    @property
    def gamma(self):
        """Tail index of ``Z``: ``g1 g2 / (g1 + g2) = p g1``."""
        return self.gamma1 * self.gamma2 / (self.gamma1 + self.gamma2)

    def _law(self, g):
        if self.family == "loggamma" and self.loggamma_fixed_scale:
            return distributions.LogGamma(1.0 / g, 2.0)
        return distributions.make(self.family, g, eta=self.eta)

    @property
    def lifetime(self):
        return self._law(self.gamma1)

    @property
    def censoring(self):
        return self._law(self.gamma2)


def generate(design, n, seed):
    """Draw a censored sample of size ``n``.

    ``X`` and ``C`` come from two independent child streams of ``seed``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    sx, sc = ss.spawn(2)
    x = design.lifetime.sample(n, sx)
    c = design.censoring.sample(n, sc)
    return CensoredSample(np.minimum(x, c), x <= c)


def load_csv(path):
    """Read a two-column ``value,censored_flag`` file.

    The flag is the indicator ``delta``: 1 for an observed (uncensored) value,
    0 for a censored one.  A single header row is skipped when its first field
    is not numeric.  Line numbers in errors are 1-based.
    """
    z, d = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise CSVParseError(f"expected 2 columns, got {len(row)}", lineno)
            value, flag = (c.strip() for c in row)
            try:
                v = float(value)
            except ValueError:
                if lineno == 1 and not z and _looks_like_header(value, flag):
                    continue
                raise CSVParseError(f"cannot parse value {value!r}", lineno) from None
            if flag not in ("0", "1"):
                raise CSVParseError(f"censoring flag must be 0 or 1, got {flag!r}", lineno)
            if not np.isfinite(v) or v <= 0:
                raise CSVParseError(f"value must be finite and positive, got {value!r}", lineno)
            z.append(v)
            d.append(flag == "1")
    if not z:
        raise DomainError("empty sample")
    return CensoredSample(np.array(z), np.array(d))


def _looks_like_header(a, b):
    def numeric(s):
        try:
            float(s)
        except ValueError:
            return False
        return True

    return not numeric(a) and not numeric(b)
