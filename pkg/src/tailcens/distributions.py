"""Heavy-tailed parametric laws used to drive censored simulations.

Every law exposes ``cdf``, ``survival``, ``quantile`` and ``sample``.  Sampling
is inverse transform on a seeded uniform stream, so the same ``(spec, n, seed)``
always gives bitwise-identical draws.

The tail index of each law is reported by :attr:`DistributionSpec.tail_index`.
For Burr, Frechet and Pareto it is ``gamma``; for the log-gamma law it is the
``scale`` parameter, since ``P(X > x)`` behaves like
``(log x)**(shape - 1) * x**(-1/scale)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import DomainError, ParameterError

__all__ = [
    "DistributionSpec",
    "Burr",
    "Frechet",
    "LogGamma",
    "Pareto",
    "make",
    "uniform_stream",
]

_U_BITS = 53


def uniform_stream(seed, n):
    """Draw ``n`` uniforms strictly inside ``(0, 1)``.

    ``seed`` may be an int, a :class:`numpy.random.SeedSequence` or a
    :class:`numpy.random.Generator`.  Values are ``(j + 1/2) / 2**53`` for a
    random 53-bit integer ``j``, so neither endpoint can occur.
    """
    rng = np.random.default_rng(seed)
    j = rng.integers(0, 2**_U_BITS, size=n, dtype=np.uint64)
    return (j.astype(np.float64) + 0.5) / float(2**_U_BITS)


def _positive(name, value):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be a positive finite number, got {value!r}")
    return value


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("quantile level must lie strictly inside (0, 1)")
    return u


def _unwrap(x, out):
    return float(out) if np.ndim(x) == 0 else out


class DistributionSpec:
    """Common interface; concrete laws are the frozen dataclasses below."""

    #: left end of the support
    lower = 0.0
    #: whether ``lower`` itself belongs to the support
    closed_lower = False

    @property
    def tail_index(self):
        raise NotImplementedError

    def _check_x(self, x):
        x = np.asarray(x, dtype=float)
        bad = np.isnan(x) | (x < self.lower)
        if not self.closed_lower:
            bad |= x == self.lower
        if np.any(bad):
            lo = "[" if self.closed_lower else "("
            raise DomainError(f"{type(self).__name__} support is {lo}{self.lower}, inf)")
        return x

    def cdf(self, x):
        x = self._check_x(x)
        return _unwrap(x, self._cdf(x))

    def survival(self, x):
        x = self._check_x(x)
        return _unwrap(x, self._sf(x))

    def quantile(self, u):
        u = _check_u(u)
        return _unwrap(u, self._ppf(u))

    def sample(self, n, seed):
        """Return ``n`` independent draws by inverse transform."""
        if int(n) != n or n < 1:
            raise DomainError(f"sample size must be a positive integer, got {n!r}")
        return self._ppf(uniform_stream(seed, int(n)))


@dataclass(frozen=True)
class Burr(DistributionSpec):
    """Burr law ``F(x) = 1 - (1 + x**(1/eta))**(-eta/gamma)``, ``x > 0``."""

    gamma: float
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive("gamma", self.gamma))
        object.__setattr__(self, "eta", _positive("eta", self.eta))

    @property
    def tail_index(self):
        return self.gamma

    def _log_sf(self, x):
        # log1p(x**(1/eta)) without overflow for huge x
        with np.errstate(divide="ignore"):
            lx = np.log(x) / self.eta
        return -(self.eta / self.gamma) * np.logaddexp(0.0, lx)

    def _cdf(self, x):
        return -np.expm1(self._log_sf(x))

    def _sf(self, x):
        return np.exp(self._log_sf(x))

    def _ppf(self, u):
        # x**(1/eta) = (1-u)**(-gamma/eta) - 1
        # very heavy tails overflow to inf, which is the right limit
        with np.errstate(over="ignore"):
            w = np.expm1(-(self.gamma / self.eta) * np.log1p(-u))
            return w**self.eta


@dataclass(frozen=True)
class Frechet(DistributionSpec):
    """Frechet law ``F(x) = exp(-x**(-1/gamma))``, ``x > 0``."""

    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive("gamma", self.gamma))

    @property
    def tail_index(self):
        return self.gamma

    def _cdf(self, x):
        with np.errstate(divide="ignore"):
            return np.exp(-(x ** (-1.0 / self.gamma)))

    def _sf(self, x):
        with np.errstate(divide="ignore"):
            return -np.expm1(-(x ** (-1.0 / self.gamma)))

    def _ppf(self, u):
        with np.errstate(over="ignore"):
            return (-np.log(u)) ** (-self.gamma)


@dataclass(frozen=True)
class Pareto(DistributionSpec):
    """Exact Pareto law ``F(x) = 1 - x**(-1/gamma)``, ``x >= 1``."""

    gamma: float
    lower = 1.0
    closed_lower = True

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive("gamma", self.gamma))

    @property
    def tail_index(self):
        return self.gamma

    def _cdf(self, x):
        return -np.expm1(-np.log(x) / self.gamma)

    def _sf(self, x):
        return np.exp(-np.log(x) / self.gamma)

    def _ppf(self, u):
        with np.errstate(over="ignore"):
            return np.exp(-self.gamma * np.log1p(-u))


@dataclass(frozen=True)
class LogGamma(DistributionSpec):
    """Law of ``X`` with ``log X ~ Gamma(shape, scale)``, ``x > 1``.

    The tail index is ``scale``.
    """

    shape: float
    scale: float
    lower = 1.0

    def __post_init__(self):
        object.__setattr__(self, "shape", _positive("shape", self.shape))
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def tail_index(self):
        return self.scale

    def _cdf(self, x):
        return special.gammainc(self.shape, np.log(x) / self.scale)

    def _sf(self, x):
        return special.gammaincc(self.shape, np.log(x) / self.scale)

    def _ppf(self, u):
        # upper-tail inverse keeps relative accuracy for u close to 1
        g = np.where(
            u < 0.5,
            special.gammaincinv(self.shape, u),
            special.gammainccinv(self.shape, 1.0 - u),
        )
        return np.exp(self.scale * g)


_FAMILIES = {"burr": Burr, "frechet": Frechet, "pareto": Pareto, "loggamma": LogGamma}


def make(family, gamma, *, eta=0.25, shape=None, scale=None):
    """Build a law of the given family with tail index ``gamma``.

    ``eta`` is the Burr second parameter.  For ``"loggamma"`` the defaults are
    ``scale = gamma`` (so the tail index really is ``gamma``) and
    ``shape = 1/gamma``; pass ``shape``/``scale`` to override either.
    """
    family = family.lower()
    if family not in _FAMILIES:
        raise ParameterError(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}")
    if family == "burr":
        return Burr(gamma, eta)
    if family == "loggamma":
        gamma = _positive("gamma", gamma)
        return LogGamma(shape if shape is not None else 1.0 / gamma,
                        scale if scale is not None else gamma)
    return _FAMILIES[family](gamma)
