"""Replicated bias/MSE studies of the censored tail-index estimators.

Replication ``r`` draws its sample from ``SeedSequence(master_seed,
spawn_key=(r,))``, so results do not depend on how replications are scheduled
across workers.  Aggregation always runs over replications in index order.
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Tuple

import numpy as np

from . import censoring, estimators, selection
from .exceptions import ParameterError

__all__ = [
    "StudyConfig",
    "StudyResult",
    "CellStats",
    "run_study",
    "export_csv",
    "parse_k_grid",
    "parse_mn_rule",
    "config_from_mapping",
    "read_config_file",
    "replication_seed",
]

DEFAULT_ESTIMATORS = ("efg", "mns", "na_tr")


def parse_k_grid(spec):
    """``"5:600:5"`` (inclusive start:stop:step) or ``"10,20,50"``."""
    if isinstance(spec, str):
        spec = spec.strip()
        if not spec:
            return ()
        if ":" in spec:
            parts = [int(x) for x in spec.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            return tuple(range(start, stop + 1, step))
        return tuple(int(x) for x in spec.split(","))
    return tuple(int(k) for k in spec)


def parse_mn_rule(rule):
    """Turn ``"loglog"``, ``"power:RHO"`` or ``"fixed:M"`` into ``k -> m_n``."""
    name, _, arg = str(rule).partition(":")
    if name == "loglog" and not arg:
        return selection.mn_loglog
    if name == "power" and arg:
        rho = float(arg)
        if not 0 < rho < 1:
            raise ParameterError(f"power rule needs 0 < rho < 1, got {rho}")

        def mn_power(k):
            return selection.mn_power(k, rho)

        return mn_power
    if name == "fixed" and arg:
        m = int(arg)
        if m < 1:
            raise ParameterError(f"fixed truncation index must be >= 1, got {m}")
        return m
    raise ParameterError(f"unknown m_n rule {rule!r}; use loglog, power:RHO or fixed:M")


@dataclass(frozen=True)
class StudyConfig:
    """One simulation design.

    ``k_grid=None`` means every ``k`` in ``[5, 600]`` with step 5, cut at
    ``n - 1``.  ``betas`` only matter for ``na_tr``.
    """

    family: str
    gamma1: float
    p: float
    n: int = 1000
    reps: int = 2000
    k_grid: Optional[Tuple[int, ...]] = None
    betas: Tuple[float, ...] = (1.01,)
    mn_rule: str = "loglog"
    estimators: Tuple[str, ...] = DEFAULT_ESTIMATORS
    master_seed: int = 0
    eta: float = 0.25
    loggamma_fixed_scale: bool = False
    natr_exponent: str = "a"

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.lower())
        if self.k_grid is None:
            object.__setattr__(self, "k_grid", tuple(range(5, min(600, self.n - 1) + 1, 5)))
        else:
            object.__setattr__(self, "k_grid", tuple(sorted(set(parse_k_grid(self.k_grid)))))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.reps < 1:
            raise ParameterError(f"reps must be >= 1, got {self.reps}")
        if self.n < 3:
            raise ParameterError(f"n must be >= 3, got {self.n}")
        if any(not 2 <= k <= self.n - 1 for k in self.k_grid):
            raise ParameterError(f"every k must lie in [2, n-1] = [2, {self.n - 1}]")
        if any(not b > 1 for b in self.betas):
            raise ParameterError("every beta must exceed 1")
        unknown = set(self.estimators) - set(estimators.ESTIMATORS)
        if unknown:
            raise ParameterError(f"unknown estimators {sorted(unknown)}")
        if "na_tr" in self.estimators and not self.betas:
            raise ParameterError("na_tr needs at least one beta")
        parse_mn_rule(self.mn_rule)
        # validates family, gamma1 and p
        self.design()

    def design(self):
        return censoring.CensoringDesign(
            self.family, self.gamma1, self.p, eta=self.eta,
            loggamma_fixed_scale=self.loggamma_fixed_scale,
        )

    def cells(self):
        """``(estimator, beta)`` keys in output order; beta is None when unused."""
        out = []
        for est in self.estimators:
            if est == "na_tr":
                out.extend((est, b) for b in sorted(self.betas))
            else:
                out.append((est, None))
        return sorted(out, key=_cell_sort_key)


def _cell_sort_key(cell):
    est, beta = cell
    return (est, -math.inf if beta is None else beta)


@dataclass(frozen=True, eq=False)
class CellStats:
    bias: np.ndarray
    mse: np.ndarray
    defined_count: np.ndarray

    @property
    def variance(self):
        """Population variance over defined replications, ``mse - bias**2``."""
        return self.mse - self.bias**2


@dataclass(frozen=True, eq=False)
class StudyResult:
    config: StudyConfig
    k_grid: np.ndarray
    cells: dict = field(repr=False)

    def __getitem__(self, key):
        if isinstance(key, str):
            key = (key, None)
        return self.cells[key]


def replication_seed(master_seed, r):
    return np.random.SeedSequence(master_seed, spawn_key=(r,))


def _default_trace(s, est, ks, cfg, beta, m_rule):
    if est == "na_tr":
        t = estimators.trace(s, est, ks, beta=beta, m_n=m_rule, exponent=cfg.natr_exponent)
    else:
        t = estimators.trace(s, est, ks)
    return t.estimates


def _replicate(cfg, r, trace_functions):
    s = censoring.sort_with_concomitants(
        censoring.generate(cfg.design(), cfg.n, replication_seed(cfg.master_seed, r))
    )
    ks = np.asarray(cfg.k_grid, dtype=np.int64)
    m_rule = parse_mn_rule(cfg.mn_rule)
    out = {}
    for est, beta in cfg.cells():
        fn = (trace_functions or {}).get(est)
        if fn is None:
            out[est, beta] = _default_trace(s, est, ks, cfg, beta, m_rule)
        else:
            out[est, beta] = np.asarray(fn(s, ks, cfg, beta), dtype=float)
    return out


def _run_chunk(args):
    cfg, reps, trace_functions = args
    return [_replicate(cfg, r, trace_functions) for r in reps]


def run_study(cfg, workers=1, trace_functions=None):
    """Run every replication of ``cfg`` and aggregate bias and MSE per ``k``.

    ``trace_functions`` optionally maps an estimator name to a replacement
    ``f(sorted_sample, k_values, cfg, beta) -> estimates`` (NaN = undefined).
    Undefined estimates are left out of the averages and counted in
    ``defined_count``.  ``workers > 1`` spreads replications over processes;
    the result is bitwise identical either way.
    """
    reps = range(cfg.reps)
    if workers <= 1 or cfg.reps == 1:
        per_rep = [_replicate(cfg, r, trace_functions) for r in reps]
    else:
        chunks = [list(reps[i::workers]) for i in range(workers)]
        per_rep = [None] * cfg.reps
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk, res in zip(chunks, pool.map(_run_chunk, [(cfg, c, trace_functions) for c in chunks])):
                for r, v in zip(chunk, res):
                    per_rep[r] = v

    ks = np.asarray(cfg.k_grid, dtype=np.int64)
    cells = {}
    for key in cfg.cells():
        x = np.array([rep[key] for rep in per_rep], dtype=float).reshape(cfg.reps, ks.size)
        ok = np.isfinite(x)
        count = ok.sum(axis=0)
        err = np.where(ok, x - cfg.gamma1, 0.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            bias = np.where(count > 0, err.sum(axis=0) / count, np.nan)
            mse = np.where(count > 0, (err * err).sum(axis=0) / count, np.nan)
        cells[key] = CellStats(bias, mse, count)
    return StudyResult(cfg, ks, cells)


def _fmt(x):
    return "" if x is None else format(x, ".17g")


def export_csv(result, path):
    """Write ``estimator,beta,k,bias,mse,defined_count`` rows sorted by key.

    ``path`` may also be an open text file.
    """
    if hasattr(path, "write"):
        _write_result(result, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_result(result, fh)


def _write_result(result, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["estimator", "beta", "k", "bias", "mse", "defined_count"])
    for key in sorted(result.cells, key=_cell_sort_key):
        est, beta = key
        st = result.cells[key]
        for j, k in enumerate(result.k_grid):
            w.writerow([est, _fmt(beta), int(k), _fmt(float(st.bias[j])),
                        _fmt(float(st.mse[j])), int(st.defined_count[j])])


_INT_KEYS = {"n", "reps", "master_seed"}
_FLOAT_KEYS = {"gamma1", "p", "eta"}


def config_from_mapping(values):
    """Build a :class:`StudyConfig` from string-valued settings.

    Lists (``betas``, ``estimators``) are comma separated; ``k_grid`` accepts
    ``start:stop:step``; ``seed`` is an alias of ``master_seed``.
    """
    known = {f.name for f in fields(StudyConfig)}
    kw = {}
    for key, raw in values.items():
        key = key.strip().replace("-", "_")
        if key == "seed":
            key = "master_seed"
        if key == "beta":
            key = "betas"
        if key not in known:
            raise ParameterError(f"unknown setting {key!r}")
        val = raw.strip() if isinstance(raw, str) else raw
        if not isinstance(val, str):
            kw[key] = val
        elif key in _INT_KEYS:
            kw[key] = int(val)
        elif key in _FLOAT_KEYS:
            kw[key] = float(val)
        elif key == "betas":
            kw[key] = tuple(float(b) for b in val.split(",") if b.strip())
        elif key == "estimators":
            kw[key] = tuple(e.strip() for e in val.split(",") if e.strip())
        elif key == "k_grid":
            kw[key] = parse_k_grid(val)
        elif key == "loggamma_fixed_scale":
            kw[key] = val.lower() in ("1", "true", "yes", "on")
        else:
            kw[key] = val
    for required in ("family", "gamma1", "p"):
        if required not in kw:
            raise ParameterError(f"missing required setting {required!r}")
    return StudyConfig(**kw)


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip()] = val.strip()
    return values


def config_to_dict(cfg):
    d = asdict(cfg)
    d["k_grid"] = list(cfg.k_grid)
    d["betas"] = list(cfg.betas)
    d["estimators"] = list(cfg.estimators)
    return d
