import csv

import numpy as np
import pytest

from tailcens import estimators as E
from tailcens.censoring import generate, sort_with_concomitants
from tailcens.exceptions import ParameterError
from tailcens.montecarlo import (StudyConfig, config_from_mapping, config_to_dict, export_csv, parse_k_grid,
                                 parse_mn_rule, read_config_file, replication_seed, run_study)
from tailcens.selection import mn_loglog

SMALL = dict(family="burr", gamma1=0.5, p=0.5, n=300, reps=20, k_grid=(10, 50, 120),
             betas=(1.01, 1.5), estimators=("hill", "efg", "worms", "br", "mns", "na_tr"), master_seed=3)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_k_grid():
    assert parse_k_grid("5:20:5") == (5, 10, 15, 20)
    assert parse_k_grid("3:5") == (3, 4, 5)
    assert parse_k_grid("10,20,50") == (10, 20, 50)
    assert parse_k_grid("") == ()


def test_parse_mn_rule():
    assert parse_mn_rule("loglog") is mn_loglog
    assert parse_mn_rule("power:0.5")(100) == 10
    assert parse_mn_rule("fixed:4") == 4
    for bad in ("power", "power:1.5", "fixed:0", "median"):
        with pytest.raises(ParameterError):
            parse_mn_rule(bad)


def test_default_grid_and_validation():
    assert StudyConfig("burr", 0.4, 0.3).k_grid == tuple(range(5, 601, 5))
    assert StudyConfig("burr", 0.4, 0.3, n=100).k_grid[-1] == 95
    for kw in ({"reps": 0}, {"k_grid": (1,)}, {"k_grid": (100,), "n": 100}, {"betas": (1.0,)},
               {"estimators": ("bww",)}, {"mn_rule": "x"}, {"p": 0.0}, {"family": "weibull"}):
        with pytest.raises((ParameterError, ValueError)):
            StudyConfig(**{"family": "burr", "gamma1": 0.4, "p": 0.3, **kw})


def test_constant_hook_gives_zero_error():
    cfg = StudyConfig(**SMALL)
    const = {name: (lambda s, ks, cfg, beta: np.full(ks.size, cfg.gamma1)) for name in cfg.estimators}
    res = run_study(cfg, trace_functions=const)
    for st in res.cells.values():
        assert np.all(st.bias == 0) and np.all(st.mse == 0)
        assert np.all(st.defined_count == cfg.reps)


def test_single_replication_identity():
    cfg = StudyConfig(**{**SMALL, "reps": 1})
    res = run_study(cfg)
    s = sort_with_concomitants(generate(cfg.design(), cfg.n, replication_seed(cfg.master_seed, 0)))
    for j, k in enumerate(cfg.k_grid):
        for name in ("hill", "efg", "mns", "br"):
            assert res[name].bias[j] == pytest.approx(getattr(E, name)(s, k) - 0.5, rel=1e-12, abs=1e-15)
        nat = E.na_tr(s, k, 1.5, mn_loglog(k))
        assert res["na_tr", 1.5].bias[j] == pytest.approx(nat - 0.5, rel=1e-12)
    for st in res.cells.values():
        np.testing.assert_array_equal(st.mse, st.bias**2)


def test_determinism_and_worker_independence(tmp_path):
    cfg = StudyConfig(**SMALL)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(run_study(cfg), a)
    export_csv(run_study(cfg, workers=3), b)
    assert a.read_bytes() == b.read_bytes()


def test_mse_dominates_squared_bias():
    res = run_study(StudyConfig(**{**SMALL, "reps": 50, "p": 0.2}))
    for st in res.cells.values():
        ok = st.defined_count > 0
        assert np.all(st.mse[ok] >= st.bias[ok] ** 2 - 1e-12)
        assert np.all(st.defined_count <= 50)


def test_undefined_estimates_are_counted():
    # with heavy censoring some top-10 windows contain no uncensored value
    res = run_study(StudyConfig("pareto", 1.0, 0.05, n=200, reps=200, k_grid=(2, 10), estimators=("efg",)))
    assert res["efg"].defined_count[0] < 200
    assert res["efg"].defined_count[1] <= 200


def test_hill_unbiased_on_pareto():
    # Pareto censored by Pareto leaves Z exact Pareto with index p * gamma1
    cfg = StudyConfig("pareto", 1.0, 0.999, n=1000, reps=2000, estimators=("hill",), master_seed=7)
    res = run_study(cfg)
    st = res["hill"]
    sd = np.sqrt(st.variance * cfg.reps / (cfg.reps - 1))
    offset = (cfg.p - 1.0) * cfg.gamma1
    assert np.all(np.abs(st.bias - offset) < 3 * sd / np.sqrt(cfg.reps) + 1e-12)


def test_frechet_na_tr_bias_small():
    cfg = StudyConfig("frechet", 0.4, 0.7, n=1000, reps=500, k_grid=(100,), estimators=("na_tr",), master_seed=1)
    assert abs(run_study(cfg)["na_tr", 1.01].bias[0]) < 0.05


def test_export_round_trip(tmp_path):
    cfg = StudyConfig(**SMALL)
    res = run_study(cfg)
    path = tmp_path / "r.csv"
    export_csv(res, path)
    rows = read_rows(path)
    assert list(rows[0]) == ["estimator", "beta", "k", "bias", "mse", "defined_count"]
    keys = [(r["estimator"], r["beta"], int(r["k"])) for r in rows]
    assert keys == sorted(keys, key=lambda t: (t[0], float(t[1]) if t[1] else -1, t[2]))
    assert len(rows) == len(res.cells) * len(cfg.k_grid)
    for r in rows:
        key = (r["estimator"], float(r["beta"]) if r["beta"] else None)
        j = cfg.k_grid.index(int(r["k"]))
        st = res[key]
        assert float(r["bias"]) == pytest.approx(st.bias[j], rel=1e-12, abs=0)
        assert float(r["mse"]) == pytest.approx(st.mse[j], rel=1e-12, abs=0)
        assert int(r["defined_count"]) == st.defined_count[j]
    assert all(r["beta"] == "" for r in rows if r["estimator"] != "na_tr")


def test_export_empty_and_single(tmp_path):
    path = tmp_path / "e.csv"
    export_csv(run_study(StudyConfig(**{**SMALL, "k_grid": ()})), path)
    assert path.read_text() == "estimator,beta,k,bias,mse,defined_count\n"
    export_csv(run_study(StudyConfig(**{**SMALL, "k_grid": (10,), "estimators": ("hill",)})), path)
    assert len(read_rows(path)) == 1


def test_config_file(tmp_path):
    f = tmp_path / "study.cfg"
    f.write_text("# design\nfamily = frechet\ngamma1 = 0.4\np = 0.7  # strong\n"
                 "n = 500\nreps = 3\nbetas = 1.01, 2\nk_grid = 10:30:10\nseed = 9\n")
    cfg = config_from_mapping(read_config_file(f))
    assert (cfg.family, cfg.gamma1, cfg.p, cfg.n, cfg.reps) == ("frechet", 0.4, 0.7, 500, 3)
    assert cfg.betas == (1.01, 2.0) and cfg.k_grid == (10, 20, 30) and cfg.master_seed == 9
    assert config_from_mapping({k: str(v) if not isinstance(v, (list, tuple)) else ",".join(map(str, v))
                                for k, v in config_to_dict(cfg).items()}) == cfg
    f.write_text("family frechet\n")
    with pytest.raises(ParameterError, match=":1:"):
        read_config_file(f)
    with pytest.raises(ParameterError, match="gamma1"):
        config_from_mapping({"family": "burr", "p": "0.5"})
    with pytest.raises(ParameterError, match="unknown setting"):
        config_from_mapping({"family": "burr", "p": "0.5", "gamma1": "1", "colour": "red"})
