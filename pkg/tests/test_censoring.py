import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from conftest import make_sorted
from tailcens.censoring import (CensoredSample, CensoringDesign, empirical_subdists, gamma2_from_p,
                                generate, load_csv, sort_with_concomitants)
from tailcens.exceptions import CSVParseError, DomainError, ParameterError


def test_gamma2_from_p_values():
    assert gamma2_from_p(0.4, 0.3) == pytest.approx(0.17142857142857143, rel=1e-14)
    assert gamma2_from_p(0.9, 0.5) == pytest.approx(0.9, rel=1e-15)
    assert gamma2_from_p(0.7, 0.7) == pytest.approx(1.6333333333333333, rel=1e-14)


@given(st.floats(0.01, 5.0), st.floats(0.01, 0.99))
def test_gamma2_round_trip(g1, p):
    g2 = gamma2_from_p(g1, p)
    assert abs(g2 / (g1 + g2) - p) <= 1e-14


def test_gamma2_domain():
    with pytest.raises(DomainError):
        gamma2_from_p(0.4, 1.0)
    with pytest.raises(DomainError):
        gamma2_from_p(0.0, 0.5)


def test_design_overall_index():
    d = CensoringDesign("burr", 0.4, 0.3)
    assert d.gamma2 / (d.gamma1 + d.gamma2) == pytest.approx(0.3, abs=1e-15)
    assert d.gamma == pytest.approx(0.3 * 0.4, rel=1e-14)
    with pytest.raises(ParameterError):
        CensoringDesign("burr", 0.4, 1.0)


def test_sort_with_concomitants():
    s = sort_with_concomitants(CensoredSample([3.0, 1.0, 2.0], [1, 0, 1]))
    assert s.z_sorted.tolist() == [1, 2, 3]
    assert s.delta_concomitant.tolist() == [False, True, True]


def test_sort_already_sorted_and_ties():
    s = make_sorted([1, 2, 3], [1, 0, 1])
    assert s.delta_concomitant.tolist() == [True, False, True]
    assert make_sorted([2, 2], [0, 1]).delta_concomitant.tolist() == [False, True]
    assert make_sorted([2, 2], [1, 0]).delta_concomitant.tolist() == [False, True]


def test_empirical_subdists():
    s = make_sorted([1, 2, 3], [1, 0, 1])
    assert empirical_subdists(s, 0.5) == (0, 0, 0)
    assert empirical_subdists(s, 10) == pytest.approx((1, 2 / 3, 1 / 3))
    assert empirical_subdists(s, 2) == pytest.approx((2 / 3, 1 / 3, 1 / 3))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 100.0), st.booleans()), min_size=1, max_size=40, unique_by=lambda t: t[0]))
def test_subdist_counts_and_decomposition(pairs):
    z, d = zip(*pairs)
    s = make_sorted(z, d)
    for i, zi in enumerate(s.z_sorted, start=1):
        h, h1, h0 = empirical_subdists(s, zi)
        assert h * s.n == pytest.approx(i)
        assert h1 + h0 == pytest.approx(h, abs=1e-15)


def test_generate_deterministic():
    d = CensoringDesign("frechet", 0.4, 0.3)
    a, b = generate(d, 100, 5), generate(d, 100, 5)
    assert a.z.tobytes() == b.z.tobytes() and np.array_equal(a.delta, b.delta)


def test_generate_weak_censoring_limit():
    s = generate(CensoringDesign("pareto", 0.5, 0.999), 10_000, 0)
    assert s.delta.mean() > 0.99


def _p_uncensored(design):
    x, c = design.lifetime, design.censoring
    # P(X <= C) = int f_X(x) Fbar_C(x) dx = int_0^1 Fbar_C(Q_X(u)) du
    val, _ = integrate.quad(lambda u: c.survival(max(x.quantile(u), 1.0 + 1e-300)
                                                  if design.family == "pareto" else x.quantile(u)),
                            0, 1, limit=200)
    return val


@pytest.mark.parametrize("family,p", [("burr", 0.5), ("burr", 0.3), ("pareto", 0.3), ("pareto", 0.7),
                                      ("frechet", 0.5)])
def test_uncensored_fraction(family, p):
    d = CensoringDesign(family, 0.4, p)
    truth = _p_uncensored(d)
    if family in ("burr", "pareto") or p == 0.5:
        assert truth == pytest.approx(p, abs=1e-6)
    frac = generate(d, 100_000, 11).delta.mean()
    band = 3 * np.sqrt(truth * (1 - truth) / 100_000)
    assert abs(frac - truth) <= band
    assert abs(frac - p) <= 0.02


def test_load_csv(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1.5,1\n2.0,0\n")
    s = load_csv(f)
    assert s.z.tolist() == [1.5, 2.0] and s.delta.tolist() == [True, False]
    f.write_text("value,censored_flag\r\n1.5,1\r\n")
    assert len(load_csv(f)) == 1


def test_load_csv_errors(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("")
    with pytest.raises(DomainError, match="empty sample"):
        load_csv(f)
    f.write_text("x,1\n")
    with pytest.raises(CSVParseError, match="line 1"):
        load_csv(f)
    f.write_text("1,1\n-2,0\n")
    with pytest.raises(CSVParseError, match="line 2"):
        load_csv(f)
    f.write_text("1,1\n2,2\n")
    with pytest.raises(CSVParseError, match="line 2"):
        load_csv(f)
    with pytest.raises(OSError):
        load_csv(tmp_path / "missing.csv")


def test_sample_validation():
    with pytest.raises(DomainError):
        CensoredSample([1.0, -1.0], [1, 1])
    with pytest.raises(DomainError):
        CensoredSample([1.0], [1, 0])


def test_loggamma_designs():
    from tailcens.distributions import LogGamma
    d = CensoringDesign("loggamma", 0.5, 0.5)
    assert d.lifetime.tail_index == 0.5 and d.censoring.tail_index == pytest.approx(0.5)
    fixed = CensoringDesign("loggamma", 0.4, 0.3, loggamma_fixed_scale=True)
    assert fixed.lifetime == LogGamma(1 / 0.4, 2.0)
    assert fixed.censoring == LogGamma(1 / fixed.gamma2, 2.0)
