from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hypmod.analytic import (AL_POINTS, BORWEIN_POINTS, DEFAULT, KUMMER_GRID, S3, AnalyticConfig,
                             al_check, al_kmr_check, borwein_numeric_check, eta_numeric,
                             eta_product_numeric, f3f2_integral, f3f2_series, hyp2f1_cubic,
                             kummer_check, lvalue_at_1, period_lvalue_check, theta_numeric)
from hypmod.qseries import EtaQuotientSpec

TOL = 1e-10


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def test_config_dps():
    assert DEFAULT.dps == DEFAULT.target_digits + DEFAULT.extra_digits
    assert AnalyticConfig(target_digits=30).dps == 40


def test_eta_at_i():
    with mpmath.workdps(30):
        ref = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** (mpmath.mpf(3) / 4))
        assert rel(eta_numeric(1j, AnalyticConfig(target_digits=20)), ref) < 1e-20


@settings(max_examples=20, derandomize=True, deadline=None)
@given(st.floats(-2, 2), st.floats(0.15, 2))
def test_eta_modularity(x, y):
    tau = mpmath.mpc(x, y)
    a = eta_numeric(-1 / tau, flip=False)
    b = mpmath.sqrt(tau / 1j) * eta_numeric(tau, flip=False)
    assert rel(a, b) < 1e-9
    assert rel(eta_numeric(tau + 1), mpmath.expjpi(mpmath.mpf(1) / 12) * eta_numeric(tau)) < 1e-9


def test_eta_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        eta_numeric(-1j)


def test_eta_product_matches_factors():
    tau = 0.1 + 0.7j
    spec = EtaQuotientSpec(((1, 3), (3, -1)))
    direct = eta_numeric(tau) ** 3 / eta_numeric(3 * tau)
    assert rel(eta_product_numeric(spec, tau), direct) < 1e-10


@pytest.mark.parametrize("t", [0.1, -0.4, 0.3 + 0.2j, 0.6, 0.95, 1 - 1e-6, 0.8 - 0.3j])
def test_hyp2f1_cubic_against_mpmath(t):
    ref = mpmath.hyp2f1(mpmath.mpf(1) / 3, mpmath.mpf(2) / 3, 1, t)
    assert rel(hyp2f1_cubic(t), ref) < 1e-11


@pytest.mark.parametrize("r", S3)
def test_f3f2_integral_vs_series(r):
    assert rel(f3f2_integral(r), f3f2_series(r)) < TOL


@pytest.mark.parametrize("r", [Fraction(1, 12), Fraction(1, 2), Fraction(2, 3)])
def test_f3f2_against_mpmath(r):
    with mpmath.workdps(25):
        ref = mpmath.hyp3f2(mpmath.mpf(1) / 3, mpmath.mpf(2) / 3, mpmath.mpf(r.numerator) / r.denominator,
                            1, 1, 1)
    assert rel(f3f2_integral(r), ref) < TOL


def test_lvalue_of_weight2_form_is_positive_real():
    # L(E, 1) for the conductor-27 curve eta(3t)^2 eta(9t)^2
    L = lvalue_at_1([(1, EtaQuotientSpec(((3, 2), (9, 2))))], 27)
    assert abs(mpmath.im(L)) < 1e-12 and mpmath.re(L) > 0


@pytest.mark.parametrize("r", [Fraction(1, 2), Fraction(1, 3), Fraction(5, 12)])
def test_period_check(r):
    res = period_lvalue_check(r)
    assert res.ok and res.rel_error < TOL


@pytest.mark.parametrize("r, j", KUMMER_GRID)
def test_kummer(r, j):
    assert kummer_check(r, j).rel_error < TOL


def test_kummer_rejects_j():
    with pytest.raises(ValueError):
        kummer_check(Fraction(1, 2), 3)


@pytest.mark.parametrize("r, tau", AL_POINTS)
def test_atkin_lehner(r, tau):
    assert al_check(r, tau).rel_error < TOL
    assert al_kmr_check(r, tau).rel_error < TOL


@pytest.mark.parametrize("tau", BORWEIN_POINTS)
def test_borwein(tau):
    assert borwein_numeric_check(tau).rel_error < TOL


def test_theta_a_at_large_height():
    # a(tau) = 1 + 6q + ... for Im tau large
    tau = 3j
    q = mpmath.exp(-6 * mpmath.pi)
    assert abs(theta_numeric("a", tau) - (1 + 6 * q)) < 1e-14


def test_check_result_json():
    d = al_check(Fraction(1, 2), 1j).to_json()
    assert set(d) == {"check_id", "inputs", "lhs", "rhs", "rel_error", "digits", "tolerance", "ok"}
    assert d["ok"] is True
