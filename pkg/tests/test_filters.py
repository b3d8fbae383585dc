import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vaguelab.filters import (ExpGammaFilter, Filter, FilterEvalError,
                              FilterPair, FractionalFilter, MSTApproxFilter,
                              OUComplexFilter, OUFilter, RationalFilter,
                              UnitFilter, derivative_decay_check,
                              filter_from_config, h3_periodicity_check,
                              hermitian_defect, local_scaling_check,
                              quasi_homogeneity_check, unit_pair)

ALL_FILTERS = [
    UnitFilter(),
    OUFilter(),
    OUComplexFilter(),
    FractionalFilter(0.7),
    FractionalFilter(1.0),
    MSTApproxFilter(0.7),
    ExpGammaFilter(1.0),
    RationalFilter([1.0], [1.0, 0.0, 1.0]),
]


def _one(filt, x, **kw):
    return complex(filt.eval(np.array([x]), **kw)[0])


def test_point_values():
    assert _one(OUFilter(), 1.0) == pytest.approx(1.0 / math.sqrt(2.0))
    assert _one(OUComplexFilter(), 2.0) == pytest.approx(1.0 / (1.0 + 2.0j))
    # branch: (ix)^d = |x|^d e^{i pi d / 2} for x > 0
    assert _one(FractionalFilter(1.0), 2.0) == pytest.approx(2.0j)
    assert _one(FractionalFilter(1.0), -2.0) == pytest.approx(-2.0j)
    assert _one(FractionalFilter(0.5), 4.0) == pytest.approx(
        2.0 * cmath.exp(1j * math.pi / 4.0))
    assert _one(ExpGammaFilter(2.0), 1.0) == pytest.approx(math.exp(-1.0))
    assert _one(ExpGammaFilter(0.5), 4.0) == pytest.approx(math.exp(-2.0))
    # mst filter at pi: w = i pi / (1 - e^{-i pi}) = i pi / 2
    assert _one(MSTApproxFilter(1.0), math.pi) == pytest.approx(0.5j * math.pi)
    # rational 1 / (1 + x^2) equals the squared OU modulus
    assert _one(RationalFilter([1.0], [1.0, 0.0, 1.0]), 3.0) == \
        pytest.approx(1.0 / 10.0)


def test_inverse_power():
    x = np.array([0.5, 2.0, -3.0])
    for filt in ALL_FILTERS:
        prod = filt.eval(x) * filt.eval(x, power=-1)
        assert np.max(np.abs(prod - 1.0)) < 1e-12


@pytest.mark.parametrize("filt", ALL_FILTERS, ids=lambda f: f.kind)
def test_hermitian(filt):
    assert hermitian_defect(filt) < 1e-12


@pytest.mark.parametrize("filt", ALL_FILTERS, ids=lambda f: f.kind)
@pytest.mark.parametrize("power", [1, -1])
def test_derivatives_match_finite_differences(filt, power):
    # FD of the analytic first derivative also cross-checks the second
    x = np.linspace(0.3, 20.0, 41)
    h = 1e-6
    fd1 = (filt.eval(x + h, power=power) - filt.eval(x - h, power=power)) \
        / (2 * h)
    an1 = filt.eval(x, power=power, order=1)
    scale = np.max(np.abs(filt.eval(x, power=power))) + 1.0
    assert np.max(np.abs(fd1 - an1)) / scale < 1e-6
    fd2 = (filt.eval(x + h, power=power, order=1)
           - filt.eval(x - h, power=power, order=1)) / (2 * h)
    an2 = filt.eval(x, power=power, order=2)
    assert np.max(np.abs(fd2 - an2)) / scale < 1e-5


def test_mst_small_x_series_is_continuous():
    # values on both sides of the series cutoff must agree
    m = MSTApproxFilter(0.7)
    for order in (0, 1, 2):
        lo = m.eval(np.array([0.00999]), order=order)[0]
        hi = m.eval(np.array([0.01001]), order=order)[0]
        assert abs(lo - hi) < 1e-4


@settings(max_examples=50, deadline=None)
@given(x=st.floats(1e-6, 1e6), d=st.floats(0.1, 1.4))
def test_fractional_exact_homogeneity(x, d):
    filt = FractionalFilter(d)
    r = abs(_one(filt, 2.0 * x)) / abs(_one(filt, x))
    assert abs(r - 2.0**d) < 1e-12 * 2.0**d


def test_pole_errors():
    with pytest.raises(FilterEvalError):
        FractionalFilter(0.7).eval(np.array([0.0]), power=-1)
    with pytest.raises(FilterEvalError):
        MSTApproxFilter(0.7).eval(np.array([2.0 * np.pi]))
    with pytest.raises(FilterEvalError):
        RationalFilter([1.0], [0.0, 1.0]).eval(np.array([0.0]))
    # fractional with d > 0 extends by 0 at the origin for power +1
    assert _one(FractionalFilter(0.7), 0.0) == 0.0


def test_eval_argument_validation():
    with pytest.raises(FilterEvalError):
        OUFilter().eval(np.array([1.0]), power=2)
    with pytest.raises(FilterEvalError):
        OUFilter().eval(np.array([1.0]), order=3)


def test_exp_gamma_scaled_evaluation():
    f = ExpGammaFilter(2.0)
    x = np.array([25.0, 26.0])
    vals, log_scale = f.eval_scaled(x, power=-1)  # e^{+x^2}: overflows plainly
    assert np.all(np.isfinite(vals))
    assert log_scale > 300.0
    # log of the true value recovered: log v + log_scale = x^2
    log_true = np.log(np.abs(vals)) + log_scale
    assert np.max(np.abs(log_true - x**2)) < 1e-8


def test_quasi_homogeneity_fractional_exact():
    # the fitted exponent recovers the filter parameter exactly; the sign
    # convention is decay-positive, so |h| = |x|^{0.7} fits d_hat = -0.7
    r = quasi_homogeneity_check(FractionalFilter(0.7))
    assert r.passed
    assert abs(r.statistics["d_hat"] - FractionalFilter(0.7).d) < 1e-6
    assert abs(abs(r.statistics["d_hat"]) - 0.7) < 1e-6
    assert abs(r.statistics["C2"] / r.statistics["C1"] - 1.0) < 1e-6


def test_quasi_homogeneity_ou():
    r = quasi_homogeneity_check(OUFilter())
    assert r.passed
    assert abs(r.statistics["d_hat"] - 1.0) < 0.05


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_quasi_homogeneity_exp_gamma_fails(gamma):
    r = quasi_homogeneity_check(ExpGammaFilter(gamma))
    assert r.passed is False


def test_derivative_decay():
    assert derivative_decay_check(OUFilter()).passed
    # exact monomials: second derivative identically zero is tolerated
    assert derivative_decay_check(FractionalFilter(1.0)).passed
    assert derivative_decay_check(FractionalFilter(0.7)).passed


def test_local_scaling():
    assert local_scaling_check(OUFilter(), d=1.0, n_moments=math.inf).passed
    assert local_scaling_check(FractionalFilter(0.7), d=-0.7,
                               n_moments=math.inf).passed


def test_h3_periodicity():
    good = FilterPair(MSTApproxFilter(0.7), FractionalFilter(0.7))
    assert h3_periodicity_check(good).passed
    assert h3_periodicity_check(unit_pair()).passed
    bad = FilterPair(OUFilter(), FractionalFilter(1.0))
    assert h3_periodicity_check(bad).passed is False


def test_mst_over_fractional_ratio_value():
    # h2 / h1 = (1 - e^{-ix})^d, checked at x = pi: (1 + 1)^d = 2^d
    d = 0.7
    pair = FilterPair(MSTApproxFilter(d), FractionalFilter(d))
    x = np.array([np.pi])
    ratio = complex((pair.h2.eval(x) / pair.h1.eval(x))[0])
    assert ratio == pytest.approx(2.0**d)


def test_config_round_trip():
    for filt in ALL_FILTERS:
        clone = filter_from_config(filt.config())
        x = np.array([0.7, -1.3, 4.0])
        assert np.array_equal(clone.eval(x), filt.eval(x))
    with pytest.raises(ValueError):
        filter_from_config({"kind": "nope"})
    with pytest.raises(ValueError):
        filter_from_config({"kind": "ou", "extra": 1})


def test_rational_quasi_homogeneity_degree():
    filt = RationalFilter([1.0], [1.0, 0.0, 1.0])  # 1 / (1 + x^2)
    assert filt.d == 2.0
    r = quasi_homogeneity_check(filt)
    assert r.passed
    assert abs(r.statistics["d_hat"] - 2.0) < 0.05
