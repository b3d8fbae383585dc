import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vaguelab.grids import (FourierGrid, GridError, SampledSpectrum,
                            TimeSeries, default_grid, forward_transform,
                            inner_product, inverse_transform, l2_norm,
                            make_grid)


def test_grid_validation():
    with pytest.raises(GridError):
        make_grid(-1.0, 64)
    with pytest.raises(GridError):
        make_grid(10.0, 48)  # not a power of two
    with pytest.raises(GridError):
        make_grid(10.0, 8)  # too small


def test_grid_contains_zero():
    g = make_grid(32.0, 128)
    assert g.x[g.n // 2] == 0.0
    assert len(g.x) == g.n
    assert math.isclose(g.dx, 0.5)
    assert math.isclose(g.dt, np.pi / 32.0)


def test_gaussian_inverse_transform_closed_form():
    # oracle: the inverse transform of e^{-x^2/2} is (2 pi)^{-1/2} e^{-t^2/2}
    g = make_grid(64.0, 2**12)
    spec = SampledSpectrum(g, np.exp(-0.5 * g.x**2))
    series = inverse_transform(spec)
    expected = np.exp(-0.5 * series.t**2) / math.sqrt(2.0 * np.pi)
    assert np.max(np.abs(series.values - expected)) < 1e-12


def test_round_trip_forward_inverse():
    g = make_grid(32.0, 2**10)
    rng = np.random.default_rng(0)
    vals = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
    spec = SampledSpectrum(g, vals)
    back = forward_transform(inverse_transform(spec), g)
    assert np.max(np.abs(back.values - vals)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_plancherel_property(seed):
    # spectrum norm equals the time-domain l2 norm of the inverse transform
    g = make_grid(16.0, 256)
    rng = np.random.default_rng(seed)
    spec = SampledSpectrum(g, rng.standard_normal(g.n)
                           + 1j * rng.standard_normal(g.n))
    series = inverse_transform(spec)
    time_norm = math.sqrt(float(np.sum(np.abs(series.values) ** 2)) * series.dt)
    assert math.isclose(l2_norm(spec), time_norm, rel_tol=1e-10)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_hermitian_spectrum_gives_real_samples(seed):
    g = make_grid(16.0, 256)
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(g.n)  # real time samples
    series = TimeSeries(g.t0, g.dt, f)
    spec = forward_transform(series, g)
    assert spec.hermitian_defect() < 1e-9
    assert spec.is_hermitian(tol=1e-9)


def test_inner_product_convention():
    # <f, f> = (2 pi)^{-1} integral |F|^2
    g = make_grid(64.0, 2**12)
    spec = SampledSpectrum(g, np.exp(-0.5 * g.x**2))
    # integral of e^{-x^2} is sqrt(pi)
    assert math.isclose(inner_product(spec, spec).real,
                        math.sqrt(np.pi) / (2.0 * np.pi), rel_tol=1e-12)


def test_mismatched_grids_rejected():
    a = SampledSpectrum(make_grid(16.0, 64), np.ones(64))
    b = SampledSpectrum(make_grid(16.0, 128), np.ones(128))
    with pytest.raises(GridError):
        inner_product(a, b)


def test_spectrum_shape_validation():
    with pytest.raises(GridError):
        SampledSpectrum(make_grid(16.0, 64), np.ones(65))


def test_json_round_trip():
    g = make_grid(16.0, 64)
    rng = np.random.default_rng(3)
    spec = SampledSpectrum(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    clone = SampledSpectrum.from_json(spec.to_json())
    assert clone.grid == spec.grid
    assert np.array_equal(clone.values, spec.values)
    # serialization is deterministic
    assert spec.to_json() == clone.to_json()


def test_csv_output(tmp_path):
    g = make_grid(16.0, 64)
    spec = SampledSpectrum(g, np.ones(64))
    path = tmp_path / "spec.csv"
    spec.to_csv(path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "x,re,im"
    assert len(lines) == 65
    x, re, im = (float(v) for v in lines[1].split(","))
    assert x == g.x[0] and re == 1.0 and im == 0.0


def test_default_grid_shape():
    g = default_grid()
    assert g.n == 2**16
    assert math.isclose(g.x_max, 64.0 * np.pi)
    assert math.isclose(g.dt, 1.0 / 64.0)
