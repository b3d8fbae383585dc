import math

import numpy as np
import pytest

from vaguelab.family import (FamilyBuilder, FamilyError, FamilyIndex,
                             member_at_scale_rescaled, norm_band,
                             time_samples)
from vaguelab.filters import (ExpGammaFilter, FilterPair, FractionalFilter,
                              OUFilter, UnitFilter, unit_pair)
from vaguelab.grids import inner_product, l2_norm
from vaguelab.mra import WaveletSpec


def test_index_validation():
    FamilyIndex(0, 0, "primal", "wavelet")
    with pytest.raises(FamilyError):
        FamilyIndex(-1, 0, "primal", "wavelet")
    with pytest.raises(FamilyError):
        FamilyIndex(0, 0, "left", "wavelet")
    with pytest.raises(FamilyError):
        FamilyIndex(0, 0, "primal", "scaling")


def test_unit_filter_members_are_orthonormal(unit_builder):
    # with h = 1 the family is the orthonormal wavelet system itself
    for j in range(0, 4):
        m = unit_builder.build_member(FamilyIndex(j, 0, "primal", "wavelet"))
        assert abs(m.norm - 1.0) < 1e-9
    a = unit_builder.build_member(FamilyIndex(0, 0, "primal", "wavelet"))
    b = unit_builder.build_member(FamilyIndex(0, 1, "primal", "wavelet"))
    c = unit_builder.build_member(FamilyIndex(1, 0, "primal", "wavelet"))
    assert abs(inner_product(a.spectrum, b.spectrum)) < 1e-9
    assert abs(inner_product(a.spectrum, c.spectrum)) < 1e-9


def test_shift_is_pure_phase(ou_builder):
    base = ou_builder.build_member(FamilyIndex(1, 0, "primal", "wavelet"))
    shifted = ou_builder.build_member(FamilyIndex(1, 3, "primal", "wavelet"))
    x = ou_builder.grid.x
    phase = np.exp(-1j * 2.0**-1 * 3 * x)
    assert np.max(np.abs(shifted.spectrum.values
                         - base.spectrum.values * phase)) < 1e-12
    assert abs(shifted.norm - base.norm) < 1e-12


def test_norm_closed_form_ou(ou_builder, meyer):
    # oracle: ||h2 psi_j0||^2 = (2 pi)^{-1} int |psi^(y)|^2 / (1 + (2^j y)^2) dy
    from vaguelab.mra import meyer_psi_abs
    for j in (0, 2):
        member = ou_builder.build_member(FamilyIndex(j, 0, "primal", "wavelet"))
        y = np.linspace(2.0 * np.pi / 3.0, 8.0 * np.pi / 3.0, 20001)
        dens = meyer_psi_abs(y) ** 2 / (1.0 + (2.0**j * y) ** 2)
        oracle = math.sqrt(2.0 * np.trapezoid(dens, y) / (2.0 * np.pi))
        assert abs(member.norm - oracle) < 1e-6


def test_dual_primal_product_cancels_filter(ou_builder, unit_builder):
    # conj(dual) * primal = |psi_jk|^2 pointwise: filters cancel exactly
    idx_p = FamilyIndex(2, 0, "primal", "wavelet")
    idx_d = FamilyIndex(2, 0, "dual", "wavelet")
    p = ou_builder.build_member(idx_p).spectrum.values
    d = ou_builder.build_member(idx_d).spectrum.values
    u = unit_builder.build_member(idx_p).spectrum.values
    assert np.max(np.abs(np.conj(d) * p - np.abs(u) ** 2)) < 1e-12


def test_fractional_dual_approximation_rejected(meyer):
    pair = FilterPair(FractionalFilter(0.7), FractionalFilter(0.7))
    builder = FamilyBuilder(meyer, pair)
    with pytest.raises(FamilyError):
        builder.build_member(FamilyIndex(0, 0, "dual", "approximation"))
    # the wavelet role is fine: Meyer support excludes the pole at 0
    member = builder.build_member(FamilyIndex(0, 0, "dual", "wavelet"))
    assert member.norm > 0


def test_level_profile_matches_member(ou_builder):
    # member_{j,0}(t) = 2^{j/2} g_j(2^j t) on the matching tau samples
    j = 1
    member = ou_builder.build_member(FamilyIndex(j, 0, "primal", "wavelet"))
    series = time_samples(member)
    profile = ou_builder.level_profile(j, "primal", "wavelet")
    # compare at t=0 and a few grid-aligned offsets
    n_half = len(series.values) // 2
    p_half = len(profile.values) // 2
    for step in (0, 16, 64, -32):
        t = step * series.dt
        tau = 2.0**j * t
        k = int(round((tau - profile.t0) / profile.dt))
        assert abs(profile.t0 + k * profile.dt - tau) < 1e-12
        lhs = series.values[n_half + step]
        rhs = 2.0 ** (j / 2.0) * profile.values[k]
        assert abs(lhs - rhs) < 1e-9


def test_level_profile_pad_refines(ou_builder):
    coarse = ou_builder.level_profile(0, "primal", "wavelet")
    fine = ou_builder.level_profile(0, "primal", "wavelet", pad_factor=2)
    assert fine.dt == pytest.approx(coarse.dt / 2.0)
    # coarse samples appear among the fine ones
    assert np.max(np.abs(fine.values[::2][:len(coarse.values)]
                         - coarse.values)) < 1e-9


def test_member_at_scale_rescaled_matches_base_grid(meyer, ou_pair, ou_builder):
    for j in (0, 3):
        direct = ou_builder.build_member(FamilyIndex(j, 0, "primal", "wavelet"))
        rescaled = member_at_scale_rescaled(meyer, ou_pair, j)
        assert abs(direct.norm - rescaled.norm) / direct.norm < 1e-9


def test_member_at_scale_negative_j(meyer, ou_pair):
    with pytest.raises(FamilyError):
        member_at_scale_rescaled(meyer, ou_pair, -2)
    m = member_at_scale_rescaled(meyer, ou_pair, -2, allow_negative=True)
    assert m.index.j == -2
    assert m.norm > 0


def test_norm_band_ou(meyer, ou_pair):
    result = norm_band(meyer, ou_pair)
    assert result.passed
    assert result.statistics["band_primal"] < 3.0
    assert result.statistics["band_dual"] < 3.0


def test_norm_band_exp_gamma_fails(meyer):
    pair = FilterPair(ExpGammaFilter(1.0), ExpGammaFilter(1.0))
    result = norm_band(meyer, pair, j_range=range(0, 7))
    assert result.passed is False


def test_norm_scaling_fractional_high_level(meyer):
    # extrapolation: log-norm grows linearly with slope d log 2 in j
    pair = FilterPair(FractionalFilter(0.7), FractionalFilter(0.7))
    lo = member_at_scale_rescaled(meyer, pair, 8).log_norm
    hi = member_at_scale_rescaled(meyer, pair, 20).log_norm
    slope = (hi - lo) / (12.0 * math.log(2.0))
    assert abs(slope - 0.7) < 1e-3


def test_time_samples_unit_norm(unit_builder):
    member = unit_builder.build_member(FamilyIndex(0, 0, "primal", "wavelet"))
    series = time_samples(member)
    time_norm = math.sqrt(float(np.sum(np.abs(series.values) ** 2)) * series.dt)
    assert abs(time_norm - 1.0) < 1e-9
    # real-valued generator in time: psi^ here is hermitian
    assert np.max(np.abs(series.values.imag)) < 1e-9
