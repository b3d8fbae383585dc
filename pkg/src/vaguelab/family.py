"""The four filter-transformed families built from one wavelet basis.

Spectra, with psi_jk(x)^ = 2^{-j/2} e^{-i 2^{-j} k x} psi^(2^{-j} x):

    primal wavelet          h2(x)            * psi_jk^(x)
    dual wavelet            conj(1 / h2(x))  * psi_jk^(x)
    primal approximation    h1(x)            * phi_jk^(x)
    dual approximation      conj(1 / h1(x))  * phi_jk^(x)

Generators (k = 0) are cached per (j, side, role); k-translates are pure
phase factors. Norms are k-independent.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np

from .filters import Filter, FilterEvalError, FilterPair
from .grids import (FourierGrid, SampledSpectrum, TimeSeries, default_grid,
                    inverse_transform, l2_norm, make_grid)
from .mra import WaveletSpec
from .report import CheckResult

SIDES = ("primal", "dual")
ROLES = ("wavelet", "approximation")


class FamilyError(ValueError):
    """Invalid family index or non-constructable member."""


@dataclass(frozen=True)
class FamilyIndex:
    j: int
    k: int
    side: str
    role: str
    normalized: bool = False

    def __post_init__(self):
        if self.j < 0:
            raise FamilyError(f"family levels require j >= 0, got {self.j}")
        if self.side not in SIDES:
            raise FamilyError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.role not in ROLES:
            raise FamilyError(f"role must be one of {ROLES}, got {self.role!r}")


@dataclass(frozen=True)
class FamilyMember:
    """One family function, sampled in frequency.

    For filters with super-exponential growth the stored spectrum is
    rescaled by e^{-log_scale}; the true spectrum is spectrum * e^{log_scale}.
    Everywhere else log_scale is 0 and spectrum is the plain transform.
    """

    index: FamilyIndex
    spectrum: SampledSpectrum
    log_scale: float = 0.0

    @property
    def log_norm(self) -> float:
        scaled = l2_norm(self.spectrum)
        if scaled <= 0.0:
            raise FamilyError("member has zero norm")
        return math.log(scaled) + self.log_scale

    @property
    def norm(self) -> float:
        # may overflow to inf for extreme filters; log_norm stays finite
        try:
            return math.exp(self.log_norm)
        except OverflowError:
            return math.inf


def _filtered_product(h: Filter, x: np.ndarray, power: int, conjugate: bool,
                      base: np.ndarray, zero_order: float):
    """base(x) * h(x)^power (conjugated if asked), with pole handling at 0.

    Returns (values, log_scale). Where base vanishes the product is 0 and
    the filter is never evaluated. zero_order is the vanishing order of the
    base at x = 0; a filter pole there is absorbed (limiting value 0) when
    zero_order > |d|, and refused otherwise.
    """
    out = np.zeros(len(x), dtype=complex)
    mask = base != 0.0
    if not np.any(mask):
        return out, 0.0
    xm = x[mask]
    at_zero = xm == 0.0
    pole_at_zero = False
    if np.any(at_zero):
        try:
            h.eval(np.array([0.0]), power=power)
        except FilterEvalError:
            d = abs(h.d) if h.d is not None else math.inf
            if not zero_order > d:
                raise FamilyError(
                    "filter pole at x=0 where the base function does not "
                    f"vanish fast enough (order {zero_order}, |d|={d})"
                )
            warnings.warn(
                "filter pole at x=0 absorbed by vanishing moments; "
                "spectrum extended by its limiting value 0", RuntimeWarning)
            pole_at_zero = True
    xe = np.where(at_zero, 1.0, xm) if pole_at_zero else xm
    vals, log_scale = h.eval_scaled(xe, power=power)
    if pole_at_zero:
        vals = np.where(at_zero, 0.0, vals)
    if conjugate:
        vals = np.conj(vals)
    out[mask] = base[mask] * vals
    return out, float(log_scale)


class FamilyBuilder:
    """Builds family members over one wavelet, filter pair and grid.

    Generator spectra are cached per (j, side, role); the cache supports
    concurrent reads with locked inserts. Members are immutable.
    """

    def __init__(self, wavelet: WaveletSpec, pair: FilterPair,
                 grid: FourierGrid | None = None):
        self.wavelet = wavelet
        self.pair = pair
        self.grid = grid if grid is not None else default_grid()
        self._cache: dict = {}
        self._lock = threading.Lock()

    def config(self) -> dict:
        return {
            "wavelet": self.wavelet.config(),
            "filters": self.pair.config(),
            "grid": {"x_max": self.grid.x_max, "n": self.grid.n},
        }

    def _generator(self, j: int, side: str, role: str, grid: FourierGrid):
        """Spectrum values of the k = 0 member of (j, side, role) on grid."""
        x = grid.x
        if role == "wavelet":
            base = self.wavelet.psi_hat(2.0 ** (-j) * x)
            h = self.pair.h2
        else:
            base = self.wavelet.phi_hat(2.0 ** (-j) * x)
            h = self.pair.h1
        base = 2.0 ** (-j / 2.0) * np.asarray(base, dtype=complex)
        power = 1 if side == "primal" else -1
        zero_order = self.wavelet.n_moments if role == "wavelet" else 0.0
        vals, log_scale = _filtered_product(
            h, x, power, conjugate=(side == "dual"), base=base,
            zero_order=zero_order)
        return vals, log_scale

    def generator(self, j: int, side: str, role: str):
        key = (j, side, role)
        cached = self._cache.get(key)
        if cached is None:
            vals, log_scale = self._generator(j, side, role, self.grid)
            with self._lock:
                cached = self._cache.setdefault(key, (vals, log_scale))
        return cached

    def build_member(self, idx: FamilyIndex) -> FamilyMember:
        vals, log_scale = self.generator(idx.j, idx.side, idx.role)
        if idx.k != 0:
            phase = np.exp(-1j * 2.0 ** (-idx.j) * idx.k * self.grid.x)
            vals = vals * phase
        if idx.normalized:
            scaled_norm = l2_norm(SampledSpectrum(self.grid, vals))
            if scaled_norm <= 0.0:
                raise FamilyError(f"member {idx} has zero norm")
            vals = vals / scaled_norm
            log_scale = 0.0
        return FamilyMember(idx, SampledSpectrum(self.grid, vals), log_scale)

    def level_profile(self, j: int, side: str, role: str,
                      pad_factor: int = 1) -> TimeSeries:
        """g_j with member(j,k)(t) = 2^{j/2} norm_scale * g_j(2^j t - k).

        g_j(tau) = (2 pi)^{-1} integral e^{i tau y} H(2^j y) w(y) dy on the
        base y-grid, so resolution is uniform in j. pad_factor > 1 extends
        the grid by zeros, refining the tau sampling by that factor.
        The series absorbs the member's e^{log_scale}; its l2 norm over tau
        equals the scaled member norm (up to the 2^{j/2} Jacobian).
        """
        if pad_factor < 1 or pad_factor & (pad_factor - 1):
            raise FamilyError("pad_factor must be a power of two >= 1")
        grid = make_grid(self.grid.x_max * pad_factor, self.grid.n * pad_factor)
        return inverse_transform(self.level_spectrum(j, side, role, grid))

    def level_spectrum(self, j: int, side: str, role: str,
                       grid: FourierGrid | None = None) -> SampledSpectrum:
        """Spectrum of g_j on the base y-grid: H(2^j y) w(y) with the
        side/role filter H and mother spectrum w. Valid for any integer j,
        including negative (coarser-than-base) levels."""
        grid = grid if grid is not None else self.grid
        y = grid.x
        if role == "wavelet":
            base = np.asarray(self.wavelet.psi_hat(y), dtype=complex)
            h = self.pair.h2
        else:
            base = np.asarray(self.wavelet.phi_hat(y), dtype=complex)
            h = self.pair.h1
        power = 1 if side == "primal" else -1
        zero_order = self.wavelet.n_moments if role == "wavelet" else 0.0
        vals, _ = _filtered_product(h, 2.0**j * y, power,
                                    conjugate=(side == "dual"), base=base,
                                    zero_order=zero_order)
        return SampledSpectrum(grid, vals)


def member_at_scale_rescaled(wavelet: WaveletSpec, pair: FilterPair, j: int,
                             side: str = "primal", role: str = "wavelet",
                             base_grid: FourierGrid | None = None,
                             allow_negative: bool = False) -> FamilyMember:
    """k = 0 member on a grid whose x_max is scaled by 2^j.

    Relative frequency resolution over the member's support is then
    j-independent, so norms stay accurate at large j.
    """
    if j > 30:
        raise FamilyError(f"j={j} exceeds the supported range (j <= 30)")
    if j < 0 and not allow_negative:
        raise FamilyError("negative j requires allow_negative=True")
    base = base_grid if base_grid is not None else default_grid()
    grid = make_grid(base.x_max * 2.0**j, base.n)
    builder = FamilyBuilder(wavelet, pair, grid)
    if j < 0:
        vals, log_scale = builder._generator(j, side, role, grid)
        idx = _unchecked_index(j, 0, side, role)
        return FamilyMember(idx, SampledSpectrum(grid, vals), log_scale)
    return builder.build_member(FamilyIndex(j, 0, side, role))


def _unchecked_index(j: int, k: int, side: str, role: str) -> FamilyIndex:
    """Index with negative j, for internal synthesis use only."""
    idx = object.__new__(FamilyIndex)
    for name, val in (("j", j), ("k", k), ("side", side), ("role", role),
                      ("normalized", False)):
        object.__setattr__(idx, name, val)
    return idx


def time_samples(member: FamilyMember, edge_energy_tol: float = 1e-8) -> TimeSeries:
    """Inverse transform of the member's (scaled) spectrum.

    Warns when a non-negligible share of spectral energy sits within 1%
    of the grid edge, which signals time-domain aliasing.
    """
    grid = member.spectrum.grid
    v = member.spectrum.values
    total = float(np.sum(np.abs(v) ** 2))
    if total > 0.0:
        edge = np.abs(grid.x) >= 0.99 * grid.x_max
        share = float(np.sum(np.abs(v[edge]) ** 2)) / total
        if share > edge_energy_tol:
            warnings.warn(
                f"spectral energy share {share:.2e} within 1% of the grid "
                "edge; time samples may alias", RuntimeWarning)
    return inverse_transform(member.spectrum)


def norm_band(wavelet: WaveletSpec, pair: FilterPair, j_range=range(0, 9),
              base_grid: FourierGrid | None = None) -> CheckResult:
    """2^{jd}-compensated norms of primal/dual wavelet generators across j.

    r_j = ||primal_j|| 2^{jd} and r'_j = ||dual_j|| 2^{-jd} should each stay
    in a fixed band when |h2| is quasi-homogeneous with exponent d.
    """
    from .filters import quasi_homogeneity_check
    h2 = pair.h2
    if h2.d is not None:
        d = h2.d
    else:
        d = quasi_homogeneity_check(h2).statistics.get("d_hat", 0.0)
    log2 = math.log(2.0)
    log_r, log_rp = [], []
    for j in j_range:
        primal = member_at_scale_rescaled(wavelet, pair, j, "primal", "wavelet",
                                          base_grid=base_grid)
        dual = member_at_scale_rescaled(wavelet, pair, j, "dual", "wavelet",
                                        base_grid=base_grid)
        log_r.append(primal.log_norm + j * d * log2)
        log_rp.append(dual.log_norm - j * d * log2)
    def _band(vals):
        spread = max(vals) - min(vals)
        try:
            return math.exp(spread)
        except OverflowError:
            return math.inf
    band_primal, band_dual = _band(log_r), _band(log_rp)
    return CheckResult(
        name="norm_band",
        passed=band_primal < 10.0 and band_dual < 10.0,
        statistics={
            "d": d,
            "log_r_primal": log_r,
            "log_r_dual": log_rp,
            "band_primal": band_primal,
            "band_dual": band_dual,
        },
        params={"wavelet": wavelet.config(), "filters": pair.config(),
                "j_range": [min(j_range), max(j_range)]},
    )
