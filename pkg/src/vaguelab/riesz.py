"""Finite-section Riesz analysis: Gram bounds, biorthogonality, bracket
sums and the two-scale refinement identity.

Finite sections cannot certify an infinite Riesz basis; the contract here
is bounded and stable sections plus exact biorthogonality plus the
refinement identity, which is the numerically checkable content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .family import FamilyBuilder, FamilyError, FamilyIndex
from .filters import FilterPair
from .grids import SampledSpectrum, inverse_transform, l2_norm
from .mra import WaveletSpec, _wrap_to_pi
from .report import CheckResult


class RieszError(ValueError):
    """Invalid truncation or non-convergent computation."""


@dataclass(frozen=True)
class Truncation:
    """Finite section: wavelet levels 0..J with shifts |k| <= K, plus an
    optional level-0 approximation block."""

    J: int
    K: int
    include_approximation: bool = True

    def __post_init__(self):
        if self.J < 0 or self.K < 1:
            raise RieszError(f"need J >= 0 and K >= 1, got J={self.J}, K={self.K}")

    def indices(self, side: str, normalized: bool = True):
        out = []
        ks = range(-self.K, self.K + 1)
        if self.include_approximation:
            out.extend(FamilyIndex(0, k, side, "approximation", normalized)
                       for k in ks)
        for j in range(self.J + 1):
            out.extend(FamilyIndex(j, k, side, "wavelet", normalized) for k in ks)
        return out


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray
    index_map: tuple

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def _lag_table(builder: FamilyBuilder, left, right):
    """Inner products of all generator pairs as functions of the time lag.

    <m_{j,k}, m'_{j',k'}> equals the inverse transform of
    gen_{j} * conj(gen'_{j'}) evaluated at t = -(2^{-j}k - 2^{-j'}k'),
    which lands exactly on the conjugate time grid for dyadic shifts.
    left/right are lists of (j, side, role) generator keys.
    """
    grid = builder.grid
    table = {}
    for a in set(left):
        ga, _ = builder.generator(*a)
        for b in set(right):
            gb, _ = builder.generator(*b)
            cross = SampledSpectrum(grid, ga * np.conj(gb))
            table[(a, b)] = inverse_transform(cross)
    return table


def _entry(table, grid, a_idx: FamilyIndex, b_idx: FamilyIndex,
           norm_a: float, norm_b: float) -> complex:
    lag = 2.0 ** (-a_idx.j) * a_idx.k - 2.0 ** (-b_idx.j) * b_idx.k
    series = table[((a_idx.j, a_idx.side, a_idx.role),
                    (b_idx.j, b_idx.side, b_idx.role))]
    pos = (-lag - series.t0) / series.dt
    ell = int(round(pos))
    if abs(pos - ell) > 1e-9 or not 0 <= ell < len(series.values):
        raise RieszError(f"lag {lag} not on the conjugate time grid")
    return complex(series.values[ell]) / (norm_a * norm_b)


def _generator_norms(builder: FamilyBuilder, keys):
    norms = {}
    for key in set(keys):
        vals, log_scale = builder.generator(*key)
        if log_scale != 0.0:
            raise RieszError("scaled spectra are not supported in Gram sections")
        n = l2_norm(SampledSpectrum(builder.grid, vals))
        if n <= 0.0:
            raise FamilyError(f"zero-norm generator {key}")
        norms[key] = n
    return norms


def gram(builder: FamilyBuilder, side: str, tr: Truncation,
         normalized: bool = True) -> GramMatrix:
    """Conjugate-symmetric Gram matrix of the truncated family."""
    idxs = tr.indices(side, normalized)
    keys = [(i.j, i.side, i.role) for i in idxs]
    table = _lag_table(builder, keys, keys)
    norms = _generator_norms(builder, keys) if normalized else \
        {k: 1.0 for k in set(keys)}
    n = len(idxs)
    g = np.empty((n, n), dtype=complex)
    grid = builder.grid
    for ia, a in enumerate(idxs):
        ka = (a.j, a.side, a.role)
        for ib in range(ia, n):
            b = idxs[ib]
            kb = (b.j, b.side, b.role)
            val = _entry(table, grid, a, b, norms[ka], norms[kb])
            g[ia, ib] = val
            g[ib, ia] = np.conj(val)
    return GramMatrix(g, tuple(idxs))


def riesz_bounds(g: GramMatrix, residual_tol: float = 1e-8):
    """(C1, C2) = sqrt of extreme Gram eigenvalues, with residual check."""
    m = 0.5 * (g.matrix + g.matrix.conj().T)
    vals, vecs = scipy.linalg.eigh(m)
    for pick in (0, -1):
        v = vecs[:, pick]
        res = float(np.linalg.norm(m @ v - vals[pick] * v))
        if res > residual_tol:
            raise RieszError(f"eigenpair residual {res:.2e} exceeds tolerance")
    lo, hi = float(vals[0]), float(vals[-1])
    return math.sqrt(max(lo, 0.0)), math.sqrt(max(hi, 0.0))


def biorthogonality_defect(builder: FamilyBuilder, tr: Truncation) -> CheckResult:
    """Max |<dual_a, primal_b> - delta_ab| over the truncation.

    Computed on the un-normalized families, where the filters cancel
    exactly and the cross Gram reduces to the orthonormal one.
    """
    duals = tr.indices("dual", normalized=False)
    primals = tr.indices("primal", normalized=False)
    dkeys = [(i.j, i.side, i.role) for i in duals]
    pkeys = [(i.j, i.side, i.role) for i in primals]
    table = _lag_table(builder, dkeys, pkeys)
    grid = builder.grid
    worst = 0.0
    worst_cross = 0.0
    for ia, a in enumerate(duals):
        for ib, b in enumerate(primals):
            val = _entry(table, grid, a, b, 1.0, 1.0)
            defect = abs(val - (1.0 if ia == ib else 0.0))
            worst = max(worst, defect)
            if a.role != b.role:
                worst_cross = max(worst_cross, defect)
    return CheckResult(
        name="biorthogonality_defect",
        passed=worst < 1e-6,
        statistics={"max_defect": worst, "max_cross_block_defect": worst_cross,
                    "dimension": len(duals)},
        params={**builder.config(), "J": tr.J, "K": tr.K,
                "include_approximation": tr.include_approximation},
    )


def bracket_sum(wavelet: WaveletSpec, pair: FilterPair, n_samples: int = 1024,
                tail_tol: float = 1e-10, k_cap: int = 4096) -> CheckResult:
    """min/max over [-pi, pi) of sum_k |h1 phi^ (x + 2 pi k)|^2.

    The shift sum is truncated adaptively once an added ring of terms
    contributes less than tail_tol.
    """
    x = -np.pi + 2.0 * np.pi * np.arange(n_samples) / n_samples
    total = np.abs(pair.h1.eval(x) * np.asarray(wavelet.phi_hat(x))) ** 2
    k = 1
    while True:
        ring = np.zeros_like(total)
        for sgn in (1, -1):
            xs = x + 2.0 * np.pi * sgn * k
            base = np.asarray(wavelet.phi_hat(xs), dtype=complex)
            vals = np.zeros_like(base)
            mask = base != 0.0
            if np.any(mask):
                vals[mask] = pair.h1.eval(xs[mask]) * base[mask]
            ring += np.abs(vals) ** 2
        total += ring
        if float(np.max(ring)) < tail_tol:
            break
        k += 1
        if k > k_cap:
            raise RieszError("bracket sum tail did not converge")
    lower, upper = float(np.min(total)), float(np.max(total))
    return CheckResult(
        name="bracket_sum",
        passed=lower > 1e-6 and upper < 1e6,
        statistics={"lower": lower, "upper": upper, "k_max": k,
                    "n_samples": n_samples},
        params={"wavelet": wavelet.config(), "h1": pair.h1.config()},
    )


def refinement_identity(wavelet: WaveletSpec, pair: FilterPair, j: int,
                        builder: FamilyBuilder | None = None,
                        n_symbol: int = 1024,
                        support_tol: float = 1e-8) -> CheckResult:
    """Two-scale identity for the normalized transformed families.

    (a) Phi_j^ = U_j Phi_{j+1}^ and eta_j^ = V_j Phi_{j+1}^ pointwise,
        with U_j, V_j built as 2 pi periodic symbols of xi = x / 2^{j+1};
    (b) det M(xi) equals
        (|Phi#_{j+1}|^2 / (|Phi#_j| |Psi#_j|)) (h2/h1)(2^{j+1} xi) (-2 e^{-i xi});
    (c) min |det M| over xi in [-pi, pi).
    """
    if builder is None:
        builder = FamilyBuilder(wavelet, pair)
    grid = builder.grid
    norms = _generator_norms(builder, [(j, "primal", "approximation"),
                                       (j + 1, "primal", "approximation"),
                                       (j, "primal", "wavelet")])
    n_phi_j = norms[(j, "primal", "approximation")]
    n_phi_j1 = norms[(j + 1, "primal", "approximation")]
    n_psi_j = norms[(j, "primal", "wavelet")]

    def u_symbol(xi):
        xi = _wrap_to_pi(xi)
        return (n_phi_j1 / n_phi_j) * wavelet.u_hat(xi)

    def v_symbol(xi):
        xi = _wrap_to_pi(xi)
        ratio = pair.h2.eval(2.0 ** (j + 1) * xi) / pair.h1.eval(2.0 ** (j + 1) * xi)
        return (n_phi_j1 / n_psi_j) * ratio * wavelet.v_hat(xi)

    # (a): pointwise residuals on the working grid
    phi_j = builder.generator(j, "primal", "approximation")[0] / n_phi_j
    phi_j1 = builder.generator(j + 1, "primal", "approximation")[0] / n_phi_j1
    eta_j = builder.generator(j, "primal", "wavelet")[0] / n_psi_j
    xi_grid = 2.0 ** (-(j + 1)) * grid.x
    on_support = np.abs(phi_j1) > support_tol * float(np.max(np.abs(phi_j1)))
    res_phi = float(np.max(np.abs(
        phi_j[on_support] - u_symbol(xi_grid[on_support]) * phi_j1[on_support])))
    res_eta = float(np.max(np.abs(
        eta_j[on_support] - v_symbol(xi_grid[on_support]) * phi_j1[on_support])))
    excluded = int(np.sum(~on_support))

    # (b), (c): determinant of the 2x2 refinement matrix on [-pi, pi)
    xi = -np.pi + 2.0 * np.pi * np.arange(n_symbol) / n_symbol + 1.0 / 3.0 / n_symbol
    det = (u_symbol(xi) * v_symbol(xi + np.pi)
           - u_symbol(xi + np.pi) * v_symbol(xi))
    scale = n_phi_j1**2 / (n_phi_j * n_psi_j)
    h_ratio = pair.h2.eval(2.0 ** (j + 1) * xi) / pair.h1.eval(2.0 ** (j + 1) * xi)
    det_formula = scale * h_ratio * (-2.0 * np.exp(-1j * xi))
    res_det = float(np.max(np.abs(det - det_formula)) / np.max(np.abs(det_formula)))
    min_abs_det = float(np.min(np.abs(det)))

    passed = res_phi < 1e-9 and res_eta < 1e-9 and res_det < 1e-9
    return CheckResult(
        name="refinement_identity",
        passed=passed,
        statistics={"residual_phi": res_phi, "residual_eta": res_eta,
                    "residual_det": res_det, "min_abs_det": min_abs_det,
                    "excluded_points": excluded,
                    "norm_ratio_u": n_phi_j1 / n_phi_j,
                    "norm_ratio_v": n_phi_j1 / n_psi_j},
        params={"wavelet": wavelet.config(), "filters": pair.config(), "j": j},
    )
