"""Orthonormal multiresolution ingredients: Meyer and Daubechies families.

Everything is evaluated in the Fourier domain.  The scaling filter u and the
wavelet filter v(x) = e^{-ix} conj(u(x + pi)) tie phi and psi across scales:

    phi_hat(x) = u_hat(x/2) phi_hat(x/2) / sqrt(2)
    psi_hat(x) = v_hat(x/2) phi_hat(x/2) / sqrt(2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .report import CheckResult

SQRT2 = math.sqrt(2.0)
MEYER_SUPPORT_RADIUS = 8.0 * np.pi / 3.0


def meyer_nu(s):
    """Degree-7 smooth ramp: nu(s) = s^4 (35 - 84 s + 70 s^2 - 20 s^3)."""
    s = np.clip(s, 0.0, 1.0)
    return s**4 * (35.0 - 84.0 * s + 70.0 * s**2 - 20.0 * s**3)


def meyer_phi_hat(x):
    """Meyer scaling function in the Fourier domain (real, even, in [0, 1])."""
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(ax)
    out[ax <= 2.0 * np.pi / 3.0] = 1.0
    mid = (ax > 2.0 * np.pi / 3.0) & (ax < 4.0 * np.pi / 3.0)
    # cos(pi/2 nu(s)) = sin(pi/2 nu(1-s)): the complementary form stays
    # accurate at the outer support edge where nu(s) -> 1
    out[mid] = np.sin(0.5 * np.pi * meyer_nu(2.0 - 3.0 * ax[mid] / (2.0 * np.pi)))
    return out if out.ndim else float(out)


def meyer_psi_abs(x):
    """Modulus of the Meyer wavelet transform (even, supported on 2pi/3 <= |x| <= 8pi/3)."""
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(ax)
    lo = (ax >= 2.0 * np.pi / 3.0) & (ax <= 4.0 * np.pi / 3.0)
    out[lo] = np.sin(0.5 * np.pi * meyer_nu(3.0 * ax[lo] / (2.0 * np.pi) - 1.0))
    hi = (ax > 4.0 * np.pi / 3.0) & (ax <= 8.0 * np.pi / 3.0)
    # complementary form: accurate where nu's argument approaches 1
    out[hi] = np.sin(0.5 * np.pi * meyer_nu(2.0 - 3.0 * ax[hi] / (4.0 * np.pi)))
    return out if out.ndim else float(out)


def _wrap_to_pi(x):
    """Map to [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


def meyer_u_hat(x):
    """2pi-periodic scaling filter: u_hat(x) = sqrt(2) phi_hat(2x) on [-pi, pi)."""
    return SQRT2 * meyer_phi_hat(2.0 * _wrap_to_pi(x))


@lru_cache(maxsize=16)
def daubechies_coefficients(n_moments: int) -> np.ndarray:
    """Length-2N scaling coefficients with sum sqrt(2), by spectral factorization.

    |u_hat(x)|^2 = 2 cos^{2N}(x/2) P(sin^2(x/2)) with
    P(y) = sum_{k<N} binom(N-1+k, k) y^k; the minimum-phase square root is
    taken by keeping the roots inside the unit circle.
    """
    N = int(n_moments)
    if not 2 <= N <= 10:
        raise ValueError(f"vanishing-moment count must be in 2..10, got {N}")
    p = np.array([math.comb(N - 1 + k, k) for k in range(N)], dtype=float)
    # roots of P(y), highest degree first for numpy.roots
    yroots = np.roots(p[::-1])
    poly = np.array([1.0 + 0.0j])
    for y in yroots:
        # y = (2 - z - 1/z) / 4  =>  z^2 - (2 - 4y) z + 1 = 0
        zpair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        z0 = zpair[np.argmin(np.abs(zpair))]
        poly = np.convolve(poly, np.array([1.0, -z0])) / (1.0 - z0)
    for _ in range(N):
        poly = np.convolve(poly, np.array([0.5, 0.5]))
    h = np.real(poly) * SQRT2
    # fix overall sign so the filter mass is positive
    if h.sum() < 0:
        h = -h
    return h


def daubechies_u_hat(n_moments: int, x):
    h = daubechies_coefficients(n_moments)
    x = np.asarray(x, dtype=float)
    n = np.arange(len(h))
    return np.exp(-1j * np.multiply.outer(x, n)) @ h.astype(complex)


def daubechies_phi_hat(n_moments: int, x, depth: int = 40):
    """Truncated infinite product prod_{j=1..depth} u_hat(x / 2^j) / sqrt(2)."""
    if depth < 20:
        raise ValueError(f"product depth must be >= 20, got {depth}")
    x = np.asarray(x, dtype=float)
    out = np.ones(x.shape, dtype=complex)
    for j in range(1, depth + 1):
        out *= daubechies_u_hat(n_moments, x / 2.0**j) / SQRT2
    return out


@dataclass(frozen=True)
class DecayProfile:
    """Fourier-decay margins (zeta for phi, eta for psi)."""

    zeta: float = 0.1
    eta: float = 0.1

    def __post_init__(self):
        if self.zeta <= 0 or self.eta <= 0:
            raise ValueError("decay margins must be positive")


@dataclass(frozen=True)
class WaveletSpec:
    """An orthonormal MRA exposing phi_hat, psi_hat, u_hat, v_hat and metadata.

    kind is "meyer" or "daubechies"; for Meyer the vanishing-moment count is
    infinite (psi_hat vanishes identically near 0) and the Fourier support
    radius is 8 pi / 3; for Daubechies the support radius is infinite.
    """

    kind: str
    n_moments: float = math.inf
    depth: int = 40
    decay: DecayProfile = DecayProfile()

    def __post_init__(self):
        if self.kind not in ("meyer", "daubechies"):
            raise ValueError(f"unknown wavelet kind {self.kind!r}")
        if self.kind == "daubechies":
            if not (isinstance(self.n_moments, int) and 2 <= self.n_moments <= 10):
                raise ValueError("daubechies requires integer n_moments in 2..10")

    @property
    def support_radius(self) -> float:
        return MEYER_SUPPORT_RADIUS if self.kind == "meyer" else math.inf

    def u_hat(self, x):
        if self.kind == "meyer":
            return np.asarray(meyer_u_hat(x), dtype=complex)
        return daubechies_u_hat(self.n_moments, x)

    def v_hat(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-1j * x) * np.conj(self.u_hat(x + np.pi))

    def phi_hat(self, x):
        if self.kind == "meyer":
            return np.asarray(meyer_phi_hat(x), dtype=complex)
        return daubechies_phi_hat(self.n_moments, x, self.depth)

    def psi_hat(self, x):
        x = np.asarray(x, dtype=float)
        return self.v_hat(x / 2.0) * self.phi_hat(x / 2.0) / SQRT2

    def config(self) -> dict:
        if self.kind == "meyer":
            return {"kind": "meyer"}
        return {"kind": "daubechies", "n": int(self.n_moments),
                "depth": self.depth}

    @classmethod
    def from_config(cls, cfg: dict) -> "WaveletSpec":
        cfg = dict(cfg)
        kind = cfg.pop("kind")
        if kind == "meyer":
            spec = cls("meyer")
        elif kind == "daubechies":
            spec = cls("daubechies", n_moments=int(cfg.pop("n")),
                       depth=int(cfg.pop("depth", 40)))
        else:
            raise ValueError(f"unknown wavelet kind {kind!r}")
        if cfg:
            raise ValueError(f"unknown wavelet config keys: {sorted(cfg)}")
        return spec

    def check_moment_condition(self, d: float) -> None:
        """Pairing-time guard: N >= max(2, -1/2 + |d|)."""
        needed = max(2.0, -0.5 + abs(d))
        if self.n_moments < needed:
            raise ValueError(
                f"wavelet has {self.n_moments} vanishing moments; "
                f"pairing with exponent d={d} needs at least {needed}"
            )


def check_cmf(w: WaveletSpec, n_points: int = 4096) -> CheckResult:
    """Max defect of |u(x)|^2 + |u(x + pi)|^2 = 2 over a uniform grid."""
    x = np.linspace(-np.pi, np.pi, n_points, endpoint=False)
    u0 = w.u_hat(x)
    u1 = w.u_hat(x + np.pi)
    defect = float(np.max(np.abs(np.abs(u0) ** 2 + np.abs(u1) ** 2 - 2.0)))
    tol = 1e-12 if w.kind == "meyer" else 1e-10
    return CheckResult(
        name="cmf_identity",
        passed=defect < tol,
        statistics={"max_defect": defect, "tolerance": tol},
        params={"wavelet": w.kind, "n_points": n_points},
    )


def _daubechies_u_abs_near_pi(n_moments: int, y):
    """|u_hat(pi + y)| by the closed-form magnitude, stable for tiny y.

    |u_hat(pi + y)|^2 = 2 sin^{2N}(y/2) P(cos^2(y/2)); the direct coefficient
    sum loses all significant digits once the value drops below ~1e-16.
    """
    N = int(n_moments)
    y = np.asarray(y, dtype=float)
    p = np.array([math.comb(N - 1 + k, k) for k in range(N)], dtype=float)
    c2 = np.cos(y / 2.0) ** 2
    pv = np.polyval(p[::-1], c2)
    return np.sqrt(2.0 * pv) * np.abs(np.sin(y / 2.0)) ** N


def vanishing_moment_order(w: WaveletSpec) -> float:
    """Slope of log |psi_hat(x)| against log |x| on x in [1e-4, 1e-2].

    Meyer returns math.inf (psi_hat vanishes identically near 0).
    """
    if w.kind == "meyer":
        return math.inf
    x = np.logspace(-4, -2, 64)
    # |psi_hat(x)| = |u_hat(x/2 + pi)| |phi_hat(x/2)| / sqrt(2)
    mag = (_daubechies_u_abs_near_pi(w.n_moments, x / 2.0)
           * np.abs(daubechies_phi_hat(w.n_moments, x / 2.0, w.depth)) / SQRT2)
    slope = np.polyfit(np.log(x), np.log(mag), 1)[0]
    return float(round(slope))


def check_w3(w: WaveletSpec, n_points: int = 2048) -> CheckResult:
    """inf |phi_hat| on the congruent set K = [-pi, pi]."""
    x = np.linspace(-np.pi, np.pi, n_points)
    inf_val = float(np.min(np.abs(w.phi_hat(x))))
    return CheckResult(
        name="phi_lower_bound_on_K",
        passed=inf_val > 1e-3,
        statistics={"inf_abs_phi": inf_val, "threshold": 1e-3},
        params={"wavelet": w.kind, "K": "[-pi, pi]", "n_points": n_points},
    )


def _envelope_slope(x, vals, n_bins: int = 24):
    """Log-log slope of the decay envelope, fitted on dyadic-bin maxima."""
    edges = np.geomspace(x[0], x[-1], n_bins + 1)
    xs, ms = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (x >= lo) & (x < hi)
        if not np.any(sel):
            continue
        m = np.max(vals[sel])
        if m > 0:
            xs.append(np.sqrt(lo * hi))
            ms.append(m)
    if len(xs) < 4:
        return -math.inf  # decayed to exactly zero: compact support
    return float(np.polyfit(np.log(xs), np.log(ms), 1)[0])


def check_w4(w: WaveletSpec, d: float, x_hi: float = 64.0 * np.pi,
             fd_step: float = 1e-3) -> CheckResult:
    """Fourier-decay margins: phi needs |d|+1/2+zeta, psi derivatives |d|+2+eta.

    Compact Fourier support passes immediately.  Otherwise the decay envelope
    slope is fitted on dyadic bins and compared to the required exponent;
    derivatives of psi_hat come from centered finite differences.
    """
    need_phi = abs(d) + 0.5 + w.decay.zeta
    need_psi = abs(d) + 2.0 + w.decay.eta
    if w.kind == "meyer":
        return CheckResult(
            name="fourier_decay_margins",
            passed=True,
            statistics={"phi_slope": -math.inf, "psi_slope": -math.inf,
                        "required_phi": need_phi, "required_psi": need_psi},
            params={"wavelet": w.kind, "d": d, "note": "compact Fourier support"},
        )
    x = np.geomspace(4.0 * np.pi, x_hi, 4096)
    phi_vals = np.abs(w.phi_hat(x))
    psi0 = np.abs(w.psi_hat(x))
    psi1 = np.abs(w.psi_hat(x + fd_step) - w.psi_hat(x - fd_step)) / (2 * fd_step)
    psi2 = np.abs(w.psi_hat(x + fd_step) - 2 * w.psi_hat(x)
                  + w.psi_hat(x - fd_step)) / fd_step**2
    phi_slope = _envelope_slope(x, phi_vals)
    psi_slope = max(_envelope_slope(x, v) for v in (psi0, psi1, psi2))
    sup_phi = float(np.max(phi_vals * (1.0 + x) ** need_phi))
    sup_psi = float(max(np.max(v * (1.0 + x) ** need_psi) for v in (psi0, psi1, psi2)))
    passed = (phi_slope <= -need_phi + 0.05) and (psi_slope <= -need_psi + 0.05)
    return CheckResult(
        name="fourier_decay_margins",
        passed=bool(passed),
        statistics={"phi_slope": phi_slope, "psi_slope": psi_slope,
                    "required_phi": need_phi, "required_psi": need_psi,
                    "sup_weighted_phi": sup_phi, "sup_weighted_psi": sup_psi},
        params={"wavelet": w.kind, "n": getattr(w, "n_moments", None), "d": d,
                "zeta": w.decay.zeta, "eta": w.decay.eta, "x_hi": x_hi},
    )
