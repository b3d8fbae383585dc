"""Uniform frequency grids, Plancherel quadrature and FFT-consistent transforms.

Conventions used throughout the package:

    forward:  F(x) = integral e^{-i x t} f(t) dt
    inverse:  f(t) = (2 pi)^{-1} integral e^{i t x} F(x) dx
    inner product:  <f, g> = (2 pi)^{-1} integral F(x) conj(G(x)) dx
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


class GridError(ValueError):
    """Invalid grid construction or mismatched grids."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class FourierGrid:
    """Symmetric uniform frequency grid x_m = -x_max + m dx, m = 0..n-1.

    n is a power of two so the FFT-based transforms below apply directly;
    the grid always contains x = 0 (at index n // 2).
    """

    x_max: float
    n: int

    def __post_init__(self):
        if not (self.x_max > 0):
            raise GridError(f"x_max must be positive, got {self.x_max}")
        if not _is_power_of_two(self.n) or self.n < 16:
            raise GridError(f"n must be a power of two >= 16, got {self.n}")

    @property
    def dx(self) -> float:
        return 2.0 * self.x_max / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.x_max + self.dx * np.arange(self.n)

    @property
    def dt(self) -> float:
        # time-domain spacing of the FFT-conjugate grid
        return np.pi / self.x_max

    @property
    def t0(self) -> float:
        return -0.5 * self.n * self.dt

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def time_window(self) -> float:
        return self.n * self.dt


def make_grid(x_max: float, n: int) -> FourierGrid:
    return FourierGrid(float(x_max), int(n))


@dataclass(frozen=True)
class SampledSpectrum:
    """Complex samples of a Fourier transform on a FourierGrid."""

    grid: FourierGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise GridError(
                f"values must have length {self.grid.n}, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def hermitian_defect(self) -> float:
        """Max |F(-x) - conj(F(x))| over grid points, relative to max |F|."""
        v = self.values
        mirrored = np.roll(v[::-1], 1)  # index m -> value at -x_m
        scale = np.max(np.abs(v))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(mirrored - np.conj(v))) / scale)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermitian_defect() < tol

    def to_json(self) -> str:
        payload = {
            "grid": {"x_max": self.grid.x_max, "n": self.grid.n},
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SampledSpectrum":
        payload = json.loads(text)
        grid = make_grid(payload["grid"]["x_max"], payload["grid"]["n"])
        vals = np.array([complex(re, im) for re, im in payload["values"]])
        return cls(grid, vals)

    def to_csv(self, path) -> None:
        _write_csv(path, "x", self.grid.x, self.values)


@dataclass(frozen=True)
class TimeSeries:
    """Complex samples f(t0 + l dt), l = 0..n-1."""

    t0: float
    dt: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.dt > 0):
            raise GridError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def to_csv(self, path) -> None:
        _write_csv(path, "t", self.t, self.values)


def _write_csv(path, axis_name, axis, values) -> None:
    lines = [f"{axis_name},re,im"]
    for a, z in zip(axis, values):
        lines.append(f"{float(a)!r},{float(z.real)!r},{float(z.imag)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _check_same_grid(f: SampledSpectrum, g: SampledSpectrum) -> None:
    if f.grid != g.grid:
        raise GridError("spectra live on different grids")


def inner_product(f: SampledSpectrum, g: SampledSpectrum) -> complex:
    """(2 pi)^{-1} integral F conj(G), periodic-trapezoid quadrature."""
    _check_same_grid(f, g)
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.dx / TWO_PI)


def l2_norm(f: SampledSpectrum) -> float:
    sq = inner_product(f, f).real
    return float(np.sqrt(max(sq, 0.0)))


def inverse_transform(f: SampledSpectrum) -> TimeSeries:
    """Sample f(t) = (2 pi)^{-1} integral e^{itx} F(x) dx on the conjugate grid."""
    grid = f.grid
    m = np.arange(grid.n)
    g = f.values * np.exp(1j * grid.t0 * m * grid.dx)
    spectrum_sum = grid.n * np.fft.ifft(g)
    phase = np.exp(1j * grid.t * (-grid.x_max))
    vals = (grid.dx / TWO_PI) * phase * spectrum_sum
    return TimeSeries(grid.t0, grid.dt, vals)


def forward_transform(series: TimeSeries, grid: FourierGrid) -> SampledSpectrum:
    """Inverse of :func:`inverse_transform` on matching grids."""
    if len(series.values) != grid.n or not np.isclose(series.dt, grid.dt):
        raise GridError("time series does not match the grid's conjugate sampling")
    l = np.arange(grid.n)
    pre = series.values * np.exp(1j * grid.x_max * l * grid.dt)
    summed = np.fft.fft(pre)
    vals = grid.dt * np.exp(-1j * grid.x * grid.t0) * summed
    return SampledSpectrum(grid, vals)


DEFAULT_X_MAX = 64.0 * np.pi
DEFAULT_N = 2**16


def default_grid() -> FourierGrid:
    """Grid resolving Meyer supports up to level j = 5 without aliasing."""
    return make_grid(DEFAULT_X_MAX, DEFAULT_N)
