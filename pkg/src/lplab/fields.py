"""Grid-sampled fields, Fourier transforms and (quasi-)norms.

Functions are discretized on a uniform periodic box [-E, E)^n, n in {1, 2}.
The Fourier transform follows the convention

    F(f)(xi) = integral f(x) exp(-2*pi*i*<x, xi>) dx,

realized as a scaled FFT: the forward transform is the Riemann sum of the
continuous integral, so a sampled exp(-pi*x^2) maps to exp(-pi*xi^2) up to
periodization/truncation error.  Frequencies are centered at 0 with spacing
1/(2E) (the reciprocal of the spatial period), so the frequency box is again
a valid Grid.

Scale ("t") axes are handled by ScaleGrid, a strictly decreasing set of
positive scales, log-uniform in the geometric case.  Integrals against the
multiplicative measure dt/t are rectangle sums in log t: each scale owns a
log-cell and contributes u(t_k)^q * log-cell-width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on the box [-half_extent, half_extent)^dimension.

    Parameters
    ----------
    dimension : int
        1 or 2.
    points_per_axis : int
        Samples per axis, a power of two >= 4.
    half_extent : float
        Half side length of the periodic box.
    """

    dimension: int
    points_per_axis: int
    half_extent: float

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if not _is_power_of_two(self.points_per_axis) or self.points_per_axis < 4:
            raise ValueError(
                f"points_per_axis must be a power of two >= 4, got {self.points_per_axis}"
            )
        if not self.half_extent > 0:
            raise ValueError("half_extent must be positive")

    @property
    def spacing(self) -> float:
        # points_per_axis is a power of two, so the division is exact and
        # spacing * points_per_axis reproduces 2 * half_extent bit-for-bit.
        return 2.0 * self.half_extent / self.points_per_axis

    @property
    def cell_count(self) -> int:
        return self.points_per_axis**self.dimension

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dimension

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dimension

    def axis_coords(self) -> np.ndarray:
        """Sample positions along one axis, from -E to E - spacing."""
        p = self.points_per_axis
        return (np.arange(p) - p // 2) * self.spacing

    def coords(self) -> np.ndarray:
        """Stacked coordinates, shape (dimension,) + shape."""
        ax = self.axis_coords()
        if self.dimension == 1:
            return ax[np.newaxis, :]
        return np.stack(np.meshgrid(ax, ax, indexing="ij"))

    def radii(self) -> np.ndarray:
        """Euclidean distance from the origin at every sample."""
        c = self.coords()
        return np.sqrt(np.sum(c * c, axis=0))

    def frequency_grid(self) -> "Grid":
        """The dual grid: spacing 1/(2E), extent P/(4E)."""
        return Grid(
            self.dimension,
            self.points_per_axis,
            self.points_per_axis / (4.0 * self.half_extent),
        )


def _check_values(grid: Grid, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != grid.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid shape {grid.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SampledField:
    """Complex samples of a function on a Grid.  Immutable after construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    def with_values(self, values: np.ndarray) -> "SampledField":
        return SampledField(self.grid, values)


@dataclass(frozen=True)
class SpectralField:
    """Complex samples of a Fourier transform on a centered frequency grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))


def field_from_function(grid: Grid, fn) -> SampledField:
    """Sample a callable of stacked coordinates (shape (dim, ...)) on the grid."""
    return SampledField(grid, np.asarray(fn(grid.coords()), dtype=complex))


def to_spectrum(f: SampledField) -> SpectralField:
    """Forward transform: Riemann-sum approximation of the continuous integral.

    Returns the spectrum on the dual grid, frequencies centered at 0.
    """
    g = f.grid
    shifted = np.fft.ifftshift(f.values)
    spec = np.fft.fftshift(np.fft.fftn(shifted)) * g.cell_volume
    return SpectralField(g.frequency_grid(), spec)


def from_spectrum(F: SpectralField) -> SampledField:
    """Exact inverse of to_spectrum (up to floating round-off)."""
    fg = F.grid
    spatial = fg.frequency_grid()  # dual of the dual is the original grid
    vals = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(F.values))) / spatial.cell_volume
    return SampledField(spatial, vals)


def lp_norm(f: SampledField, p: float) -> float:
    """(sum |f|^p * cell_volume)^(1/p).  Quasi-norm for 0 < p < 1 permitted."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    amp = np.abs(f.values)
    return float(np.sum(amp**p) * f.grid.cell_volume) ** (1.0 / p)


def weighted_lp_norm(f: SampledField, w: SampledField, p: float) -> float:
    """(integral |f|^p w)^(1/p) by grid quadrature.  Requires w >= 0 on a matching grid."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if f.grid != w.grid:
        raise ValueError("field and weight grids do not match")
    wv = w.values.real
    if np.any(wv < 0) or np.any(np.abs(w.values.imag) > 0):
        raise ValueError("weight must be nonnegative real")
    amp = np.abs(f.values)
    return float(np.sum(amp**p * wv) * f.grid.cell_volume) ** (1.0 / p)


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly decreasing positive scales, with per-scale log-cell weights.

    Geometric grids (t_k = t_max * ratio^k, ratio in (0,1)) carry a constant
    log spacing; explicit grids get centered log cells.  Either way, the
    weights realize integral u(t)^q dt/t ~= sum u(t_k)^q * weight_k.
    """

    scales: np.ndarray
    ratio: float | None = field(default=None)

    def __post_init__(self):
        arr = np.asarray(self.scales, dtype=float).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("scales must be a nonempty 1-d array")
        if np.any(arr <= 0):
            raise ValueError("scales must be positive")
        if arr.size > 1 and np.any(np.diff(arr) >= 0):
            raise ValueError("scales must be strictly decreasing")
        arr.setflags(write=False)
        object.__setattr__(self, "scales", arr)
        if self.ratio is not None and not (0 < self.ratio < 1):
            raise ValueError("ratio must lie in (0, 1)")

    @classmethod
    def geometric(cls, t_max: float, ratio: float, count: int) -> "ScaleGrid":
        if count < 1:
            raise ValueError("count must be >= 1")
        scales = t_max * ratio ** np.arange(count)
        return cls(scales, ratio=ratio)

    @classmethod
    def log_spaced(cls, t_min: float, t_max: float, count: int) -> "ScaleGrid":
        """count log-uniform scales from t_max down to t_min."""
        if count < 2:
            raise ValueError("count must be >= 2")
        if not 0 < t_min < t_max:
            raise ValueError("need 0 < t_min < t_max")
        ratio = (t_min / t_max) ** (1.0 / (count - 1))
        scales = np.exp(np.linspace(math.log(t_max), math.log(t_min), count))
        return cls(scales, ratio=ratio)

    @property
    def count(self) -> int:
        return int(self.scales.size)

    @property
    def t_min(self) -> float:
        return float(self.scales[-1])

    @property
    def t_max(self) -> float:
        return float(self.scales[0])

    def log_weights(self) -> np.ndarray:
        """Per-scale log-cell widths (each node owns one cell of the log axis)."""
        if self.ratio is not None:
            return np.full(self.count, math.log(1.0 / self.ratio))
        if self.count == 1:
            raise ValueError("single explicit scale has no log-cell width")
        logs = np.log(self.scales)
        w = np.empty(self.count)
        w[1:-1] = 0.5 * (logs[:-2] - logs[2:])
        w[0] = logs[0] - logs[1]
        w[-1] = logs[-2] - logs[-1]
        return w

    def spans_decades(self) -> float:
        return math.log10(self.t_max / self.t_min) if self.count > 1 else 0.0


def default_scale_grid(grid: Grid, count: int = 96) -> ScaleGrid:
    """Default dt/t scale range for a grid: [2^-10 * E, 2E], log-uniform.

    Mean-zero kernels kill the large-t end and band-limited fields the
    small-t end, so this range makes the scale integral of well-resolved
    test fields effectively complete.
    """
    return ScaleGrid.log_spaced(
        grid.half_extent / 1024.0, 2.0 * grid.half_extent, count
    )


def scale_integral(u: np.ndarray, scales: ScaleGrid, q: float):
    """(integral u(t)^q dt/t)^(1/q) by rectangle sum in log t.

    ``u`` holds nonnegative per-scale values with the scale axis first; extra
    trailing axes (e.g. space) are preserved, so the result is a scalar for
    1-d input and an array otherwise.
    """
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")
    arr = np.asarray(u, dtype=float)
    if arr.shape[0] != scales.count:
        raise ValueError("scale axis length does not match the scale grid")
    w = scales.log_weights().reshape((-1,) + (1,) * (arr.ndim - 1))
    total = np.sum(arr**q * w, axis=0) ** (1.0 / q)
    if total.ndim == 0:
        return float(total)
    return total
