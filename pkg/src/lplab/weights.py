"""Muckenhoupt weights: power weights and characteristic estimation.

The characteristic

    [w]_{A_p} = sup_B (avg_B w) * (avg_B w^(-1/(p-1)))^(p-1)

is estimated over grid-aligned balls at the sampled radii (1-d: all
contiguous windows of the matching widths; 2-d: discs).  The A_1
characteristic is the sup of M(w)/w with the uncentered maximal operator.

Power weights |x|^a are materialized with the singular cell replaced by its
cell average (analytic in 1-d, subsampled in 2-d), a documented O(spacing)
bias that keeps the quadrature convergent for a in (-n, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Grid, SampledField
from .maximal import _disc_footprint, hl_max


@dataclass(frozen=True)
class Weight:
    """A positive weight: power |x|^a, a constant, or custom samples."""

    kind: str  # "power" | "constant" | "custom"
    exponent: float = 0.0
    constant: float = 1.0
    samples: SampledField | None = None

    def __post_init__(self):
        if self.kind not in ("power", "constant", "custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "constant" and not self.constant > 0:
            raise ValueError("constant weight must be positive")
        if self.kind == "custom" and self.samples is None:
            raise ValueError("custom weight needs samples")

    @classmethod
    def power(cls, a: float) -> "Weight":
        return cls("power", exponent=a)

    @classmethod
    def const(cls, c: float = 1.0) -> "Weight":
        return cls("constant", constant=c)

    @classmethod
    def custom(cls, samples: SampledField) -> "Weight":
        return cls("custom", samples=samples)

    def materialize(self, grid: Grid) -> SampledField:
        if self.kind == "constant":
            return SampledField(grid, np.full(grid.shape, self.constant, dtype=float))
        if self.kind == "custom":
            if self.samples.grid != grid:
                raise ValueError("custom weight grid mismatch")
            if np.any(self.samples.values.real <= 0):
                raise ValueError("custom weight must be strictly positive")
            return self.samples
        a = self.exponent
        r = grid.radii()
        with np.errstate(divide="ignore"):
            vals = np.where(r > 0, r, 1.0) ** a
        origin = tuple([grid.points_per_axis // 2] * grid.dimension)
        vals[origin] = _singular_cell_average(grid, a)
        return SampledField(grid, vals)


def _singular_cell_average(grid: Grid, a: float) -> float:
    """Average of |x|^a over the cell containing the origin."""
    h = grid.spacing
    if grid.dimension == 1:
        if a <= -1:
            raise ValueError("power weight exponent must exceed -1 in 1-d")
        return (h / 2.0) ** a / (a + 1.0)
    if a <= -2:
        raise ValueError("power weight exponent must exceed -2 in 2-d")
    k = 128
    sub = (np.arange(k) + 0.5) / k * h - h / 2.0
    xx, yy = np.meshgrid(sub, sub, indexing="ij")
    return float(np.mean(np.hypot(xx, yy) ** a))


def _window_means_1d(vals: np.ndarray, width: int) -> np.ndarray:
    n = vals.size
    csum = np.concatenate([[0.0], np.cumsum(np.concatenate([vals, vals]))])
    return (csum[width : width + n] - csum[:n]) / width


def ap_characteristic(w: Weight, p: float, ball_radii, grid: Grid) -> float:
    """Estimate [w]_{A_p} over grid-aligned balls of the given radii."""
    if not p > 1:
        raise ValueError("A_p characteristic needs p > 1")
    wf = w.materialize(grid).values.real
    if np.any(wf <= 0):
        raise ValueError("weight must be strictly positive on the grid")
    sig = wf ** (-1.0 / (p - 1.0))
    best = 0.0
    radii = np.asarray(ball_radii, dtype=float)
    if grid.dimension == 1:
        for r in radii:
            width = max(1, int(round(2.0 * r / grid.spacing)))
            width = min(width, grid.points_per_axis)
            mw = _window_means_1d(wf, width)
            ms = _window_means_1d(sig, width)
            best = max(best, float(np.max(mw * ms ** (p - 1.0))))
        return best
    fw = np.fft.fft2(wf)
    fs = np.fft.fft2(sig)
    for r in radii:
        fp = _disc_footprint(r / grid.spacing, grid.points_per_axis)
        cells = int(fp.sum())
        if cells == 0:
            continue
        fpk = np.fft.fft2(fp)
        mw = np.maximum(np.real(np.fft.ifft2(fw * fpk)) / cells, 0.0)
        ms = np.maximum(np.real(np.fft.ifft2(fs * fpk)) / cells, 0.0)
        best = max(best, float(np.max(mw * ms ** (p - 1.0))))
    return best


def a1_check(w: Weight, grid: Grid) -> float:
    """Measured [w]_{A_1}: sup over the grid of M(w)/w."""
    wf = w.materialize(grid)
    vals = wf.values.real
    if np.any(vals <= 0):
        raise ValueError("weight must be strictly positive on the grid")
    m = hl_max(wf).values.real
    return float(np.max(m / vals))


def admissible_power_range(p: float, N: float, dimension: int) -> tuple:
    """Power exponents a with |x|^a in the class A_{pN/n}: (-n, n(pN/n - 1))."""
    s = p * N / dimension
    if s <= 1:
        raise ValueError("weighted experiments need pN/n > 1")
    return (-float(dimension), float(dimension) * (s - 1.0))
