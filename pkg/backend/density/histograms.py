"""
Scott's-rule histograms and bivariate averaged shifted histograms (ASH)
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from backend.errors import DegenerateSamples
from config.settings import DEFAULT_DENSITY_PARAMS

SCOTT = DEFAULT_DENSITY_PARAMS['scott_constant']


@dataclass(frozen=True)
class Histogram1D:
    """Counts on the half-open bins [origin + k*h, origin + (k+1)*h)"""

    origin: float
    bin_width: float
    counts: np.ndarray
    n: int

    @property
    def edges(self) -> np.ndarray:
        return self.origin + self.bin_width * np.arange(len(self.counts) + 1)


@dataclass(frozen=True)
class AshGrid2D:
    """ASH density on the fine grid; each fine cell is (h_x/m_x) by (h_y/m_y)"""

    x_origin: float
    y_origin: float
    h_x: float
    h_y: float
    m_x: int
    m_y: int
    density: np.ndarray

    @property
    def x_bins(self) -> int:
        return self.density.shape[0]

    @property
    def y_bins(self) -> int:
        return self.density.shape[1]

    @property
    def cell_area(self) -> float:
        return (self.h_x / self.m_x) * (self.h_y / self.m_y)

    @property
    def x_centers(self) -> np.ndarray:
        delta = self.h_x / self.m_x
        return self.x_origin + delta * (np.arange(self.x_bins) + 0.5)

    @property
    def y_centers(self) -> np.ndarray:
        delta = self.h_y / self.m_y
        return self.y_origin + delta * (np.arange(self.y_bins) + 0.5)

    def integral(self) -> float:
        return float(np.sum(self.density) * self.cell_area)


def _values(samples) -> np.ndarray:
    return np.asarray(samples, dtype=float).ravel()


def scott_bin_width(samples) -> float:
    """3.49 * s * n^(-1/3) with the sample standard deviation s"""
    x = _values(samples)
    if x.size < 2:
        raise DegenerateSamples(f"Scott's rule needs at least 2 samples, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateSamples("Scott's rule is undefined for constant samples")
    s = float(np.std(x, ddof=1))
    return SCOTT * s * np.cbrt(x.size) ** -1


def _lattice(x, width):
    """(origin, bin count, bin index per sample) for bins of ``width`` anchored at 0"""
    origin = math.floor(x.min() / width) * width
    nbins = max(1, math.ceil((x.max() - origin) / width - 1e-9))
    idx = np.clip(np.floor((x - origin) / width).astype(np.int64), 0, nbins - 1)
    return origin, nbins, idx


def histogram(samples, width_override: Optional[float] = None) -> Histogram1D:
    x = _values(samples)
    if x.size == 0:
        raise DegenerateSamples("histogram needs at least one sample")
    if width_override is not None:
        width = float(width_override)
    elif x.size == 1:
        # a single sample has no spread; any positive width gives one bin
        width = 1.0
    else:
        width = scott_bin_width(x)
    if not width > 0:
        raise DegenerateSamples(f"bin width must be positive, got {width}")
    origin, nbins, idx = _lattice(x, width)
    counts = np.bincount(idx, minlength=nbins)
    return Histogram1D(origin=origin, bin_width=width, counts=counts, n=int(x.size))


def _axis_width(values, bins, width):
    if width is not None:
        if not width > 0:
            raise DegenerateSamples(f"bin width must be positive, got {width}")
        return float(width)
    if bins is not None:
        span = float(values.max() - values.min())
        if span == 0:
            raise DegenerateSamples("cannot split a zero-width range into bins")
        return span / int(bins)
    return scott_bin_width(values)


def _triangle(m) -> np.ndarray:
    offsets = np.arange(-(m - 1), m)
    return 1.0 - np.abs(offsets) / m


def ash2d(xs, ys, bins=None, shifts=None, widths=None) -> AshGrid2D:
    """Bivariate ASH with triangular weights

    Bin widths come from ``widths``, else ``bins`` (counts over the sample
    range), else Scott's rule per axis. The fine grid is padded by m-1 cells
    on each side so no smoothed mass falls off it.
    """
    x, y = _values(xs), _values(ys)
    if x.size != y.size:
        raise ValueError(f"xs and ys differ in length ({x.size} vs {y.size})")
    if widths is None and x.size < 2:
        raise DegenerateSamples("ASH needs at least 2 points")
    if x.size == 0:
        raise DegenerateSamples("ASH needs at least one point")
    m_default = DEFAULT_DENSITY_PARAMS['shifts']
    m_x, m_y = shifts or (m_default, m_default)
    if m_x < 1 or m_y < 1:
        raise ValueError(f"shift counts must be >= 1, got {(m_x, m_y)}")
    bins_x, bins_y = bins or (None, None)
    width_x, width_y = widths or (None, None)
    h_x = _axis_width(x, bins_x, width_x)
    h_y = _axis_width(y, bins_y, width_y)

    dx, dy = h_x / m_x, h_y / m_y
    ox, nx, ix = _lattice(x, dx)
    oy, ny, iy = _lattice(y, dy)
    counts = np.zeros((nx + 2 * (m_x - 1), ny + 2 * (m_y - 1)))
    np.add.at(counts, (ix + m_x - 1, iy + m_y - 1), 1.0)

    wx, wy = _triangle(m_x), _triangle(m_y)
    smoothed = np.apply_along_axis(lambda col: np.convolve(col, wx, mode='same'), 0, counts)
    smoothed = np.apply_along_axis(lambda row: np.convolve(row, wy, mode='same'), 1, smoothed)
    density = smoothed / (x.size * h_x * h_y)
    return AshGrid2D(x_origin=ox - (m_x - 1) * dx, y_origin=oy - (m_y - 1) * dy,
                     h_x=h_x, h_y=h_y, m_x=int(m_x), m_y=int(m_y), density=density)


def histogram_frame(hist: Histogram1D) -> pd.DataFrame:
    edges = hist.edges
    return pd.DataFrame({'bin_left': edges[:-1], 'bin_right': edges[1:], 'count': hist.counts})


def ash_frame(grid: AshGrid2D) -> pd.DataFrame:
    xc, yc = np.meshgrid(grid.x_centers, grid.y_centers, indexing='ij')
    return pd.DataFrame({'x_center': xc.ravel(), 'y_center': yc.ravel(),
                         'density': grid.density.ravel()})
