"""
Histogram and averaged-shifted-histogram density grids
"""

from .histograms import (
    AshGrid2D,
    Histogram1D,
    ash2d,
    ash_frame,
    histogram,
    histogram_frame,
    scott_bin_width,
)
from .svg import ash_svg, histogram_svg

__all__ = [
    'AshGrid2D',
    'Histogram1D',
    'ash2d',
    'ash_frame',
    'ash_svg',
    'histogram',
    'histogram_frame',
    'histogram_svg',
    'scott_bin_width',
]
