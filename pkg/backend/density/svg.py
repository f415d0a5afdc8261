"""
Static SVG renderings of histogram and ASH grids
"""

import logging

import matplotlib
matplotlib.use('Agg')  # Use non-interactive backend
import matplotlib.pyplot as plt
import numpy as np

logger = logging.getLogger(__name__)

# fixed ids and no timestamp keep repeated renders byte-identical
matplotlib.rcParams['svg.hashsalt'] = 'linecheck'
SVG_METADATA = {'Date': None}


def histogram_svg(hist, path, xlabel='value'):
    fig, ax = plt.subplots(figsize=(8, 5))
    edges = hist.edges
    ax.bar(edges[:-1], hist.counts, width=hist.bin_width, align='edge',
           color='steelblue', edgecolor='white')
    ax.set_xlabel(xlabel)
    ax.set_ylabel('count')
    fig.savefig(path, format='svg', metadata=SVG_METADATA, bbox_inches='tight')
    plt.close(fig)
    logger.info("Wrote histogram SVG to %s", path)


def ash_svg(grid, path, xlabel='x', ylabel='y'):
    """Filled contours at deciles of the maximum density"""
    peak = float(np.max(grid.density))
    fig, ax = plt.subplots(figsize=(8, 6))
    if peak > 0 and grid.x_bins > 1 and grid.y_bins > 1:
        levels = peak * np.linspace(0.1, 1.0, 10)
        contour = ax.contourf(grid.x_centers, grid.y_centers, grid.density.T,
                              levels=levels, cmap='viridis', extend='neither')
        fig.colorbar(contour, ax=ax, label='density')
    else:
        logger.warning("ASH grid too small to contour; writing empty axes")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.savefig(path, format='svg', metadata=SVG_METADATA, bbox_inches='tight')
    plt.close(fig)
    logger.info("Wrote ASH contour SVG to %s", path)
