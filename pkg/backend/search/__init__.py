"""
Parameter search, bootstrap intervals and synthetic markets
"""

from .bootstrap import SAMPLE_COLUMNS, BootstrapSample, bootstrap, load_samples, samples_frame
from .grid import Grid, GridResult, Optimum, PricedArrays, default_grid, grid_search, search_arrays
from .intervals import (
    BonferroniVerdict,
    IntervalMethod,
    IntervalReport,
    IntervalVariable,
    Sided,
    bonferroni_report,
    hdi_interval,
    percentile_interval,
    summarize_bootstrap,
)
from .staged import OptimizePanel, StageRow, staged_optimization
from .synth import SynthSpec, american_from_profit, synth_market

__all__ = [
    'SAMPLE_COLUMNS',
    'BonferroniVerdict',
    'BootstrapSample',
    'Grid',
    'GridResult',
    'IntervalMethod',
    'IntervalReport',
    'IntervalVariable',
    'Optimum',
    'OptimizePanel',
    'PricedArrays',
    'Sided',
    'StageRow',
    'SynthSpec',
    'american_from_profit',
    'bonferroni_report',
    'bootstrap',
    'default_grid',
    'grid_search',
    'hdi_interval',
    'load_samples',
    'percentile_interval',
    'samples_frame',
    'search_arrays',
    'staged_optimization',
    'summarize_bootstrap',
    'synth_market',
]
