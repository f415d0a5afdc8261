"""
Randomized baseline strategies with Monte Carlo replication
"""

from .randomized import (
    BaselineConfig,
    BaselineKind,
    BaselineSummary,
    MoneylineBaseline,
    SpreadBaseline,
    moneyline_arrays,
    moneyline_pick_winnings,
    moneyline_random_roi,
    replicate,
    replicate_ci,
    run_baseline,
    spread_outcomes,
    spread_pick_winnings,
    spread_random_roi,
)

__all__ = [
    'BaselineConfig',
    'BaselineKind',
    'BaselineSummary',
    'MoneylineBaseline',
    'SpreadBaseline',
    'moneyline_arrays',
    'moneyline_pick_winnings',
    'moneyline_random_roi',
    'replicate',
    'replicate_ci',
    'run_baseline',
    'spread_outcomes',
    'spread_pick_winnings',
    'spread_random_roi',
]
