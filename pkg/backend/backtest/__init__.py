"""
Strategy backtesting and ROI accounting
"""

from .engine import (
    BacktestReport,
    BetLedgerEntry,
    YearlyRow,
    aggregate_yearly,
    roi_pct,
    run_backtest,
    yearly_breakdown,
)
from .export import ledger_frame, load_benchmark, yearly_frame, yearly_panel
from .pricing import PricedGame, price_game, price_games

__all__ = [
    'BacktestReport',
    'BetLedgerEntry',
    'PricedGame',
    'YearlyRow',
    'aggregate_yearly',
    'ledger_frame',
    'load_benchmark',
    'price_game',
    'price_games',
    'roi_pct',
    'run_backtest',
    'yearly_breakdown',
    'yearly_frame',
    'yearly_panel',
]
