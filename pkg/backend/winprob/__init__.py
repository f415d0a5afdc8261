"""
Historical win-rate index and win-probability models
"""

from .probability import (
    SpreadSnapshot,
    simple_probability,
    snapshot_for,
    team_probability,
    weighted_probability,
)
from .spread_index import SpreadIndex, build_index, dump_index, spread_key, win_rate

__all__ = [
    'SpreadIndex',
    'SpreadSnapshot',
    'build_index',
    'dump_index',
    'simple_probability',
    'snapshot_for',
    'spread_key',
    'team_probability',
    'weighted_probability',
    'win_rate',
]
