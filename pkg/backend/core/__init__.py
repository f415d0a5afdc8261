"""
Core domain types
"""

from .models import (
    BetChoice,
    BetDecision,
    CasinoQuote,
    GameRecord,
    GameVictor,
    ProbabilityModel,
    Side,
    StrategyParams,
    normalize_league,
    victor_of,
)
from .rng import resolve_seed, stream_generator

__all__ = [
    'BetChoice',
    'BetDecision',
    'CasinoQuote',
    'GameRecord',
    'GameVictor',
    'ProbabilityModel',
    'Side',
    'StrategyParams',
    'normalize_league',
    'victor_of',
    'resolve_seed',
    'stream_generator',
]
