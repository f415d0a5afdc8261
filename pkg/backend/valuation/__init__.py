"""
Odds conversion, expected value and the betting rule
"""

from .betting import DecisionEncoding, choose, decide, decode_choice, encode_choice
from .odds import Payout, best_payout, expected_value, implied_probability, payout_from_odds

__all__ = [
    'DecisionEncoding',
    'Payout',
    'best_payout',
    'choose',
    'decide',
    'decode_choice',
    'encode_choice',
    'expected_value',
    'implied_probability',
    'payout_from_odds',
]
