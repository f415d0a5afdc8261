"""
American-odds payouts and expected value of a $1 bet
"""

from pydantic import BaseModel, ConfigDict, Field

from backend.core.models import Side
from backend.errors import InvalidOdds, NoQuote


class Payout(BaseModel):
    """Profit per $1 staked on a winning bet"""

    model_config = ConfigDict(frozen=True)

    per_dollar: float = Field(gt=0)


def payout_from_odds(odds) -> Payout:
    """+X pays X/100 per dollar, -Y pays 100/Y"""
    try:
        american = int(odds)
    except (TypeError, ValueError):
        raise InvalidOdds(f"odds must be an integer, got {odds!r}")
    if american != odds or abs(american) < 100:
        raise InvalidOdds(f"American odds must be integers with |odds| >= 100, got {odds!r}")
    if american > 0:
        return Payout(per_dollar=american / 100)
    return Payout(per_dollar=100 / -american)


def implied_probability(payout: Payout) -> float:
    """Break-even win probability at this payout"""
    return 1.0 / (1.0 + payout.per_dollar)


def best_payout(game, side) -> Payout:
    """Best price across the game's last-update quotes for one side"""
    side = Side(side)
    attr = 'favorite_ml' if side is Side.FAVORITE else 'underdog_ml'
    prices = [getattr(q, attr) for q in game.quotes if getattr(q, attr) is not None]
    if not prices:
        raise NoQuote(f"game {game.game_id}: no casino priced the {side.value}")
    return max((payout_from_odds(p) for p in prices), key=lambda p: p.per_dollar)


def expected_value(p_win: float, payout: Payout) -> float:
    """P(win) * payout - P(lose) for a $1 stake"""
    if not 0.0 <= p_win <= 1.0:
        raise ValueError(f"p_win must lie in [0, 1], got {p_win}")
    return p_win * payout.per_dollar - (1.0 - p_win)
