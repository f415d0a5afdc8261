"""
Per-game pricing cache: probabilities, payouts and EVs as-of each game
"""

import logging
from dataclasses import dataclass
from typing import Optional

from backend.core.models import GameVictor, ProbabilityModel, Side
from backend.errors import NoQuote
from backend.valuation.odds import best_payout, expected_value
from backend.winprob.probability import snapshot_for, team_probability

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PricedGame:
    game_id: str
    league: str
    year: int
    victor: GameVictor
    p_favorite: Optional[float] = None
    p_underdog: Optional[float] = None
    ev_favorite: Optional[float] = None
    ev_underdog: Optional[float] = None
    payout_favorite: Optional[float] = None
    payout_underdog: Optional[float] = None

    @property
    def priced(self) -> bool:
        return self.ev_favorite is not None and self.ev_underdog is not None

    def winnings(self, side: Side) -> float:
        """$1-bet result on one side: payout on a win, -1 on a loss, 0 on a tie"""
        if self.victor is GameVictor.TIE:
            return 0.0
        if side is Side.FAVORITE:
            return self.payout_favorite if self.victor is GameVictor.FAVORITE else -1.0
        return self.payout_underdog if self.victor is GameVictor.UNDERDOG else -1.0


def price_game(game, index, model) -> PricedGame:
    p_f = team_probability(snapshot_for(game, index, Side.FAVORITE), model)
    p_u = team_probability(snapshot_for(game, index, Side.UNDERDOG), model)
    base = dict(game_id=game.game_id, league=game.league, year=game.year, victor=game.victor)
    if p_f is None and p_u is None:
        return PricedGame(**base)
    # the mirrored index defines both sides together; this only covers odd inputs
    if p_f is None:
        p_f = 1.0 - p_u
    if p_u is None:
        p_u = 1.0 - p_f
    try:
        po_f = best_payout(game, Side.FAVORITE)
        po_u = best_payout(game, Side.UNDERDOG)
    except NoQuote as e:
        logger.debug("not pricing %s: %s", game.game_id, e)
        return PricedGame(p_favorite=p_f, p_underdog=p_u, **base)
    return PricedGame(
        p_favorite=p_f,
        p_underdog=p_u,
        ev_favorite=expected_value(p_f, po_f),
        ev_underdog=expected_value(p_u, po_u),
        payout_favorite=po_f.per_dollar,
        payout_underdog=po_u.per_dollar,
        **base,
    )


def price_games(dataset, index, model=ProbabilityModel.SIMPLE) -> list[PricedGame]:
    """Price every game in chronological order"""
    model = ProbabilityModel(model)
    priced = [price_game(game, index, model) for game in dataset.games]
    logger.info("Priced %d of %d games with the %s model",
                sum(p.priced for p in priced), len(priced), model.value)
    return priced
