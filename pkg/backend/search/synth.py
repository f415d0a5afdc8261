"""
Synthetic markets with a known, planted pricing inefficiency
"""

import logging
import math
from datetime import datetime, timedelta, timezone

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from backend.core.models import CasinoQuote, GameRecord
from backend.core.rng import stream_generator
from backend.errors import InvalidSpec
from backend.ingest.dataset import Dataset

logger = logging.getLogger(__name__)

SHARP_CASINO = 'sharp'
SOFT_CASINO = 'soft'
TEAMS = tuple(f"Team {chr(65 + i // 10)}{i % 10}" for i in range(30))


class SynthSpec(BaseModel):
    """Generating distribution of a synthetic market

    ``spread_probs`` maps a favorite spread to the favorite's true win
    probability given no tie. The sharp casino prices fair odds minus
    ``vig``; on ``soft_fraction`` of the games the soft casino pays
    ``(1 + soft_margin)`` times the fair decimal odds on one random side,
    which makes that bet's true EV equal to ``soft_margin``.
    """

    model_config = ConfigDict(frozen=True)

    league: str = 'SYN'
    n_games: int = Field(default=1000, ge=1)
    spread_probs: dict[float, float] = Field(default_factory=lambda: {0.0: 0.5})
    vig: float = Field(default=0.045, ge=0, lt=1)
    soft_margin: float = Field(default=0.1, ge=0)
    soft_fraction: float = Field(default=0.2, ge=0, le=1)
    tie_rate: float = Field(default=0.0, ge=0, lt=1)
    start: datetime = datetime(2010, 1, 1, tzinfo=timezone.utc)
    interval_hours: float = Field(default=6.0, gt=0)

    @model_validator(mode='after')
    def _check_spreads(self):
        if not self.spread_probs:
            raise ValueError("spread_probs must declare at least one spread")
        for spread, p in self.spread_probs.items():
            if spread > 0:
                raise ValueError(f"favorite spread must be <= 0, got {spread}")
            if not 0.0 < p < 1.0:
                raise ValueError(f"win probability for spread {spread} must lie in (0, 1)")
            if abs(spread * 2 - round(spread * 2)) > 1e-9:
                raise ValueError(f"spread {spread} is not on the half-point lattice")
        return self

    @classmethod
    def parse(cls, raw) -> 'SynthSpec':
        try:
            return cls.model_validate(raw)
        except PydanticValidationError as e:
            raise InvalidSpec(str(e))


def american_from_profit(profit: float) -> int:
    """American odds paying no more than ``profit`` per dollar"""
    if profit <= 0:
        raise InvalidSpec(f"price implies non-positive profit {profit}")
    if profit >= 1.0:
        return int(math.floor(100.0 * profit + 1e-9))
    return -int(math.ceil(100.0 / profit - 1e-9))


def fair_profit(p: float) -> float:
    return (1.0 - p) / p


def _scores(rng, outcome):
    loser = int(rng.integers(7, 35))
    if outcome == 'tie':
        return loser, loser
    winner = loser + int(rng.integers(1, 21))
    return (winner, loser) if outcome == 'favorite' else (loser, winner)


def synth_market(spec, seed) -> Dataset:
    """Dataset drawn from ``spec``; the same seed gives the same games"""
    if not isinstance(spec, SynthSpec):
        spec = SynthSpec.parse(spec)
    rng = stream_generator(seed)
    spreads = sorted(spec.spread_probs)
    width = len(str(spec.n_games))
    games = []
    for i in range(spec.n_games):
        spread = spreads[int(rng.integers(0, len(spreads)))]
        p = spec.spread_probs[spread]
        if rng.random() < spec.tie_rate:
            outcome = 'tie'
        else:
            outcome = 'favorite' if rng.random() < p else 'underdog'
        fav_pts, und_pts = _scores(rng, outcome)

        sharp_f = american_from_profit(fair_profit(p) * (1.0 - spec.vig))
        sharp_u = american_from_profit(fair_profit(1.0 - p) * (1.0 - spec.vig))
        soft_f, soft_u = sharp_f, sharp_u
        if rng.random() < spec.soft_fraction:
            if rng.random() < 0.5:
                soft_f = american_from_profit((1.0 + spec.soft_margin) / p - 1.0)
            else:
                soft_u = american_from_profit((1.0 + spec.soft_margin) / (1.0 - p) - 1.0)

        start = spec.start + timedelta(hours=spec.interval_hours * i)
        teams = rng.choice(len(TEAMS), size=2, replace=False)
        games.append(GameRecord(
            game_id=f"{spec.league}-{i:0{width}d}",
            league=spec.league,
            start_time=start,
            favorite_name=TEAMS[teams[0]],
            underdog_name=TEAMS[teams[1]],
            favorite_points=fav_pts,
            underdog_points=und_pts,
            quotes=(
                CasinoQuote(casino_id=SHARP_CASINO, favorite_spread=spread, favorite_ml=sharp_f,
                            underdog_ml=sharp_u, updated_at=start - timedelta(hours=1)),
                CasinoQuote(casino_id=SOFT_CASINO, favorite_spread=spread, favorite_ml=soft_f,
                            underdog_ml=soft_u, updated_at=start - timedelta(hours=2)),
            ),
        ))
    logger.info("Generated %d synthetic %s games (seed %d)", len(games), spec.league, seed)
    return Dataset.from_games(games, source_meta=(f"synth:{seed}",))
