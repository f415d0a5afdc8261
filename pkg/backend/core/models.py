"""
Canonical domain types shared by every module
"""

from datetime import datetime, timezone
from enum import Enum
from statistics import median
from typing import Annotated, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from config.settings import KNOWN_LEAGUES


def normalize_league(tag: str) -> str:
    """Case-normalize a league tag; unknown leagues are allowed"""
    tag = str(tag).strip().upper()
    if not tag:
        raise ValueError("league tag must be non-empty")
    return tag


def check_american(value: int) -> int:
    if value == 0 or abs(value) < 100:
        raise ValueError(f"American odds must satisfy |odds| >= 100, got {value}")
    return value


def as_utc(value: datetime) -> datetime:
    # naive timestamps are taken to be UTC already
    if value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


LeagueTag = Annotated[str, AfterValidator(normalize_league)]
MoneylineOdds = Annotated[int, AfterValidator(check_american)]
UtcDatetime = Annotated[datetime, AfterValidator(as_utc)]


def is_known_league(tag: str) -> bool:
    return normalize_league(tag) in KNOWN_LEAGUES


class GameVictor(str, Enum):
    FAVORITE = 'favorite'
    UNDERDOG = 'underdog'
    TIE = 'tie'


class Side(str, Enum):
    FAVORITE = 'favorite'
    UNDERDOG = 'underdog'


class BetChoice(str, Enum):
    FAVORITE = 'favorite'
    UNDERDOG = 'underdog'
    NO_BET = 'no_bet'

    @property
    def side(self) -> Optional[Side]:
        return None if self is BetChoice.NO_BET else Side(self.value)


class ProbabilityModel(str, Enum):
    SIMPLE = 'simple'
    WEIGHTED = 'weighted'


class CasinoQuote(BaseModel):
    """One casino's last pre-game line for a game"""

    model_config = ConfigDict(frozen=True)

    casino_id: str = Field(min_length=1)
    favorite_spread: Optional[float] = None
    favorite_ml: Optional[MoneylineOdds] = None
    underdog_ml: Optional[MoneylineOdds] = None
    updated_at: UtcDatetime

    @model_validator(mode='after')
    def _spread_sign(self):
        if self.favorite_spread is not None and self.favorite_spread > 0:
            raise ValueError(
                f"favorite_spread must be <= 0 (favorite's handicap), got {self.favorite_spread}"
            )
        return self

    @property
    def has_moneyline(self) -> bool:
        return self.favorite_ml is not None or self.underdog_ml is not None


class GameRecord(BaseModel):
    """One game with its final score and the casinos' closing quotes"""

    model_config = ConfigDict(frozen=True)

    game_id: str = Field(min_length=1)
    league: LeagueTag
    start_time: UtcDatetime
    favorite_name: str
    underdog_name: str
    favorite_points: int = Field(ge=0)
    underdog_points: int = Field(ge=0)
    quotes: tuple[CasinoQuote, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _check_quotes(self):
        seen = set()
        for quote in self.quotes:
            if quote.casino_id in seen:
                raise ValueError(f"duplicate quote for casino {quote.casino_id}")
            seen.add(quote.casino_id)
            if quote.updated_at >= self.start_time:
                raise ValueError(
                    f"quote from {quote.casino_id} updated at {quote.updated_at.isoformat()} "
                    f"does not precede start {self.start_time.isoformat()}"
                )
        spreads = self.favorite_spreads
        if spreads and median(spreads) > 0:
            raise ValueError("favorite label disagrees with the consensus spread")
        return self

    @property
    def victor(self) -> GameVictor:
        return victor_of(self)

    @property
    def year(self) -> int:
        return self.start_time.year

    @property
    def favorite_spreads(self) -> list[float]:
        return [q.favorite_spread for q in self.quotes if q.favorite_spread is not None]


class BetDecision(BaseModel):
    """Outcome of the betting rule plus the inputs that produced it"""

    model_config = ConfigDict(frozen=True)

    choice: BetChoice
    ev_favorite: float
    ev_underdog: float
    p_favorite: Optional[float] = Field(default=None, ge=0, le=1)
    p_underdog: Optional[float] = Field(default=None, ge=0, le=1)

    @model_validator(mode='after')
    def _no_bet_on_negative_ev(self):
        if self.ev_favorite < 0 and self.ev_underdog < 0 and self.choice is not BetChoice.NO_BET:
            raise ValueError("both expected values are negative but a bet was chosen")
        return self


class StrategyParams(BaseModel):
    """Betting-rule hyper-parameters; epsilon=None turns the probability band off"""

    model_config = ConfigDict(frozen=True)

    epsilon: Optional[float] = Field(default=0.0, ge=0, le=0.5)
    ev_threshold: float = Field(default=0.0, ge=0)
    model: ProbabilityModel = ProbabilityModel.SIMPLE


def victor_of(game: GameRecord) -> GameVictor:
    if game.favorite_points > game.underdog_points:
        return GameVictor.FAVORITE
    if game.underdog_points > game.favorite_points:
        return GameVictor.UNDERDOG
    return GameVictor.TIE
