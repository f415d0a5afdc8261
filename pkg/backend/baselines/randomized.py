"""
Randomized control strategies: coin-flip spread bets and Theta-weighted moneyline bets
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from backend.core.models import GameVictor, Side
from backend.core.rng import stream_generator
from backend.errors import EmptyDataset, MissingSpread
from backend.valuation.odds import best_payout
from config.settings import DEFAULT_BASELINE_PARAMS

logger = logging.getLogger(__name__)

SPREAD_WIN = DEFAULT_BASELINE_PARAMS['spread_win_payout']

# outcome codes
FAVORITE, UNDERDOG, PUSH = 1, 0, 2


class BaselineKind(str, Enum):
    SPREAD_EQUAL = 'spread_equal'
    MONEYLINE_EQUAL = 'moneyline_equal'
    MONEYLINE_TILTED = 'moneyline_tilted'

    @property
    def default_theta(self) -> float:
        if self is BaselineKind.MONEYLINE_TILTED:
            return DEFAULT_BASELINE_PARAMS['tilted_theta']
        return DEFAULT_BASELINE_PARAMS['theta']


class BaselineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: BaselineKind = BaselineKind.SPREAD_EQUAL
    theta: float = Field(default=0.5, ge=0, le=1)
    replications: int = Field(default=DEFAULT_BASELINE_PARAMS['replications'], ge=1)
    rng_seed: int = 0

    @classmethod
    def for_kind(cls, kind, theta=None, **kwargs):
        kind = BaselineKind(kind)
        return cls(kind=kind, theta=kind.default_theta if theta is None else theta, **kwargs)


class BaselineSummary(BaseModel):
    """Mean replicated ROI and its percentile interval for one league and kind"""

    model_config = ConfigDict(frozen=True)

    league: Optional[str] = None
    kind: BaselineKind
    theta: float
    replications: int
    seed: int
    games: int
    level: float
    mean_roi: float
    ci95: tuple[float, float]


def _require_games(dataset):
    if not dataset.games:
        raise EmptyDataset("baseline needs at least one game")


def spread_outcomes(dataset) -> np.ndarray:
    """Cover result per game at the most favorable line for each side

    The favorite is tested first; a push means neither side covered.
    """
    _require_games(dataset)
    codes = np.empty(len(dataset.games), dtype=np.int8)
    for i, game in enumerate(dataset.games):
        spreads = game.favorite_spreads
        if not spreads:
            raise MissingSpread(f"game {game.game_id} has no quoted spread")
        ms_f = max(spreads)
        ms_u = -min(spreads)
        if game.favorite_points + ms_f > game.underdog_points:
            codes[i] = FAVORITE
        elif game.underdog_points + ms_u > game.favorite_points:
            codes[i] = UNDERDOG
        else:
            codes[i] = PUSH
    return codes


def spread_pick_winnings(outcomes, pick_favorite) -> np.ndarray:
    hit = np.where(pick_favorite, outcomes == FAVORITE, outcomes == UNDERDOG)
    return np.where(outcomes == PUSH, 0.0, np.where(hit, SPREAD_WIN, -1.0))


def moneyline_arrays(dataset):
    """(victor codes, favorite payouts, underdog payouts) per game"""
    _require_games(dataset)
    n = len(dataset.games)
    victors = np.empty(n, dtype=np.int8)
    po_f = np.empty(n)
    po_u = np.empty(n)
    codes = {GameVictor.FAVORITE: FAVORITE, GameVictor.UNDERDOG: UNDERDOG, GameVictor.TIE: PUSH}
    for i, game in enumerate(dataset.games):
        victors[i] = codes[game.victor]
        po_f[i] = best_payout(game, Side.FAVORITE).per_dollar
        po_u[i] = best_payout(game, Side.UNDERDOG).per_dollar
    return victors, po_f, po_u


def moneyline_pick_winnings(victors, po_f, po_u, pick_favorite) -> np.ndarray:
    won = np.where(pick_favorite, po_f, po_u)
    hit = np.where(pick_favorite, victors == FAVORITE, victors == UNDERDOG)
    return np.where(victors == PUSH, 0.0, np.where(hit, won, -1.0))


def _roi(winnings) -> float:
    return 100.0 * float(np.sum(winnings)) / len(winnings)


class SpreadBaseline:
    """Coin-flip spread bets at 100/110; outcomes prepared once per dataset"""

    def __init__(self, dataset):
        self.outcomes = spread_outcomes(dataset)

    def __call__(self, seed, stream=0) -> float:
        rng = stream_generator(seed, stream)
        return _roi(spread_pick_winnings(self.outcomes, rng.random(len(self.outcomes)) > 0.5))


class MoneylineBaseline:
    """Moneyline bets that back the favorite with probability theta"""

    def __init__(self, dataset, theta):
        self.theta = theta
        self.victors, self.po_f, self.po_u = moneyline_arrays(dataset)

    def __call__(self, seed, stream=0) -> float:
        rng = stream_generator(seed, stream)
        picks = rng.random(len(self.victors)) < self.theta
        return _roi(moneyline_pick_winnings(self.victors, self.po_f, self.po_u, picks))


def spread_random_roi(dataset, seed) -> float:
    return SpreadBaseline(dataset)(seed)


def moneyline_random_roi(dataset, config: BaselineConfig, seed) -> float:
    return MoneylineBaseline(dataset, config.theta)(seed)


def replicate(op, config: BaselineConfig, workers=1) -> np.ndarray:
    """ROI of every replication, ordered by replication index"""
    streams = range(config.replications)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rois = list(pool.map(lambda r: op(config.rng_seed, r), streams))
    else:
        rois = [op(config.rng_seed, r) for r in streams]
    return np.asarray(rois, dtype=float)


def replicate_ci(op, config: BaselineConfig, workers=1, level=0.95):
    """(mean, low, high) of replicated ROIs; interval from type-7 percentiles"""
    rois = replicate(op, config, workers)
    tail = (1.0 - level) / 2.0
    low, high = np.quantile(rois, [tail, 1.0 - tail], method='linear')
    return math.fsum(rois) / len(rois), float(low), float(high)


def baseline_op(dataset, config: BaselineConfig):
    if config.kind is BaselineKind.SPREAD_EQUAL:
        return SpreadBaseline(dataset)
    return MoneylineBaseline(dataset, config.theta)


def run_baseline(dataset, config: BaselineConfig, workers=1, level=0.95) -> BaselineSummary:
    op = baseline_op(dataset, config)
    mean, low, high = replicate_ci(op, config, workers=workers, level=level)
    logger.info("✅ %s baseline over %d games x %d replications: mean ROI %.3f%% (%.2f, %.2f)",
                config.kind.value, len(dataset.games), config.replications, mean, low, high)
    return BaselineSummary(
        league=dataset.league,
        kind=config.kind,
        theta=config.theta,
        replications=config.replications,
        seed=config.rng_seed,
        games=len(dataset.games),
        level=level,
        mean_roi=mean,
        ci95=(low, high),
    )
