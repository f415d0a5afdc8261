"""
Chronological strategy backtest with $1 flat bets
"""

import logging
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from backend.core.models import BetChoice, BetDecision, StrategyParams
from backend.errors import EmptyDataset
from backend.backtest.pricing import price_games
from backend.valuation.betting import decide

logger = logging.getLogger(__name__)


class BetLedgerEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    game_id: str
    league: str
    year: int
    decision: BetDecision
    winnings: float


class YearlyRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    year: int
    roi_pct: Optional[float]
    games_bet: int
    total_return: float


class BacktestReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    league: Optional[str] = None
    games_analyzed: int
    games_priced: int
    games_bet: int
    total_return: float
    roi_pct: Optional[float]
    per_year: list[YearlyRow]
    params: StrategyParams
    ledger: tuple[BetLedgerEntry, ...] = Field(default=(), exclude=True)


def roi_pct(total_return: float, games_bet: int) -> Optional[float]:
    """100 * TR / N; None when nothing was bet"""
    if games_bet == 0:
        return None
    return 100.0 * total_return / games_bet


def run_backtest(dataset, params: StrategyParams, index, priced=None) -> BacktestReport:
    """Decide every game as-of its start and account the resulting bets

    ``priced`` may carry a precomputed pricing cache for ``dataset``.
    """
    if not dataset.games:
        raise EmptyDataset("cannot backtest an empty dataset")
    if priced is None:
        priced = price_games(dataset, index, params.model)

    ledger = []
    for game in priced:
        if not game.priced:
            continue
        decision = decide(game.ev_favorite, game.ev_underdog, game.p_favorite,
                          game.p_underdog, params.epsilon, params.ev_threshold)
        if decision.choice is BetChoice.NO_BET:
            continue
        ledger.append(BetLedgerEntry(
            game_id=game.game_id,
            league=game.league,
            year=game.year,
            decision=decision,
            winnings=game.winnings(decision.choice.side),
        ))

    total = math.fsum(entry.winnings for entry in ledger)
    report = BacktestReport(
        league=dataset.league,
        games_analyzed=len(priced),
        games_priced=sum(g.priced for g in priced),
        games_bet=len(ledger),
        total_return=total,
        roi_pct=roi_pct(total, len(ledger)),
        per_year=yearly_breakdown(ledger),
        params=params,
        ledger=tuple(ledger),
    )
    logger.info("Backtest %s: %d bets, TR %.4f, ROI %s", dataset.league or 'mixed',
                report.games_bet, report.total_return,
                'n/a' if report.roi_pct is None else f"{report.roi_pct:.2f}%")
    return report


def yearly_breakdown(ledger) -> list[YearlyRow]:
    """Exact ROI per calendar year of the bets in a ledger"""
    by_year = {}
    for entry in ledger:
        by_year.setdefault(entry.year, []).append(entry.winnings)
    rows = []
    for year in sorted(by_year):
        total = math.fsum(by_year[year])
        n = len(by_year[year])
        rows.append(YearlyRow(year=year, roi_pct=roi_pct(total, n), games_bet=n, total_return=total))
    return rows


def aggregate_yearly(per_league) -> list[YearlyRow]:
    """All-leagues row per year: summed total return over summed bets"""
    totals = {}
    for rows in per_league.values():
        for row in rows:
            returns, counts = totals.setdefault(row.year, ([], []))
            returns.append(row.total_return)
            counts.append(row.games_bet)
    aggregate = []
    for year in sorted(totals):
        returns, counts = totals[year]
        total, n = math.fsum(returns), sum(counts)
        aggregate.append(YearlyRow(year=year, roi_pct=roi_pct(total, n), games_bet=n, total_return=total))
    return aggregate
