"""
Three-stage optimization panel: plain positive-EV betting, best epsilon at
tau = 0, and the full (epsilon, tau) optimum
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict

from backend.backtest.engine import run_backtest
from backend.backtest.pricing import price_games
from backend.core.models import ProbabilityModel, StrategyParams
from backend.search.grid import Grid, PricedArrays, default_grid, search_arrays


class StageRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: Optional[float]
    ev_threshold: float
    games_bet: int
    total_return: float
    roi_pct: Optional[float]


class OptimizePanel(BaseModel):
    model_config = ConfigDict(frozen=True)

    league: Optional[str]
    model: ProbabilityModel
    games_analyzed: int
    epsilon_range: tuple[float, float]
    ev_range: tuple[float, float]
    plain_ev: StageRow
    epsilon_only: StageRow
    full: StageRow


def _stage(result) -> StageRow:
    o = result.optimum
    return StageRow(epsilon=o.epsilon, ev_threshold=o.ev_threshold, games_bet=o.games_bet,
                    total_return=o.total_return,
                    roi_pct=o.roi_pct if o.games_bet else None)


def staged_optimization(dataset, grid, model, index, priced=None) -> OptimizePanel:
    model = ProbabilityModel(model)
    if priced is None:
        priced = price_games(dataset, index, model)
    arrays = PricedArrays.from_priced(priced)
    grid = grid if grid is not None else default_grid(arrays)

    plain = run_backtest(dataset, StrategyParams(epsilon=None, ev_threshold=0.0, model=model),
                         index, priced=priced)
    eps_only = search_arrays(arrays, Grid(epsilon_values=grid.epsilon_values, ev_values=(0.0,),
                                          epsilon_step=grid.epsilon_step, ev_step=grid.ev_step))
    full = search_arrays(arrays, grid)

    return OptimizePanel(
        league=dataset.league,
        model=model,
        games_analyzed=len(priced),
        epsilon_range=(grid.epsilon_values[0], grid.epsilon_values[-1]),
        ev_range=(grid.ev_values[0], grid.ev_values[-1]),
        plain_ev=StageRow(epsilon=None, ev_threshold=0.0, games_bet=plain.games_bet,
                          total_return=plain.total_return, roi_pct=plain.roi_pct),
        epsilon_only=_stage(eps_only),
        full=_stage(full),
    )
