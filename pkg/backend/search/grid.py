"""
Grid search over (epsilon, EV threshold) maximizing total return
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from backend.backtest.pricing import price_games
from backend.core.models import GameVictor
from backend.errors import InvalidGrid
from config.settings import DEFAULT_GRID_PARAMS

logger = logging.getLogger(__name__)

STEP_TOLERANCE = 1e-12


def lattice(start, stop, step) -> tuple[float, ...]:
    """start, start+step, ..., stop (inclusive), each rounded to the nearest decimal"""
    if step <= 0:
        raise InvalidGrid(f"step must be positive, got {step}")
    if stop < start:
        raise InvalidGrid(f"grid end {stop} is below its start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + k * step, 12) for k in range(count))


def round_up(value, step) -> float:
    return round(math.ceil(value / step - 1e-9) * step, 12)


class Grid(BaseModel):
    """Candidate epsilon values (EP) and EV thresholds (EV)"""

    model_config = ConfigDict(frozen=True)

    epsilon_values: tuple[float, ...]
    ev_values: tuple[float, ...]
    epsilon_step: float = DEFAULT_GRID_PARAMS['epsilon_step']
    ev_step: float = DEFAULT_GRID_PARAMS['ev_step']

    @model_validator(mode='after')
    def _check(self):
        for name, values, step in (('epsilon', self.epsilon_values, self.epsilon_step),
                                   ('ev', self.ev_values, self.ev_step)):
            if not values:
                raise ValueError(f"{name} grid is empty")
            if 0.0 not in values:
                raise ValueError(f"{name} grid must include 0")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{name} grid must be strictly ascending")
            for v in values:
                if abs(v / step - round(v / step)) * step > STEP_TOLERANCE:
                    raise ValueError(f"{name} value {v} is not a multiple of step {step}")
        if self.epsilon_values[0] < 0 or self.epsilon_values[-1] > 0.5:
            raise ValueError("epsilon values must lie in [0, 0.5]")
        if self.ev_values[0] < 0:
            raise ValueError("EV thresholds must be >= 0")
        return self

    @classmethod
    def build(cls, ev_max, epsilon_max=None, epsilon_step=None, ev_step=None):
        epsilon_step = epsilon_step or DEFAULT_GRID_PARAMS['epsilon_step']
        ev_step = ev_step or DEFAULT_GRID_PARAMS['ev_step']
        epsilon_max = DEFAULT_GRID_PARAMS['epsilon_max'] if epsilon_max is None else epsilon_max
        try:
            return cls(
                epsilon_values=lattice(0.0, epsilon_max, epsilon_step),
                ev_values=lattice(0.0, max(ev_max, 0.0), ev_step),
                epsilon_step=epsilon_step,
                ev_step=ev_step,
            )
        except ValueError as e:
            raise InvalidGrid(str(e))

    @property
    def shape(self):
        return len(self.epsilon_values), len(self.ev_values)


@dataclass(frozen=True)
class PricedArrays:
    """Column view of a pricing cache; unpriced games carry NaN and priced=False"""

    priced: np.ndarray
    p_f: np.ndarray
    p_u: np.ndarray
    ev_f: np.ndarray
    ev_u: np.ndarray
    w_f: np.ndarray
    w_u: np.ndarray

    @classmethod
    def from_priced(cls, priced_games):
        n = len(priced_games)
        cols = {name: np.full(n, np.nan) for name in ('p_f', 'p_u', 'ev_f', 'ev_u', 'w_f', 'w_u')}
        mask = np.zeros(n, dtype=bool)
        for i, g in enumerate(priced_games):
            if not g.priced:
                continue
            mask[i] = True
            cols['p_f'][i], cols['p_u'][i] = g.p_favorite, g.p_underdog
            cols['ev_f'][i], cols['ev_u'][i] = g.ev_favorite, g.ev_underdog
            tie = g.victor is GameVictor.TIE
            fav_won = g.victor is GameVictor.FAVORITE
            cols['w_f'][i] = 0.0 if tie else (g.payout_favorite if fav_won else -1.0)
            cols['w_u'][i] = 0.0 if tie else (-1.0 if fav_won else g.payout_underdog)
        return cls(priced=mask, **cols)

    def __len__(self):
        return len(self.priced)

    def take(self, idx) -> 'PricedArrays':
        return PricedArrays(**{name: getattr(self, name)[idx] for name in
                               ('priced', 'p_f', 'p_u', 'ev_f', 'ev_u', 'w_f', 'w_u')})

    def max_ev(self) -> float:
        if not self.priced.any():
            return 0.0
        return float(max(np.max(self.ev_f[self.priced]), np.max(self.ev_u[self.priced])))


class Optimum(BaseModel):
    model_config = ConfigDict(frozen=True)

    roi_pct: float
    epsilon: float
    ev_threshold: float
    frac_bet: float
    games_bet: int
    total_return: float


@dataclass(frozen=True)
class GridResult:
    grid: Grid
    tr_matrix: np.ndarray
    roi_matrix: np.ndarray
    bets_matrix: np.ndarray
    empty_mask: np.ndarray
    argmax: tuple
    optimum: Optimum


def default_grid(arrays: PricedArrays, epsilon_max=None, epsilon_step=None, ev_step=None) -> Grid:
    """EV thresholds run up to the largest per-game EV, rounded up to the step"""
    ev_step = ev_step or DEFAULT_GRID_PARAMS['ev_step']
    return Grid.build(round_up(max(arrays.max_ev(), 0.0), ev_step),
                      epsilon_max=epsilon_max, epsilon_step=epsilon_step, ev_step=ev_step)


def search_arrays(arrays: PricedArrays, grid: Grid) -> GridResult:
    """Evaluate the betting rule at every grid cell in one pass per epsilon

    Inside the epsilon band the bet side is fixed per game and the bet is
    placed iff its EV strictly exceeds tau, so one sort plus suffix sums give
    every tau column at once.
    """
    n_eps, n_ev = grid.shape
    taus = np.asarray(grid.ev_values)
    tr = np.zeros((n_eps, n_ev))
    bets = np.zeros((n_eps, n_ev), dtype=np.int64)

    ev_f, ev_u, p_f, p_u = arrays.ev_f, arrays.ev_u, arrays.p_f, arrays.p_u
    guard = arrays.priced & ~((ev_f < 0) & (ev_u < 0))
    fav_by_ev = ev_f >= ev_u
    chosen_ev = np.where(fav_by_ev, ev_f, ev_u)
    chosen_w = np.where(fav_by_ev, arrays.w_f, arrays.w_u)
    favorite_w = np.where(p_f >= p_u, arrays.w_f, arrays.w_u)

    for i, eps in enumerate(grid.epsilon_values):
        band = guard & (p_f >= 0.5 + eps)
        rest = guard & ~band
        order = np.argsort(chosen_ev[rest], kind='stable')
        sorted_ev = chosen_ev[rest][order]
        sorted_w = chosen_w[rest][order]
        suffix = np.concatenate([np.cumsum(sorted_w[::-1])[::-1], [0.0]])
        start = np.searchsorted(sorted_ev, taus, side='right')
        tr[i] = np.sum(favorite_w[band]) + suffix[start]
        bets[i] = int(np.count_nonzero(band)) + (len(sorted_ev) - start)

    empty = bets == 0
    roi = np.where(empty, 0.0, 100.0 * tr / np.where(empty, 1, bets))
    flat = int(np.argmax(tr))
    i, j = divmod(flat, n_ev)
    total_games = len(arrays)
    optimum = Optimum(
        roi_pct=float(roi[i, j]),
        epsilon=grid.epsilon_values[i],
        ev_threshold=grid.ev_values[j],
        frac_bet=float(bets[i, j]) / total_games if total_games else 0.0,
        games_bet=int(bets[i, j]),
        total_return=float(tr[i, j]),
    )
    return GridResult(grid=grid, tr_matrix=tr, roi_matrix=roi, bets_matrix=bets,
                      empty_mask=empty, argmax=(i, j), optimum=optimum)


def grid_search(dataset, grid, model, index, priced=None) -> GridResult:
    """Total return and ROI at every (epsilon, tau) cell; argmax ties go to the lowest cell"""
    if priced is None:
        priced = price_games(dataset, index, model)
    arrays = PricedArrays.from_priced(priced)
    grid = grid if grid is not None else default_grid(arrays)
    result = search_arrays(arrays, grid)
    logger.info("Grid %dx%d optimum: eps=%.2f tau=%.3f ROI=%.2f%% N=%d",
                *grid.shape, result.optimum.epsilon, result.optimum.ev_threshold,
                result.optimum.roi_pct, result.optimum.games_bet)
    return result
