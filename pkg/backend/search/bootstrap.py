"""
Bootstrap of the grid-search optimum

Games are resampled with replacement; each draw keeps the probabilities and
EVs it was priced with against the original chronological index.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from backend.backtest.pricing import price_games
from backend.core.rng import stream_generator
from backend.errors import EmptyDataset
from backend.search.grid import Optimum, PricedArrays, default_grid, search_arrays
from backend.winprob.spread_index import build_index

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ['iteration', 'opt_roi', 'opt_epsilon', 'opt_ev_threshold', 'frac_bet']


class BootstrapSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    iteration: int = Field(ge=0)
    optimum: Optimum

    @property
    def row(self) -> dict:
        return {
            'iteration': self.iteration,
            'opt_roi': self.optimum.roi_pct,
            'opt_epsilon': self.optimum.epsilon,
            'opt_ev_threshold': self.optimum.ev_threshold,
            'frac_bet': self.optimum.frac_bet,
        }


def uniform_resample(rng, n):
    return rng.integers(0, n, size=n)


def bootstrap(dataset, grid, model, iterations, seed, index=None, workers=1,
              resampler=None, priced=None) -> list[BootstrapSample]:
    """Optimum of every resample, ordered by iteration

    Iteration k draws from ``stream_generator(seed, k)`` so the result does
    not depend on ``workers``. ``resampler(rng, n)`` returns the draw indices.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if not dataset.games:
        raise EmptyDataset("cannot bootstrap an empty dataset")
    if priced is None:
        priced = price_games(dataset, index if index is not None else build_index(dataset), model)
    arrays = PricedArrays.from_priced(priced)
    grid = grid if grid is not None else default_grid(arrays)
    resampler = resampler or uniform_resample
    n = len(arrays)

    def one(k):
        idx = resampler(stream_generator(seed, k), n)
        return BootstrapSample(iteration=k, optimum=search_arrays(arrays.take(idx), grid).optimum)

    logger.info("Bootstrapping %d games x %d iterations on a %dx%d grid (%d workers)",
                n, iterations, *grid.shape, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(one, range(iterations)))
    else:
        samples = [one(k) for k in range(iterations)]
    logger.info("✅ bootstrap finished")
    return samples


def samples_frame(samples) -> pd.DataFrame:
    return pd.DataFrame([s.row for s in samples], columns=SAMPLE_COLUMNS)


def load_samples(path) -> pd.DataFrame:
    """Read a bootstrap dump back; any numeric column can feed the density tools"""
    return pd.read_csv(path)
