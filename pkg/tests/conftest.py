import logging

import pytest

from backend.search.synth import SynthSpec, synth_market
from helpers import make_dataset, make_game


@pytest.fixture(autouse=True)
def quiet_logs(caplog):
    caplog.set_level(logging.WARNING)


@pytest.fixture
def spread_history():
    """Four concluded -3.0 games (favorite 3-1) followed by two games to price"""
    games = [
        make_game('h1', 0, 24, 17),
        make_game('h2', 1, 21, 14),
        make_game('h3', 2, 10, 20),
        make_game('h4', 3, 30, 3),
        make_game('t1', 10, 28, 21, quotes=(('A', -3.0, -150, 300), ('B', -3.0, -200, 250))),
        make_game('t2', 11, 14, 17, quotes=(('A', -3.0, -110, 400),)),
    ]
    return make_dataset(games)


@pytest.fixture(scope='session')
def planted_spec():
    """Coin-flip games; the soft casino pays 2.2 decimal on one side of half of them"""
    return SynthSpec(n_games=2000, spread_probs={0.0: 0.5}, soft_margin=0.1, soft_fraction=0.5)


@pytest.fixture(scope='session')
def planted_market(planted_spec):
    return synth_market(planted_spec, seed=11)
