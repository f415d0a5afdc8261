"""
Builders for hand-made games, datasets and pricing caches
"""

import json
import os
from datetime import datetime, timedelta, timezone
from functools import lru_cache

import numpy as np
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from backend.backtest.pricing import PricedGame
from backend.core.models import CasinoQuote, GameRecord, GameVictor
from backend.ingest.dataset import Dataset
from config.settings import SCHEMAS_DIR

T0 = datetime(2015, 9, 1, 18, 0, tzinfo=timezone.utc)
DEFAULT_QUOTES = (('A', -3.0, -150, 130),)


def make_game(game_id, day, fav_pts, und_pts, quotes=DEFAULT_QUOTES, league='NFL', hours=0):
    """quotes: (casino_id, favorite_spread, favorite_ml, underdog_ml) tuples"""
    start = T0 + timedelta(days=day, hours=hours)
    return GameRecord(
        game_id=game_id,
        league=league,
        start_time=start,
        favorite_name=f"{game_id}-fav",
        underdog_name=f"{game_id}-dog",
        favorite_points=fav_pts,
        underdog_points=und_pts,
        quotes=tuple(
            CasinoQuote(casino_id=c, favorite_spread=s, favorite_ml=f, underdog_ml=u,
                        updated_at=start - timedelta(hours=1))
            for c, s, f, u in quotes
        ),
    )


def make_dataset(games):
    return Dataset.from_games(games)


def random_dataset(rng, n, spreads=(-1.0, -3.0, -7.0), leagues=('NFL',), day_span=60, prefix='g'):
    games = []
    for i in range(n):
        spread = float(rng.choice(spreads))
        fav, und = int(rng.integers(0, 40)), int(rng.integers(0, 40))
        quotes = [('A', spread, -int(rng.integers(105, 400)), int(rng.integers(100, 350)))]
        if rng.random() < 0.5:
            quotes.append(('B', spread - 0.5, -int(rng.integers(105, 400)), int(rng.integers(100, 350))))
        games.append(make_game(f"{prefix}{i:03d}", int(rng.integers(0, day_span)), fav, und,
                               quotes=quotes, league=str(rng.choice(leagues))))
    return make_dataset(games)


DYADIC_PAYOUTS = (0.5, 1.0, 2.0, 3.0)


def random_priced(rng, n, unpriced_share=0.1):
    """Pricing cache with payouts exact in binary so sums do not depend on order"""
    victors = (GameVictor.FAVORITE, GameVictor.UNDERDOG, GameVictor.TIE)
    priced = []
    for i in range(n):
        victor = victors[int(rng.choice(3, p=[0.5, 0.45, 0.05]))]
        base = dict(game_id=f"p{i:04d}", league='NFL', year=2010 + i % 3, victor=victor)
        if rng.random() < unpriced_share:
            priced.append(PricedGame(**base))
            continue
        p_f = round(float(rng.uniform(0.2, 0.95)), 2)
        p_u = round(1.0 - p_f, 2)
        po_f, po_u = (float(v) for v in rng.choice(DYADIC_PAYOUTS, size=2))
        priced.append(PricedGame(
            p_favorite=p_f, p_underdog=p_u,
            ev_favorite=p_f * po_f - (1 - p_f), ev_underdog=p_u * po_u - (1 - p_u),
            payout_favorite=po_f, payout_underdog=po_u, **base,
        ))
    return priced


def seeded(seed):
    return np.random.default_rng(seed)


@lru_cache(maxsize=None)
def schema_validator(name):
    """Draft 2020-12 validator for schemas/<name>.schema.json; sibling $refs resolve by file name"""
    resources = []
    for filename in sorted(os.listdir(SCHEMAS_DIR)):
        with open(os.path.join(SCHEMAS_DIR, filename), encoding='utf-8') as f:
            resources.append((filename, Resource.from_contents(json.load(f))))
    registry = Registry().with_resources(resources)
    schema = registry[f"{name}.schema.json"].contents
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema, registry=registry)


def assert_matches_schema(payload, name):
    errors = sorted(schema_validator(name).iter_errors(payload), key=lambda e: list(e.path))
    assert not errors, [f"{list(e.path)}: {e.message}" for e in errors]
