"""
Leakage-free historical win-rate index keyed by point spread

Each concluded game contributes one entry per distinct quoted spread from the
favorite's side (spread s) and one from the underdog's side (spread -s).
Queries as-of time t only see entries whose conclusion time is strictly
earlier than t, so a game can never be priced with its own result or with
any game played at the same time or later.
"""

import json
import logging
import math
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from backend.core.models import GameVictor, normalize_league
from backend.ingest.loader import format_timestamp
from config.settings import SPREAD_RESOLUTION

logger = logging.getLogger(__name__)


def spread_key(spread: float) -> int:
    """Quantize a spread to the half-point lattice (integer key)"""
    return math.floor(spread / SPREAD_RESOLUTION + 0.5)


def key_spread(key: int) -> float:
    return key * SPREAD_RESOLUTION


def to_ns(moment) -> int:
    return int(pd.Timestamp(moment).value)


class IndexEntry(NamedTuple):
    conclusion_time: object
    league: str
    spread: float
    won: bool


class SpreadIndex:
    """Per-(league, spread) cumulative win counts ordered by conclusion time"""

    def __init__(self, entries, pooled=False):
        self.pooled = pooled
        self.entries = tuple(sorted(entries, key=lambda e: (e.conclusion_time, e.league, e.spread, e.won)))
        self.leagues = tuple(sorted({e.league for e in self.entries}))
        grouped = {}
        for entry in self.entries:
            grouped.setdefault(self._bucket(entry.league, entry.spread), []).append(entry)
        self._times = {}
        self._wins = {}
        for bucket, rows in grouped.items():
            self._times[bucket] = np.array([to_ns(e.conclusion_time) for e in rows], dtype=np.int64)
            self._wins[bucket] = np.cumsum([1 if e.won else 0 for e in rows], dtype=np.int64)

    def _bucket(self, league, spread):
        return (None if self.pooled else league, spread_key(spread))

    def _resolve_league(self, league):
        if self.pooled:
            return None
        if league is None:
            if len(self.leagues) > 1:
                raise ValueError("per-league index spans several leagues; pass league=")
            return self.leagues[0] if self.leagues else None
        return normalize_league(league)

    def __len__(self):
        return len(self.entries)

    def counts(self, spread: float, as_of, league=None) -> tuple[int, int]:
        """(wins, total) over entries with this spread concluded strictly before as_of"""
        bucket = (self._resolve_league(league), spread_key(spread))
        times = self._times.get(bucket)
        if times is None:
            return 0, 0
        total = int(np.searchsorted(times, to_ns(as_of), side='left'))
        if total == 0:
            return 0, 0
        return int(self._wins[bucket][total - 1]), total

    def spread_keys(self, league=None):
        league = self._resolve_league(league)
        return sorted(key for (lg, key) in self._times if lg == league)


def build_index(dataset, pooled=False) -> SpreadIndex:
    """Mirror every game's distinct quoted spreads into favorite/underdog entries

    Tied games are left out: a tie is neither a win nor a loss.
    """
    entries = []
    for game in dataset.games:
        victor = game.victor
        if victor is GameVictor.TIE:
            continue
        for spread in sorted({key_spread(spread_key(s)) for s in game.favorite_spreads}):
            entries.append(IndexEntry(game.start_time, game.league, spread, victor is GameVictor.FAVORITE))
            entries.append(IndexEntry(game.start_time, game.league, -spread + 0.0, victor is GameVictor.UNDERDOG))
    index = SpreadIndex(entries, pooled=pooled)
    logger.info("Built %s spread index: %d entries", 'pooled' if pooled else 'per-league', len(index))
    return index


def win_rate(index: SpreadIndex, spread: float, as_of, league=None) -> Optional[float]:
    """Exact wins/total as-of a timestamp; None when there is no history"""
    wins, total = index.counts(spread, as_of, league)
    if total == 0:
        return None
    return wins / total


def dump_index(index: SpreadIndex, path):
    """Write spread key -> cumulative (wins, total) steps for auditing"""
    buckets = {}
    for entry in index.entries:
        league = 'ALL' if index.pooled else entry.league
        spread = f"{key_spread(spread_key(entry.spread)):+.1f}"
        steps = buckets.setdefault(league, {}).setdefault(spread, [])
        wins = (steps[-1]['wins'] if steps else 0) + (1 if entry.won else 0)
        total = (steps[-1]['total'] if steps else 0) + 1
        steps.append({'time': format_timestamp(entry.conclusion_time), 'wins': wins, 'total': total})
    payload = {
        'pooled': index.pooled,
        'resolution': SPREAD_RESOLUTION,
        'leagues': {lg: dict(sorted(spreads.items(), key=lambda kv: float(kv[0])))
                    for lg, spreads in sorted(buckets.items())},
    }
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2)
    return path
