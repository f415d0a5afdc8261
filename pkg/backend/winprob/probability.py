"""
Simple and Weighted win-probability models over a game's quoted spreads
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from backend.core.models import ProbabilityModel, Side
from backend.winprob.spread_index import key_spread, spread_key, win_rate


@dataclass(frozen=True)
class SpreadSnapshot:
    """One team's view of a game: distinct spreads, their win rates and quote counts"""

    probs: dict = field(default_factory=dict)
    freqs: dict = field(default_factory=dict)
    sigma: tuple = ()

    def defined(self):
        return [s for s in self.sigma if self.probs.get(s) is not None]


def snapshot_for(game, index, side: Side) -> SpreadSnapshot:
    """Price one side of a game against history strictly before its start"""
    sign = 1.0 if side is Side.FAVORITE else -1.0
    spreads = [key_spread(spread_key(sign * s)) + 0.0 for s in game.favorite_spreads]
    freqs = dict(sorted(Counter(spreads).items()))
    probs = {s: win_rate(index, s, game.start_time, game.league) for s in freqs}
    return SpreadSnapshot(probs=probs, freqs=freqs, sigma=tuple(freqs))


def simple_probability(snapshot: SpreadSnapshot) -> Optional[float]:
    defined = snapshot.defined()
    if not defined:
        return None
    return math.fsum(snapshot.probs[s] for s in defined) / len(defined)


def weighted_probability(snapshot: SpreadSnapshot) -> Optional[float]:
    defined = snapshot.defined()
    if not defined:
        return None
    weight = math.fsum(snapshot.freqs[s] for s in defined)
    return math.fsum(snapshot.probs[s] * snapshot.freqs[s] for s in defined) / weight


MODELS = {
    ProbabilityModel.SIMPLE: simple_probability,
    ProbabilityModel.WEIGHTED: weighted_probability,
}


def team_probability(snapshot: SpreadSnapshot, model) -> Optional[float]:
    return MODELS[ProbabilityModel(model)](snapshot)
