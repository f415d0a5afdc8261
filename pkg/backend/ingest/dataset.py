"""
Validated, chronologically sorted game collections
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator

from backend.core.models import GameRecord, normalize_league


def game_order_key(game: GameRecord):
    return (game.start_time, game.game_id)


class Dataset(BaseModel):
    """Games sorted by (start_time, game_id); league is None for mixed files"""

    model_config = ConfigDict(frozen=True)

    league: Optional[str] = None
    games: tuple[GameRecord, ...] = ()
    source_meta: tuple[str, ...] = ()

    @model_validator(mode='after')
    def _check_order(self):
        ids = set()
        previous = None
        for game in self.games:
            if game.game_id in ids:
                raise ValueError(f"duplicate game_id {game.game_id}")
            ids.add(game.game_id)
            key = game_order_key(game)
            if previous is not None and key < previous:
                raise ValueError(f"games not sorted at {game.game_id}")
            previous = key
        return self

    @classmethod
    def from_games(cls, games, source_meta=()):
        """Sort games and infer the league tag"""
        games = tuple(sorted(games, key=game_order_key))
        leagues = {g.league for g in games}
        league = leagues.pop() if len(leagues) == 1 else None
        return cls(league=league, games=games, source_meta=tuple(source_meta))

    def __len__(self):
        return len(self.games)

    @property
    def leagues(self) -> list[str]:
        return sorted({g.league for g in self.games})

    def for_league(self, tag: str) -> 'Dataset':
        tag = normalize_league(tag)
        return Dataset.from_games(
            [g for g in self.games if g.league == tag], self.source_meta
        )

    def by_league(self) -> dict[str, 'Dataset']:
        return {tag: self.for_league(tag) for tag in self.leagues}
