from __future__ import annotations

import datetime as dt

import pytest

from seasoninfo import Game, League, Season


def make_game(i: int, home: str, away: str, home_score: int, away_score: int,
              date: dt.date | None = None) -> Game:
    return Game(
        game_id=f"g{i:05d}",
        date=date or dt.date(2012, 1, 1) + dt.timedelta(days=i),
        home=home,
        away=away,
        home_score=home_score,
        away_score=away_score,
    )


def game_from_margin(i: int, home: str, away: str, margin: int) -> Game:
    return make_game(i, home, away, max(margin, 0), max(-margin, 0))


def games_from_results(results) -> list[Game]:
    """results: iterable of (home, away, home_win) with a 3-0 or 0-3 score."""
    return [
        make_game(i, h, a, 3 if win else 0, 0 if win else 3)
        for i, (h, a, win) in enumerate(results, start=1)
    ]


def season_of(games, league=League.OTHER, label="test") -> Season:
    return Season.from_games(league, label, games)


@pytest.fixture
def toy_16_game_season() -> Season:
    games = [
        game_from_margin(i, f"T{i % 4 + 1}", f"T{(i + 1) % 4 + 1}", (i % 5) - 2)
        for i in range(1, 17)
    ]
    return season_of(games)
