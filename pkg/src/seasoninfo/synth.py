"""Synthetic seasons with known ground truth.

One generative story serves both models: a game's margin is Gaussian on
the points scale around a linear function of logit-scale strengths, and
the win indicator is the sign of the (rounded) margin, so ties can occur
and win/margin data never contradict each other. Because the truth is
known, the expected accuracy of the oracle predictor is computable in
closed form and bounds what any fitted model can achieve.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ingest import Game, League, Season, make_game_id


@dataclass(frozen=True)
class SynthSpec:
    """Ground truth for a synthetic league.

    Exactly one of ``strengths`` (explicit logit-scale map) or
    ``strength_sd`` (i.i.d. Normal(0, sd) draws) must be given.
    """

    n_teams: int
    games_per_team: int
    seed: int
    home_adv: float = 0.0
    mov_scale: float = 7.0
    mov_noise_sd: float = 12.0
    strengths: dict[str, float] | None = None
    strength_sd: float | None = None

    def __post_init__(self):
        if self.n_teams < 2:
            raise ConfigError("need at least 2 teams")
        if self.games_per_team < 1:
            raise ConfigError("need at least 1 game per team")
        if (self.n_teams * self.games_per_team) % 2 != 0:
            raise ConfigError(
                f"{self.n_teams} teams x {self.games_per_team} games each is an "
                "odd number of team-slots; no schedule exists"
            )
        if self.mov_scale <= 0 or self.mov_noise_sd <= 0:
            raise ConfigError("mov_scale and mov_noise_sd must be positive")
        if (self.strengths is None) == (self.strength_sd is None):
            raise ConfigError("give exactly one of strengths or strength_sd")
        if self.strengths is not None and len(self.strengths) != self.n_teams:
            raise ConfigError(
                f"strengths map has {len(self.strengths)} entries for {self.n_teams} teams"
            )
        if self.strength_sd is not None and self.strength_sd < 0:
            raise ConfigError("strength_sd must be non-negative")


@dataclass(frozen=True)
class SynthTruth:
    """Realized generator parameters emitted alongside a synthetic season."""

    strengths: dict[str, float]
    home_adv: float
    mov_scale: float
    mov_noise_sd: float
    seed: int
    n_teams: int
    games_per_team: int


def _team_ids(spec: SynthSpec) -> list[str]:
    if spec.strengths is not None:
        return sorted(spec.strengths)
    width = len(str(spec.n_teams))
    return [f"T{i + 1:0{width}d}" for i in range(spec.n_teams)]


def _pair_slots(slots: list[str], rng: np.random.Generator) -> list[tuple[str, str]] | None:
    """Pair up team slots so no team meets itself; None if this shuffle
    cannot be repaired."""
    slots = list(slots)
    rng.shuffle(slots)
    for i in range(0, len(slots), 2):
        if slots[i] == slots[i + 1]:
            for j in range(i + 2, len(slots)):
                if slots[j] != slots[i]:
                    slots[i + 1], slots[j] = slots[j], slots[i + 1]
                    break
            else:
                return None
    return [(slots[i], slots[i + 1]) for i in range(0, len(slots), 2)]


def generate_season(spec: SynthSpec) -> tuple[Season, SynthTruth]:
    """Draw a schedule and outcomes; fully determined by ``spec.seed``.

    Draw order is fixed (strengths, schedule, home/away sides, margin
    noise) so the same spec always yields the same season. Each team
    plays exactly ``games_per_team`` games against uniformly drawn
    opponents with uniformly drawn sides.
    """
    rng = np.random.default_rng(spec.seed)
    ids = _team_ids(spec)
    if spec.strengths is not None:
        strengths = {t: float(spec.strengths[t]) for t in ids}
    else:
        draws = rng.normal(0.0, spec.strength_sd, spec.n_teams)
        strengths = {t: float(v) for t, v in zip(ids, draws)}

    slots = [t for t in ids for _ in range(spec.games_per_team)]
    pairs = None
    for _ in range(100):
        pairs = _pair_slots(slots, rng)
        if pairs is not None:
            break
    if pairs is None:
        raise ConfigError("could not build a self-play-free schedule")

    sides = rng.integers(0, 2, size=len(pairs))
    matchups = [(p[1], p[0]) if s else p for p, s in zip(pairs, sides)]

    eta = np.array([strengths[h] - strengths[a] + spec.home_adv for h, a in matchups])
    noise = rng.normal(0.0, spec.mov_noise_sd, len(matchups))
    margins = np.rint(spec.mov_scale * eta + noise).astype(int)

    games = []
    games_per_day = max(1, spec.n_teams // 2)
    base_date = dt.date(2000, 1, 1)
    for i, ((home, away), margin) in enumerate(zip(matchups, margins)):
        games.append(
            Game(
                game_id=make_game_id(i + 1),
                date=base_date + dt.timedelta(days=i // games_per_day),
                home=home,
                away=away,
                home_score=max(int(margin), 0),
                away_score=max(-int(margin), 0),
            )
        )

    season = Season.from_games(League.OTHER, f"synth-{spec.seed}", games)
    truth = SynthTruth(
        strengths=strengths,
        home_adv=spec.home_adv,
        mov_scale=spec.mov_scale,
        mov_noise_sd=spec.mov_noise_sd,
        seed=spec.seed,
        n_teams=spec.n_teams,
        games_per_team=spec.games_per_team,
    )
    return season, truth


def _norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def outcome_probabilities(spec_or_truth, home: str, away: str) -> tuple[float, float, float]:
    """(P(home win), P(tie), P(home loss)) for one matchup under the
    generating margin model, accounting for integer rounding."""
    s = spec_or_truth.strengths
    if s is None:
        raise ValueError("need explicit strengths; generate the season first")
    mean = spec_or_truth.mov_scale * (s[home] - s[away] + spec_or_truth.home_adv)
    sd = spec_or_truth.mov_noise_sd
    p_win = 1.0 - _norm_cdf((0.5 - mean) / sd)
    p_loss = _norm_cdf((-0.5 - mean) / sd)
    return p_win, 1.0 - p_win - p_loss, p_loss


def bayes_accuracy(spec: SynthSpec | SynthTruth) -> float:
    """Expected credit of the predictor that knows the true parameters,
    averaged over the uniform ordered-pair schedule distribution. Ties
    earn 0.5 whatever is predicted, matching the evaluation metric.
    """
    if spec.strengths is None:
        raise ValueError("bayes_accuracy needs explicit strengths")
    ids = sorted(spec.strengths)
    total = 0.0
    count = 0
    for home in ids:
        for away in ids:
            if home == away:
                continue
            p_win, p_tie, p_loss = outcome_probabilities(spec, home, away)
            total += max(p_win, p_loss) + 0.5 * p_tie
            count += 1
    return total / count
