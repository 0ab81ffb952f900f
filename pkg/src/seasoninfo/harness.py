"""Subsampling protocol: seeded train/test splits over a fraction grid,
model fits per split, out-of-sample accuracy averaged over replicates.

Every split is derived from a stable hash of (master seed, fraction,
replicate), so any subset of the work can be regenerated independently
and the result is a pure function of (season, config) no matter how many
worker processes evaluate it.
"""

from __future__ import annotations

import hashlib
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FitError
from .ingest import Game, Season
from .models import (
    bt_predicts_home_win,
    fit_bt,
    fit_mov,
    info_metric,
    mov_predicts_home_win,
    predict_bt,
    predict_mov,
)

DEFAULT_X_GRID = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875)


@dataclass(frozen=True)
class ProtocolConfig:
    x_grid: tuple[float, ...] = DEFAULT_X_GRID
    replicates: int = 100
    master_seed: int = 0
    bt_penalty: float = 1.0
    mov_penalty: float = 1.0
    bt_tol: float = 1e-8
    bt_max_iter: int = 100

    def __post_init__(self):
        object.__setattr__(self, "x_grid", tuple(self.x_grid))
        if not self.x_grid:
            raise ConfigError("x_grid is empty")
        for f in self.x_grid:
            if not 0.0 < f < 1.0:
                raise ConfigError(f"fraction {f} is not strictly between 0 and 1")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")


@dataclass(frozen=True)
class Split:
    train: tuple[Game, ...]
    test: tuple[Game, ...]
    fraction: float
    replicate_index: int
    seed: int


@dataclass(frozen=True)
class CurvePoint:
    fraction: float
    games_per_team: float
    mean_bt_acc: float
    sd_bt_acc: float
    mean_mov_acc: float
    sd_mov_acc: float
    baseline_acc: float
    bt_failures: int
    mov_failures: int


def split_seed(master_seed: int, fraction: float, replicate: int) -> int:
    """Stable 64-bit seed for one (fraction, replicate) cell."""
    payload = struct.pack(
        "<Qdq", master_seed & 0xFFFFFFFFFFFFFFFF, float(fraction), replicate
    )
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def train_size(fraction: float, n_games: int) -> int:
    """Banker's rounding of fraction * n_games, the spec'd train size."""
    return round(fraction * n_games)


def make_split(season: Season, config: ProtocolConfig, fraction: float,
               replicate: int) -> Split:
    n = len(season.games)
    m = train_size(fraction, n)
    if m < 1 or m >= n:
        raise ConfigError(
            f"fraction {fraction} of {n} games leaves an empty train or test set"
        )
    seed = split_seed(config.master_seed, fraction, replicate)
    perm = np.random.default_rng(seed).permutation(n)
    chosen = np.zeros(n, dtype=bool)
    chosen[perm[:m]] = True
    train = tuple(g for g, c in zip(season.games, chosen) if c)
    test = tuple(g for g, c in zip(season.games, chosen) if not c)
    return Split(train=train, test=test, fraction=fraction,
                 replicate_index=replicate, seed=seed)


def make_splits(season: Season, config: ProtocolConfig) -> list[Split]:
    return [
        make_split(season, config, f, k)
        for f in config.x_grid
        for k in range(config.replicates)
    ]


def home_baseline(test) -> float:
    """Credit of the always-pick-home rule: wins count 1, ties 0.5."""
    games = list(test)
    if not games:
        raise ValueError("empty test set")
    credit = sum(1.0 if g.margin > 0 else 0.5 if g.margin == 0 else 0.0 for g in games)
    return credit / len(games)


@dataclass(frozen=True)
class ReplicateResult:
    fraction: float
    replicate: int
    bt_acc: float | None
    mov_acc: float | None
    baseline: float


def _margin_sign(g: Game) -> int:
    return 1 if g.margin > 0 else -1 if g.margin < 0 else 0


def evaluate_replicate(season: Season, config: ProtocolConfig, fraction: float,
                       replicate: int) -> ReplicateResult:
    split = make_split(season, config, fraction, replicate)
    baseline = home_baseline(split.test)

    bt_acc = None
    try:
        bt = fit_bt(split.train, season.teams, penalty=config.bt_penalty,
                    tol=config.bt_tol, max_iter=config.bt_max_iter)
    except FitError:
        pass
    else:
        bt_acc = info_metric(
            (bt_predicts_home_win(predict_bt(bt, g)), _margin_sign(g))
            for g in split.test
        )

    mov_acc = None
    try:
        mov = fit_mov(split.train, season.teams, penalty=config.mov_penalty)
    except FitError:
        pass
    else:
        mov_acc = info_metric(
            (mov_predicts_home_win(predict_mov(mov, g)), _margin_sign(g))
            for g in split.test
        )

    return ReplicateResult(fraction=fraction, replicate=replicate,
                           bt_acc=bt_acc, mov_acc=mov_acc, baseline=baseline)


_WORKER_STATE: tuple[Season, ProtocolConfig] | None = None


def _worker_init(season: Season, config: ProtocolConfig) -> None:
    global _WORKER_STATE
    _WORKER_STATE = (season, config)


def _worker_eval(task: tuple[float, int]) -> ReplicateResult:
    season, config = _WORKER_STATE
    return evaluate_replicate(season, config, task[0], task[1])


def _mean_sd(values: list[float]) -> tuple[float, float]:
    if not values:
        return float("nan"), float("nan")
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return mean, sd


def run_protocol(season: Season, config: ProtocolConfig, jobs: int = 1) -> list[CurvePoint]:
    """Run the full grid: K seeded splits per fraction, both models fit per
    split, accuracies averaged. Replicates whose fit fails are dropped
    from that model's average and counted in the output.

    ``jobs`` only controls parallelism; results are reduced by
    (fraction, replicate) key and are bit-identical for any job count.
    """
    n = len(season.games)
    for f in config.x_grid:
        m = train_size(f, n)
        if m < 1 or m >= n:
            raise ConfigError(
                f"fraction {f} of {n} games leaves an empty train or test set"
            )

    tasks = [(f, k) for f in config.x_grid for k in range(config.replicates)]
    if jobs > 1:
        chunk = max(1, len(tasks) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=(season, config)) as pool:
            results = list(pool.map(_worker_eval, tasks, chunksize=chunk))
    else:
        results = [evaluate_replicate(season, config, f, k) for f, k in tasks]

    by_fraction: dict[float, list[ReplicateResult]] = {f: [] for f in config.x_grid}
    for r in results:
        by_fraction[r.fraction].append(r)

    games_per_team = 2.0 * n / len(season.teams)
    points = []
    for f in config.x_grid:
        rows = sorted(by_fraction[f], key=lambda r: r.replicate)
        bt_vals = [r.bt_acc for r in rows if r.bt_acc is not None]
        mov_vals = [r.mov_acc for r in rows if r.mov_acc is not None]
        mean_bt, sd_bt = _mean_sd(bt_vals)
        mean_mov, sd_mov = _mean_sd(mov_vals)
        baseline = float(np.mean([r.baseline for r in rows]))
        points.append(
            CurvePoint(
                fraction=f,
                games_per_team=f * games_per_team,
                mean_bt_acc=mean_bt,
                sd_bt_acc=sd_bt,
                mean_mov_acc=mean_mov,
                sd_mov_acc=sd_mov,
                baseline_acc=baseline,
                bt_failures=len(rows) - len(bt_vals),
                mov_failures=len(rows) - len(mov_vals),
            )
        )
    return points
