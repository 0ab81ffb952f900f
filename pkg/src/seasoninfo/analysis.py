"""Cross-sport summaries computed from accuracy curves: odds ratios
against the home-pick baseline, per-game accuracy slopes constrained
through a 0.5 intercept, slope ratios between leagues, and a
single-breakpoint piecewise-linear fit of the curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# A two-segment fit must beat the single line by more than this to count
# as a real breakpoint.
BREAKPOINT_MIN_IMPROVEMENT = 1e-12


def odds_ratio(model_acc: float, baseline_acc: float) -> float:
    """Odds of a correct model call relative to odds of a correct home pick."""
    for name, p in (("model_acc", model_acc), ("baseline_acc", baseline_acc)):
        if not 0.0 < p < 1.0:
            raise ValueError(f"{name} must be strictly between 0 and 1, got {p}")
    return (model_acc / (1.0 - model_acc)) / (baseline_acc / (1.0 - baseline_acc))


def constrained_slope(points: Iterable[tuple[float, float, float]],
                      max_fraction: float) -> float:
    """Least-squares slope of accuracy gain over games per team, through
    the no-information point (0 games, 0.5 accuracy).

    ``points`` are (fraction, games_per_team, accuracy) triples; only
    points with fraction <= max_fraction enter the fit. Returned in
    percentage points per game.
    """
    kept = [(x, y) for f, x, y in points if f <= max_fraction + 1e-12]
    if not kept:
        raise ValueError(f"no curve points at or below fraction {max_fraction}")
    xs = np.array([x for x, _ in kept])
    ys = np.array([y for _, y in kept])
    if np.any(xs <= 0):
        raise ValueError("games-per-team values must be positive")
    return 100.0 * float(xs @ (ys - 0.5)) / float(xs @ xs)


def informativeness_ratio(slope_a: float, slope_b: float) -> float:
    """How much more one league's games move accuracy than another's."""
    if slope_b == 0:
        raise ValueError("denominator slope is zero")
    return slope_a / slope_b


@dataclass(frozen=True)
class BreakpointFit:
    """Continuous two-segment least-squares fit y = a + b*x + c*(x-psi)+."""

    psi: float
    slope_left: float
    slope_right: float
    sse: float
    intercept: float
    line_sse: float
    meaningful: bool

    @property
    def improvement(self) -> float:
        return self.line_sse - self.sse


def fit_breakpoint(points: Iterable[tuple[float, float]]) -> BreakpointFit:
    """Grid search over candidate breakpoints with exact conditional least
    squares at each one.

    Candidates step through the observed x-range at resolution
    (x_max - x_min) / 1000, excluding the endpoints by one step, so the
    returned psi is strictly interior. Ties go to the smaller psi. The
    two-segment SSE can never exceed the single-line SSE because the line
    is the c = 0 member of the family.
    """
    pts = sorted(points)
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if len(np.unique(xs)) < 4:
        raise ValueError("need at least 4 points with distinct x")

    x_min, x_max = xs[0], xs[-1]
    step = (x_max - x_min) / 1000.0
    line_design = np.column_stack([np.ones_like(xs), xs])
    line_coef, _, _, _ = np.linalg.lstsq(line_design, ys, rcond=None)
    line_resid = ys - line_design @ line_coef
    line_sse = float(line_resid @ line_resid)

    best = None
    for j in range(1, 1000):
        psi = x_min + j * step
        hinge = np.maximum(xs - psi, 0.0)
        design = np.column_stack([np.ones_like(xs), xs, hinge])
        coef, _, _, _ = np.linalg.lstsq(design, ys, rcond=None)
        resid = ys - design @ coef
        sse = float(resid @ resid)
        if best is None or sse < best[0]:
            best = (sse, psi, coef)

    sse, psi, coef = best
    return BreakpointFit(
        psi=float(psi),
        slope_left=float(coef[1]),
        slope_right=float(coef[1] + coef[2]),
        sse=sse,
        intercept=float(coef[0]),
        line_sse=line_sse,
        meaningful=(line_sse - sse) > BREAKPOINT_MIN_IMPROVEMENT,
    )


SLOPE_COLUMNS = (0.25, 0.375, 0.5, 0.875)


@dataclass(frozen=True)
class SummaryReport:
    """Per-league digest of one or more seasons' accuracy curves."""

    league: str
    seasons_used: tuple[str, ...]
    or_mov_875: float
    per_season_or: dict[str, float]
    slopes: dict[float, float]
    informativeness_ratios: dict[str, float]
    breakpoint: BreakpointFit | None


@dataclass(frozen=True)
class CurveRow:
    """One (league, season, fraction) row of a curve table."""

    league: str
    season: str
    fraction: float
    games_per_team: float
    mean_bt_acc: float
    sd_bt_acc: float
    mean_mov_acc: float
    sd_mov_acc: float
    baseline_acc: float
    bt_failures: int = 0
    mov_failures: int = 0


def aggregate_league_curve(rows: Sequence[CurveRow]):
    """Average per-season curves into one mean curve per fraction.

    Returns a list of (fraction, mean games_per_team, mean mov accuracy,
    mean bt accuracy, mean baseline, min mov accuracy, max mov accuracy)
    sorted by fraction.
    """
    by_fraction: dict[float, list[CurveRow]] = {}
    for r in rows:
        by_fraction.setdefault(r.fraction, []).append(r)
    out = []
    for f in sorted(by_fraction):
        grp = by_fraction[f]
        movs = [r.mean_mov_acc for r in grp]
        out.append((
            f,
            float(np.mean([r.games_per_team for r in grp])),
            float(np.mean(movs)),
            float(np.mean([r.mean_bt_acc for r in grp])),
            float(np.mean([r.baseline_acc for r in grp])),
            min(movs),
            max(movs),
        ))
    return out


def summarize_league(league: str, rows: Sequence[CurveRow],
                     slopes_by_league: dict[str, dict[float, float]] | None = None,
                     ratio_column: float = 0.875) -> SummaryReport:
    """Build the per-league summary from its curve rows.

    The headline odds ratio compares season-pooled mean MOV accuracy at
    fraction 0.875 to the pooled home-pick baseline; per-season odds
    ratios are also kept. Slopes use the aggregated mean curve.
    ``slopes_by_league`` (when given) supplies the other leagues' slopes
    for the informativeness ratios at ``ratio_column``.
    """
    seasons = tuple(sorted({r.season for r in rows}))
    agg = aggregate_league_curve(rows)

    at_875 = [(x, mov, base) for f, x, mov, _, base, _, _ in agg if abs(f - 0.875) < 1e-9]
    per_season_or = {}
    for s in seasons:
        srow = [r for r in rows if r.season == s and abs(r.fraction - 0.875) < 1e-9]
        if srow:
            per_season_or[s] = odds_ratio(srow[0].mean_mov_acc, srow[0].baseline_acc)
    if at_875:
        _, pooled_mov, pooled_base = at_875[0]
        or_875 = odds_ratio(pooled_mov, pooled_base)
    else:
        or_875 = float("nan")

    triples = [(f, x, mov) for f, x, mov, _, _, _, _ in agg]
    slopes = {}
    for col in SLOPE_COLUMNS:
        if any(f <= col + 1e-12 for f, _, _ in triples):
            slopes[col] = constrained_slope(triples, col)

    ratios = {}
    if slopes_by_league:
        own = slopes.get(ratio_column)
        for other, other_slopes in slopes_by_league.items():
            if other == league:
                continue
            theirs = other_slopes.get(ratio_column)
            if own is not None and theirs:
                ratios[f"{league}/{other}"] = informativeness_ratio(own, theirs)

    xy = [(x, mov) for _, x, mov, _, _, _, _ in agg]
    breakpoint_fit = None
    if len({x for x, _ in xy}) >= 4:
        breakpoint_fit = fit_breakpoint(xy)

    return SummaryReport(
        league=league,
        seasons_used=seasons,
        or_mov_875=or_875,
        per_season_or=per_season_or,
        slopes=slopes,
        informativeness_ratios=ratios,
        breakpoint=breakpoint_fit,
    )
