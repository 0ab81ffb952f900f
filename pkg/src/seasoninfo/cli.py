"""Command-line interface.

Subcommands: ``curve`` (run the subsampling protocol on season CSVs),
``summary`` (digest curve tables into odds ratios, slopes, ratios, and
breakpoints), ``synth`` (generate a synthetic season plus truth sidecar),
and ``validate`` (parse-only check of season CSVs).

Every command is a pure function of its inputs and flags: rows and JSON
keys are ordered deterministically and all numbers are serialized at six
significant digits, so identical invocations produce byte-identical
primary outputs. Exit codes: 0 ok, 2 usage/config error, 3 data error,
4 fit failure (every replicate failed at some fraction).
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    SLOPE_COLUMNS,
    CurveRow,
    aggregate_league_curve,
    informativeness_ratio,
    summarize_league,
)
from .errors import ConfigError, ParseError, SeasonInfoError
from .harness import DEFAULT_X_GRID, ProtocolConfig, run_protocol
from .ingest import League, parse_season, season_to_csv, summarize_season
from .synth import SynthSpec, generate_season

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_FIT = 4

CURVE_COLUMNS = (
    "league", "season", "fraction", "games_per_team",
    "mean_bt_acc", "sd_bt_acc", "mean_mov_acc", "sd_mov_acc",
    "baseline_acc", "bt_failures", "mov_failures",
)


def fmt6(x: float) -> str:
    """Fixed six-significant-digit rendering used for all output numbers."""
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".6g")


def _json_num(x: float):
    if x is None or not math.isfinite(x):
        return None
    return float(fmt6(x))


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _parse_x_grid(raw: str | None) -> tuple[float, ...]:
    if raw is None:
        return DEFAULT_X_GRID
    try:
        grid = tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"bad x-grid {raw!r}; expected comma-separated fractions") from None
    if not grid:
        raise ConfigError("x-grid is empty")
    return grid


def _load_seasons(paths, league: League):
    seasons = []
    for p in paths:
        path = Path(p)
        with open(path, "rb") as fh:
            season = parse_season(fh, league, path.stem)
        seasons.append((path, season))
    return seasons


def cmd_curve(args) -> int:
    league = League(args.league)
    config = ProtocolConfig(
        x_grid=_parse_x_grid(args.x_grid),
        replicates=args.replicates,
        master_seed=args.seed,
        bt_penalty=args.bt_penalty,
        mov_penalty=args.mov_penalty,
    )
    seasons = _load_seasons(args.inputs, league)

    rows = []
    for path, season in seasons:
        points = run_protocol(season, config, jobs=args.jobs)
        for pt in points:
            if pt.bt_failures >= config.replicates or pt.mov_failures >= config.replicates:
                print(
                    f"error: every replicate failed for {season.season_label} "
                    f"at fraction {pt.fraction}",
                    file=sys.stderr,
                )
                return EXIT_FIT
            rows.append((season.season_label, pt))

    out = Path(args.out)
    if out.suffix == ".json":
        payload = {"curves": [_curve_row_dict(league, label, pt) for label, pt in rows]}
        _atomic_write(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        _atomic_write(out, _curve_csv(league, rows))

    manifest = {
        "tool": "seasoninfo",
        "version": __version__,
        "created_utc": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "league": league.value,
        "config": {
            "x_grid": list(config.x_grid),
            "replicates": config.replicates,
            "master_seed": config.master_seed,
            "bt_penalty": config.bt_penalty,
            "mov_penalty": config.mov_penalty,
        },
        "inputs": [
            {"path": str(path), "season": season.season_label, "sha256": _sha256(path)}
            for path, season in seasons
        ],
        "curves": [_curve_row_dict(league, label, pt) for label, pt in rows],
    }
    _atomic_write(out.with_name(out.name + ".manifest.json"),
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _curve_row_dict(league: League, label: str, pt) -> dict:
    return {
        "league": league.value,
        "season": label,
        "fraction": _json_num(pt.fraction),
        "games_per_team": _json_num(pt.games_per_team),
        "mean_bt_acc": _json_num(pt.mean_bt_acc),
        "sd_bt_acc": _json_num(pt.sd_bt_acc),
        "mean_mov_acc": _json_num(pt.mean_mov_acc),
        "sd_mov_acc": _json_num(pt.sd_mov_acc),
        "baseline_acc": _json_num(pt.baseline_acc),
        "bt_failures": pt.bt_failures,
        "mov_failures": pt.mov_failures,
    }


def _curve_csv(league: League, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for label, pt in rows:
        writer.writerow([
            league.value, label, fmt6(pt.fraction), fmt6(pt.games_per_team),
            fmt6(pt.mean_bt_acc), fmt6(pt.sd_bt_acc),
            fmt6(pt.mean_mov_acc), fmt6(pt.sd_mov_acc),
            fmt6(pt.baseline_acc), pt.bt_failures, pt.mov_failures,
        ])
    return buf.getvalue()


def read_curve_file(path) -> list[CurveRow]:
    """Load curve rows from a file written by ``curve`` (CSV or JSON)."""
    path = Path(path)
    try:
        if path.suffix == ".json":
            payload = json.loads(path.read_text(encoding="utf-8"))
            raw_rows = payload["curves"]
        else:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                raw_rows = list(reader)
        rows = []
        for raw in raw_rows:
            rows.append(CurveRow(
                league=raw["league"],
                season=raw["season"],
                fraction=float(raw["fraction"]),
                games_per_team=float(raw["games_per_team"]),
                mean_bt_acc=float(raw["mean_bt_acc"]),
                sd_bt_acc=float(raw["sd_bt_acc"]),
                mean_mov_acc=float(raw["mean_mov_acc"]),
                sd_mov_acc=float(raw["sd_mov_acc"]),
                baseline_acc=float(raw["baseline_acc"]),
                bt_failures=int(raw["bt_failures"]),
                mov_failures=int(raw["mov_failures"]),
            ))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed curve file {path}: {exc}") from None
    if not rows:
        raise ParseError(f"curve file {path} has no rows")
    return rows


def cmd_summary(args) -> int:
    rows: list[CurveRow] = []
    for p in args.inputs:
        rows.extend(read_curve_file(p))

    by_league: dict[str, list[CurveRow]] = {}
    for r in rows:
        by_league.setdefault(r.league, []).append(r)
    leagues = sorted(by_league)

    prelim = {lg: summarize_league(lg, by_league[lg]) for lg in leagues}
    slopes_by_league = {lg: rep.slopes for lg, rep in prelim.items()}
    reports = {
        lg: summarize_league(lg, by_league[lg], slopes_by_league=slopes_by_league)
        for lg in leagues
    }

    ratio_table = {}
    for a in leagues:
        for b in leagues:
            if a == b:
                continue
            cols = {}
            for col in SLOPE_COLUMNS:
                sa = slopes_by_league[a].get(col)
                sb = slopes_by_league[b].get(col)
                if sa is not None and sb:
                    cols[fmt6(col)] = _json_num(informativeness_ratio(sa, sb))
            if cols:
                ratio_table[f"{a}/{b}"] = cols

    payload = {
        "tool": "seasoninfo",
        "version": __version__,
        "leagues": {lg: _report_dict(reports[lg], by_league[lg]) for lg in leagues},
        "informativeness_ratios": ratio_table,
    }

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "summary.json",
                  json.dumps(payload, indent=2, sort_keys=True) + "\n")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["league", "or_mov_875"])
    for lg in leagues:
        writer.writerow([lg, fmt6(reports[lg].or_mov_875)])
    _atomic_write(out_dir / "table_or.csv", buf.getvalue())

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["league"] + [f"slope_{fmt6(c)}" for c in SLOPE_COLUMNS])
    for lg in leagues:
        writer.writerow(
            [lg] + [
                fmt6(reports[lg].slopes[c]) if c in reports[lg].slopes else ""
                for c in SLOPE_COLUMNS
            ]
        )
    _atomic_write(out_dir / "table_slopes.csv", buf.getvalue())

    manifest = {
        "tool": "seasoninfo",
        "version": __version__,
        "created_utc": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "inputs": [
            {"path": str(p), "sha256": _sha256(Path(p))} for p in args.inputs
        ],
        "reports": payload["leagues"],
    }
    _atomic_write(out_dir / "manifest.json",
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _report_dict(report, rows) -> dict:
    agg = aggregate_league_curve(rows)
    bp = None
    if report.breakpoint is not None:
        bp = {
            "psi": _json_num(report.breakpoint.psi),
            "slope_left": _json_num(report.breakpoint.slope_left),
            "slope_right": _json_num(report.breakpoint.slope_right),
            "intercept": _json_num(report.breakpoint.intercept),
            "sse": _json_num(report.breakpoint.sse),
            "line_sse": _json_num(report.breakpoint.line_sse),
            "meaningful": report.breakpoint.meaningful,
        }
    return {
        "seasons_used": list(report.seasons_used),
        "or_mov_875": _json_num(report.or_mov_875),
        "per_season_or": {s: _json_num(v) for s, v in sorted(report.per_season_or.items())},
        "slopes": {fmt6(c): _json_num(v) for c, v in sorted(report.slopes.items())},
        "informativeness_ratios": {
            k: _json_num(v) for k, v in sorted(report.informativeness_ratios.items())
        },
        "breakpoint": bp,
        "curve": [
            {
                "fraction": _json_num(f),
                "games_per_team": _json_num(x),
                "mov_acc_mean": _json_num(mov),
                "bt_acc_mean": _json_num(bt),
                "baseline_mean": _json_num(base),
                "mov_acc_min": _json_num(lo),
                "mov_acc_max": _json_num(hi),
            }
            for f, x, mov, bt, base, lo, hi in agg
        ],
    }


def cmd_synth(args) -> int:
    strengths = None
    strength_sd = args.strength_sd
    if args.strengths is not None:
        if strength_sd is not None:
            raise ConfigError("give --strengths or --strength-sd, not both")
        raw = json.loads(Path(args.strengths).read_text(encoding="utf-8"))
        strengths = {str(k): float(v) for k, v in raw.items()}
    elif strength_sd is None:
        strength_sd = 1.0

    spec = SynthSpec(
        n_teams=args.teams,
        games_per_team=args.games_per_team,
        seed=args.seed,
        home_adv=args.home_adv,
        mov_scale=args.mov_scale,
        mov_noise_sd=args.mov_noise_sd,
        strengths=strengths,
        strength_sd=strength_sd,
    )
    season, truth = generate_season(spec)

    out = Path(args.out)
    truth_payload = {
        "strengths": {t: _json_num(v) for t, v in sorted(truth.strengths.items())},
        "home_adv": _json_num(truth.home_adv),
        "mov_scale": _json_num(truth.mov_scale),
        "mov_noise_sd": _json_num(truth.mov_noise_sd),
        "seed": truth.seed,
        "n_teams": truth.n_teams,
        "games_per_team": truth.games_per_team,
    }
    _atomic_write(out, season_to_csv(season))
    _atomic_write(out.with_suffix(".truth.json"),
                  json.dumps(truth_payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    league = League(args.league)
    for p in args.inputs:
        path = Path(p)
        with open(path, "rb") as fh:
            season = parse_season(fh, league, path.stem)
        s = summarize_season(season)
        print(
            f"{path}: {s.n_games} games, {s.n_teams} teams, "
            f"home-win {fmt6(s.home_win_fraction)}, ties {fmt6(s.tie_fraction)}, "
            f"games/team {fmt6(s.games_per_team_mean)}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seasoninfo",
        description="Measure how much a season's games reveal about team strength.",
    )
    parser.add_argument("--version", action="version", version=f"seasoninfo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    leagues = [l.value for l in League]

    p = sub.add_parser("curve", help="run the train/test protocol on season CSVs")
    p.add_argument("inputs", nargs="+", metavar="SEASON_CSV")
    p.add_argument("--league", required=True, choices=leagues)
    p.add_argument("--out", required=True, help="output table (.csv or .json)")
    p.add_argument("--x-grid", default=None,
                   help="comma-separated training fractions (default 0.125..0.875)")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bt-penalty", type=float, default=1.0)
    p.add_argument("--mov-penalty", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("summary", help="summarize curve tables into report + tables")
    p.add_argument("inputs", nargs="+", metavar="CURVE_FILE")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("synth", help="generate a synthetic season with known truth")
    p.add_argument("--teams", type=int, required=True)
    p.add_argument("--games-per-team", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--home-adv", type=float, default=0.0)
    p.add_argument("--strength-sd", type=float, default=None)
    p.add_argument("--strengths", default=None,
                   help="JSON file of explicit team strengths")
    p.add_argument("--mov-scale", type=float, default=7.0)
    p.add_argument("--mov-noise-sd", type=float, default=12.0)
    p.add_argument("--out", required=True, help="season CSV path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("validate", help="parse season CSVs and report basic stats")
    p.add_argument("inputs", nargs="+", metavar="SEASON_CSV")
    p.add_argument("--league", default="OTHER", choices=leagues)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SeasonInfoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT


if __name__ == "__main__":
    sys.exit(main())
