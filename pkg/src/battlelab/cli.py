"""Batch command-line entry point.

Subcommands wire the library into file-to-file workflows: parsing replay
directories, reconstructing trajectory datasets, running battles,
round-robins, composites, ratings, and dataset statistics. Every run
writes a manifest (arguments, data-table versions, seeds) next to its
outputs, and progress/discard reasons stream to stderr as JSON lines so
large jobs are scriptable.

Exit codes: 0 success, 2 usage errors, 3 parse errors, 4 data/schema
errors.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__
from .agents import AGENT_CLASSES, make_agent
from .engine import data_versions
from .evalharness import (
    IllegalTeam, RatingState, TeamSet, export_teams, generate_variety_teams,
    glicko1_update, gxe, heuristic_composite, load_competitive_teams,
    match_record, round_robin, run_match,
)
from .inference import UsageStats
from .protocol import ProtocolError, parse_replay, serialize_event
from .trajectory import (
    Discarded, ReconstructOptions, SchemaMismatch, iter_dataset, reconstruct,
    read_header, write_dataset, default_vocabulary,
)

EXIT_PARSE = 3
EXIT_DATA = 4


def _progress(**fields) -> None:
    sys.stderr.write(json.dumps(fields, sort_keys=True) + "\n")


def _write_manifest(out_dir: Path, command: str, arguments: dict, counts: dict,
                    seed=None) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "arguments": arguments,
        "data_versions": data_versions(),
        "seed": seed,
        "counts": counts,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_teams(spec: str, format_id) -> TeamSet:
    if spec.startswith("variety:"):
        if format_id is None:
            raise click.UsageError("--format is required with variety teams")
        parts = spec.split(":")
        n = int(parts[1])
        seed = int(parts[2]) if len(parts) > 2 else 0
        return generate_variety_teams(format_id, n, seed)
    try:
        return load_competitive_teams(spec, format_id)
    except IllegalTeam as err:
        raise click.ClickException(f"illegal team file {spec}: {err}")


@click.group()
@click.version_option(__version__)
def main():
    """Replay parsing, reconstruction, simulation, and evaluation."""


# ---------------------------------------------------------------- parse

@main.command("parse")
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--mode", type=click.Choice(["strict", "lenient"]), default="lenient",
              show_default=True)
@click.option("--anonymize", is_flag=True)
def parse_cmd(inputs, out, mode, anonymize):
    """Parse replay files into typed event dumps plus an error report."""
    out.mkdir(parents=True, exist_ok=True)
    files = _expand(inputs, "*.log")
    errors = {}
    parsed = 0
    for path in files:
        try:
            doc = parse_replay(path.read_text(encoding="utf-8"), mode=mode,
                               anonymize=anonymize)
        except ProtocolError as err:
            errors[str(path)] = str(err)
            _progress(event="parse-error", file=str(path), error=str(err))
            continue
        parsed += 1
        records = [{"kind": type(ev).__name__, "line": serialize_event(ev)}
                   for ev in doc.events]
        target = out / (path.stem + ".events.jsonl")
        with target.open("w", encoding="utf-8") as f:
            for rec in records:
                f.write(json.dumps(rec) + "\n")
    (out / "errors.json").write_text(json.dumps(errors, indent=2, sort_keys=True)
                                     + "\n", encoding="utf-8")
    _write_manifest(out, "parse",
                    {"mode": mode, "anonymize": anonymize,
                     "inputs": [str(p) for p in files]},
                    {"parsed": parsed, "errors": len(errors)})
    if errors and mode == "strict":
        raise SystemExit(EXIT_PARSE)


def _expand(inputs, pattern) -> list[Path]:
    files = []
    for p in inputs:
        if p.is_dir():
            files.extend(sorted(p.glob(pattern)))
        else:
            files.append(p)
    return files


# ----------------------------------------------------------- reconstruct

def _reconstruct_one(args):
    path_text, mode, anonymize, stats_path, pov, finalize_mode, seed, fill = args
    from .trajectory import reconstruct as _rec  # re-import inside workers
    stats = UsageStats.load(stats_path) if stats_path else UsageStats.bundled()
    try:
        doc = parse_replay(path_text[1], mode=mode, anonymize=anonymize)
    except ProtocolError as err:
        return path_text[0], Discarded("ParseError", str(err)), None
    options = ReconstructOptions(
        finalize_mode=finalize_mode, seed=seed,
        fill_policy=make_agent(fill) if fill else None)
    result = _rec(doc, stats, pov=pov, options=options)
    return path_text[0], result, doc.format_id


@main.command("reconstruct")
@click.argument("input_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), required=True,
              help="Output dataset file (.jsonl); manifest lands beside it.")
@click.option("--stats", "stats_path", type=click.Path(exists=True, path_type=Path))
@click.option("--pov", type=click.Choice(["p1", "p2", "both"]), default="both",
              show_default=True)
@click.option("--mode", type=click.Choice(["strict", "lenient"]), default="lenient")
@click.option("--finalize-mode", type=click.Choice(["argmax", "sample"]),
              default="argmax", show_default=True)
@click.option("--fill", type=click.Choice(sorted(AGENT_CLASSES)), default=None,
              help="Fill policy replacing masked action labels.")
@click.option("--anonymize", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def reconstruct_cmd(input_dir, out, stats_path, pov, mode, finalize_mode, fill,
                    anonymize, seed, workers):
    """Reconstruct POV trajectories from a directory of replay logs."""
    files = _expand([input_dir], "*.log")
    out.parent.mkdir(parents=True, exist_ok=True)
    tasks = [((str(p), p.read_text(encoding="utf-8")), mode, anonymize,
              str(stats_path) if stats_path else None, pov, finalize_mode,
              seed, fill) for p in files]
    discard_reasons = Counter()
    trajectories = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_reconstruct_one, tasks, chunksize=8))
    else:
        results = [_reconstruct_one(t) for t in tasks]
    for name, result, _fmt in results:
        if isinstance(result, Discarded):
            discard_reasons[result.reason] += 1
            _progress(event="discard", file=name, reason=result.reason,
                      detail=result.detail)
        else:
            trajectories.extend(result)
    vocab = default_vocabulary()
    written = write_dataset(trajectories, out, vocab)
    _write_manifest(out.parent, "reconstruct",
                    {"input_dir": str(input_dir), "pov": pov, "mode": mode,
                     "finalize_mode": finalize_mode, "fill": fill,
                     "anonymize": anonymize, "workers": workers,
                     "stats": str(stats_path) if stats_path else "bundled"},
                    {"replays": len(files), "trajectories": written,
                     "discards": dict(discard_reasons)},
                    seed=seed)
    _progress(event="done", trajectories=written,
              discards=dict(discard_reasons))


# ---------------------------------------------------------------- battle

@main.command("battle")
@click.option("--agent-a", "agent_a", type=click.Choice(sorted(AGENT_CLASSES)),
              required=True)
@click.option("--agent-b", "agent_b", type=click.Choice(sorted(AGENT_CLASSES)),
              required=True)
@click.option("--teams", required=True,
              help="Team source: variety:N[:seed] or a team file path.")
@click.option("--format", "format_id", default=None)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--seeds", type=int, default=1, show_default=True,
              help="Number of battles (seed-base + 0..N-1).")
@click.option("--seed-base", type=int, default=0, show_default=True)
@click.option("--record-trajectories", is_flag=True)
def battle_cmd(agent_a, agent_b, teams, format_id, out, seeds, seed_base,
               record_trajectories):
    """Run agent-vs-agent battles; write logs, results, and optionally
    self-play trajectories."""
    team_set = _load_teams(teams, format_id)
    out.mkdir(parents=True, exist_ok=True)
    a = make_agent(agent_a)
    b = make_agent(agent_b)
    results = []
    trajectories = []
    for k in range(seeds):
        seed = seed_base + k
        match = run_match(a, b, team_set, seed=seed, keep_log=True,
                          record_trajectories=record_trajectories)
        results.append(match)
        log_path = out / f"battle-{seed:06d}.log"
        from .protocol import serialize_replay
        log_path.write_text(serialize_replay(match.events), encoding="utf-8")
        if record_trajectories and isinstance(match.trajectories, list):
            trajectories.extend(match.trajectories)
        _progress(event="match", seed=seed, winner=match.winner,
                  turns=match.turns)
    with (out / "results.jsonl").open("w", encoding="utf-8") as f:
        for match in results:
            f.write(json.dumps(match_record(match)) + "\n")
    if record_trajectories:
        write_dataset(trajectories, out / "trajectories.jsonl",
                      default_vocabulary())
    wins_a = sum(1 for m in results if m.winner == "agent_a")
    _write_manifest(out, "battle",
                    {"agent_a": agent_a, "agent_b": agent_b, "teams": teams,
                     "format": team_set.format_id, "seeds": seeds,
                     "record_trajectories": record_trajectories},
                    {"battles": len(results), "wins_a": wins_a,
                     "trajectories": len(trajectories)},
                    seed=seed_base)


# ---------------------------------------------- round-robin and composite

@main.command("round-robin")
@click.option("--agents", required=True,
              help="Comma-separated agent names (at least two).")
@click.option("--teams", required=True)
@click.option("--format", "format_id", default=None)
@click.option("-n", "--n-per-pair", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def round_robin_cmd(agents, teams, format_id, n_per_pair, seed, workers, out):
    """Round-robin win-rate matrix (rows beat columns)."""
    names = [a.strip() for a in agents.split(",") if a.strip()]
    for name in names:
        if name not in AGENT_CLASSES:
            raise click.UsageError(f"unknown agent {name!r}")
    team_set = _load_teams(teams, format_id)
    report = round_robin(names, team_set, n_per_pair, seed, workers=workers)
    out.mkdir(parents=True, exist_ok=True)
    (out / "round_robin.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    rows = ["agent," + ",".join(report["agents"])]
    for a in report["agents"]:
        cells = [f"{report['matrix'][a][b]:.4f}" if b != a else ""
                 for b in report["agents"]]
        rows.append(a + "," + ",".join(cells))
    (out / "round_robin.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    _write_manifest(out, "round-robin",
                    {"agents": names, "teams": teams, "n_per_pair": n_per_pair,
                     "workers": workers, "format": team_set.format_id},
                    {"pairs": len(names) * (len(names) - 1) // 2}, seed=seed)


@main.command("composite")
@click.option("--agent", "agent_name", type=click.Choice(sorted(AGENT_CLASSES)),
              required=True)
@click.option("--teams", required=True)
@click.option("--format", "format_id", default=None)
@click.option("-n", "--n-per-opponent", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def composite_cmd(agent_name, teams, format_id, n_per_opponent, seed, workers, out):
    """Heuristic composite score: mean win rate vs the six references."""
    team_set = _load_teams(teams, format_id)
    report = heuristic_composite(agent_name, team_set, n_per_opponent, seed,
                                 workers=workers)
    out.mkdir(parents=True, exist_ok=True)
    (out / "composite.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(out, "composite",
                    {"agent": agent_name, "teams": teams,
                     "n_per_opponent": n_per_opponent, "workers": workers,
                     "format": team_set.format_id},
                    {"composite": report["composite"]}, seed=seed)


# ------------------------------------------------------------------ rate

@main.command("rate")
@click.argument("results", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), required=True)
def rate_cmd(results, out):
    """Glicko-1/GXE report from match-result files (one rating period per
    file, in argument order)."""
    from .evalharness import read_match_results
    states: dict[str, RatingState] = {}
    games = Counter()
    for path in results:
        period: dict[str, list] = {}
        for rec in read_match_results(path):
            a, b = rec["agent_a"], rec["agent_b"]
            states.setdefault(a, RatingState())
            states.setdefault(b, RatingState())
            score_a = {"agent_a": 1.0, "agent_b": 0.0}.get(rec["winner"], 0.5)
            period.setdefault(a, []).append((b, score_a))
            period.setdefault(b, []).append((a, 1.0 - score_a))
            games[a] += 1
            games[b] += 1
        snapshot = dict(states)
        for name, matches in period.items():
            opponents = [(snapshot[opp].rating, snapshot[opp].rd, score)
                         for opp, score in matches]
            states[name] = glicko1_update(states[name], opponents)
    report = {name: {"rating": round(st.rating, 2), "rd": round(st.rd, 2),
                     "gxe": gxe(st), "games": games[name]}
              for name, st in sorted(states.items())}
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                   encoding="utf-8")
    _write_manifest(out.parent, "rate",
                    {"results": [str(p) for p in results]},
                    {"agents": len(report), "games": sum(games.values()) // 2})


# ----------------------------------------------------------- dataset ops

@main.group("dataset")
def dataset_group():
    """Trajectory dataset utilities."""


@dataset_group.command("stats")
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=None)
def dataset_stats_cmd(files, out):
    """Counts by format, rating histogram, and length histogram."""
    by_format = Counter()
    by_source = Counter()
    rating_hist = Counter()
    length_hist = Counter()
    total = 0
    timesteps = 0
    try:
        for path in files:
            read_header(path)
            for traj in iter_dataset(path):
                total += 1
                timesteps += len(traj.timesteps)
                by_format[traj.format_id] += 1
                by_source[traj.source] += 1
                if traj.rating is None:
                    rating_hist["unrated"] += 1
                else:
                    rating_hist[f"{(traj.rating // 100) * 100}"] += 1
                bucket = min((len(traj.timesteps) // 10) * 10, 100)
                length_hist[f"{bucket}+" if bucket >= 100 else str(bucket)] += 1
    except SchemaMismatch as err:
        click.echo(f"schema error: {err}", err=True)
        raise SystemExit(EXIT_DATA)
    report = {"trajectories": total, "timesteps": timesteps,
              "by_format": dict(by_format), "by_source": dict(by_source),
              "rating_histogram": dict(rating_hist),
              "length_histogram": dict(length_hist)}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        _write_manifest(out.parent, "dataset-stats",
                        {"files": [str(p) for p in files]},
                        {"trajectories": total})


# ----------------------------------------------------------------- teams

@main.group("teams")
def teams_group():
    """Team set utilities."""


@teams_group.command("generate")
@click.option("--format", "format_id", required=True)
@click.option("-n", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def teams_generate_cmd(format_id, n, seed, out):
    """Generate a variety team set and export it as team text."""
    team_set = generate_variety_teams(format_id, n, seed)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(export_teams(team_set), encoding="utf-8")
    _write_manifest(out.parent, "teams-generate",
                    {"format": format_id, "n": n}, {"teams": len(team_set)},
                    seed=seed)


@teams_group.command("validate")
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "format_id", default=None)
def teams_validate_cmd(path, format_id):
    """Validate a team file; nonzero exit and diagnostics on failure."""
    try:
        team_set = load_competitive_teams(path, format_id)
    except IllegalTeam as err:
        for problem in err.problems:
            click.echo(problem, err=True)
        raise SystemExit(EXIT_DATA)
    click.echo(f"{len(team_set)} team(s) valid for {team_set.format_id}")


if __name__ == "__main__":
    main()
