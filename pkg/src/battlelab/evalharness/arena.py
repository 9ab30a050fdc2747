"""Agent-vs-agent battles at scale: single matches, round-robins, and the
heuristic composite score.

Matches are deterministic per seed. Batches fan out over a process pool
on independent seeds; a failed match aborts itself, not the batch.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..agents import COMPOSITE_SIX, make_agent, pov_projection
from ..engine import legal_actions, must_act, start_battle, step
from ..trajectory import ReconstructOptions, build_selfplay_trajectories
from .teams import TeamSet


@dataclass
class MatchResult:
    agent_a: str
    agent_b: str
    format_id: str
    seed: int
    winner: str  # agent_a | agent_b | tie
    turns: int
    replaced_actions: int = 0
    teams: Optional[dict] = None
    events: Optional[list] = None
    choices: Optional[dict] = None  # side -> executed meanings per decision
    trajectories: Optional[list] = None

    def score_for_a(self) -> float:
        if self.winner == "agent_a":
            return 1.0
        if self.winner == "agent_b":
            return 0.0
        return 0.5


def match_record(result: MatchResult) -> dict:
    """Compact structured record for match-result files."""
    return {"agent_a": result.agent_a, "agent_b": result.agent_b,
            "format_id": result.format_id, "seed": result.seed,
            "winner": result.winner, "turns": result.turns}


def write_match_results(results, path) -> int:
    with Path(path).open("w", encoding="utf-8") as f:
        for r in results:
            f.write(json.dumps(match_record(r)) + "\n")
    return len(results)


def read_match_results(path) -> list[dict]:
    out = []
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(json.loads(line))
    return out


def derive_seed(*parts) -> int:
    payload = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def run_match(agent_a, agent_b, teams, seed: int, format_id: Optional[str] = None,
              record_trajectories: bool = False, keep_log: bool = False,
              max_turns: Optional[int] = None) -> MatchResult:
    """Play one battle between two agents.

    ``teams`` is a :class:`TeamSet` (a pair is drawn per seed) or an
    explicit ``(team_a, team_b)`` tuple plus ``format_id``.
    """
    if isinstance(teams, TeamSet):
        team_a, team_b = teams.pair(seed)
        format_id = teams.format_id
    else:
        team_a, team_b = teams
        if format_id is None:
            raise ValueError("format_id required with explicit teams")
    names = (f"{agent_a.name}-p1", f"{agent_b.name}-p2")
    state, events = start_battle(format_id, team_a, team_b, names=names,
                                 seed=seed, max_turns=max_turns)
    own_teams = {"p1": [mon.spec for mon in state.sides[0].team],
                 "p2": [mon.spec for mon in state.sides[1].team]}
    rngs = {"p1": random.Random(f"{seed}:p1"), "p2": random.Random(f"{seed}:p2")}
    agents = {"p1": agent_a, "p2": agent_b}
    choices = {"p1": [], "p2": []}
    replaced = 0
    while state.ongoing:
        picked = {"p1": None, "p2": None}
        for side in ("p1", "p2"):
            if must_act(state, side):
                legal = legal_actions(state, side)
                view = pov_projection(state, side)
                picked[side] = agents[side].choose_action(view, side, legal,
                                                          rngs[side])
        result = step(state, picked["p1"], picked["p2"])
        events.extend(result.events)
        for side in ("p1", "p2"):
            if result.executed[side] is not None:
                choices[side].append(result.meanings[side])
            if result.replaced[side]:
                replaced += 1
    if state.outcome[0] == "tie":
        winner = "tie"
    else:
        winner = "agent_a" if state.outcome[1] == "p1" else "agent_b"
    match = MatchResult(agent_a=agent_a.name, agent_b=agent_b.name,
                        format_id=format_id, seed=seed, winner=winner,
                        turns=max(1, state.turn), replaced_actions=replaced,
                        choices=choices)
    if keep_log:
        match.events = events
        match.teams = own_teams
    if record_trajectories:
        match.trajectories = build_selfplay_trajectories(
            format_id, names, events, own_teams, pov="both",
            options=ReconstructOptions(seed=seed))
    return match


# ------------------------------------------------------------ batch running

def _play_one(args) -> tuple:
    (name_a, name_b, format_id, team_a, team_b, seed) = args
    agent_a = make_agent(name_a)
    agent_b = make_agent(name_b)
    result = run_match(agent_a, agent_b, (team_a, team_b), seed,
                       format_id=format_id)
    return name_a, name_b, result.score_for_a(), result.turns


def _batch(tasks, workers: int):
    if workers <= 1:
        for t in tasks:
            yield _play_one(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_play_one, tasks, chunksize=16)


def _pair_tasks(name_a, name_b, team_set: TeamSet, n: int, seed: int):
    """n matches for one pairing, scheduled as mirrored pairs: consecutive
    matches reuse the same seed and team assignment with seats swapped, so
    team-matchup luck cancels within each pair."""
    tasks = []
    for k in range(n):
        match_seed = derive_seed(seed, name_a, name_b, k // 2)
        team_x, team_y = team_set.pair(match_seed)
        if k % 2 == 0:
            tasks.append((name_a, name_b, team_set.format_id, team_x, team_y,
                          match_seed))
        else:
            tasks.append((name_b, name_a, team_set.format_id, team_x, team_y,
                          match_seed))
    return tasks


def pair_win_rate(name_a: str, name_b: str, team_set: TeamSet, n: int,
                  seed: int, workers: int = 1) -> float:
    """Win rate of agent_a against agent_b over n seat-alternating matches
    (ties count 0.5)."""
    tasks = _pair_tasks(name_a, name_b, team_set, n, seed)
    total = 0.0
    for first, _, score_first, _ in _batch(tasks, workers):
        total += score_first if first == name_a else 1.0 - score_first
    return total / n


def round_robin(agent_names, team_set: TeamSet, n_per_pair: int, seed: int,
                workers: int = 1) -> dict:
    """Full round-robin win-rate matrix.

    ``matrix[a][b]`` is a's win rate against b; ``matrix[a][b] +
    matrix[b][a] == 1`` exactly by bookkeeping (each match counted once).
    """
    names = list(agent_names)
    if len(names) < 2:
        raise ValueError("round robin needs at least two agents")
    matrix = {a: {} for a in names}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            rate = pair_win_rate(a, b, team_set, n_per_pair, seed, workers)
            matrix[a][b] = rate
            matrix[b][a] = 1.0 - rate
    return {"agents": names, "n_per_pair": n_per_pair, "seed": seed,
            "format_id": team_set.format_id, "matrix": matrix}


def heuristic_composite(agent_name: str, team_set: TeamSet, n: int, seed: int,
                        workers: int = 1,
                        opponents=COMPOSITE_SIX) -> dict:
    """Mean win rate against the six reference heuristics."""
    per_opponent = {}
    for opp in opponents:
        per_opponent[opp] = pair_win_rate(agent_name, opp, team_set, n,
                                          derive_seed(seed, "composite", opp),
                                          workers)
    composite = sum(per_opponent.values()) / len(per_opponent)
    return {"agent": agent_name, "composite": composite,
            "per_opponent": per_opponent, "n_per_opponent": n,
            "format_id": team_set.format_id}
