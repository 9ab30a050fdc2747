"""Evaluation harness: arenas, ratings, team sets."""

from .arena import (
    MatchResult, derive_seed, heuristic_composite, match_record,
    pair_win_rate, read_match_results, round_robin, run_match,
    write_match_results,
)
from .ratings import (
    GXE_RD_CUTOFF, INITIAL_RATING, INITIAL_RD, RatingState, expected_score,
    g_attenuation, glicko1_update, gxe,
)
from .teams import (
    IllegalTeam, TeamSet, export_teams, generate_variety_teams,
    load_competitive_teams, replay_teamset, validate_team,
)

__all__ = [
    "GXE_RD_CUTOFF", "IllegalTeam", "INITIAL_RATING", "INITIAL_RD",
    "MatchResult", "RatingState", "TeamSet", "derive_seed", "expected_score",
    "export_teams", "g_attenuation", "generate_variety_teams",
    "glicko1_update", "gxe", "heuristic_composite", "load_competitive_teams",
    "match_record", "pair_win_rate", "read_match_results", "replay_teamset",
    "round_robin", "run_match", "validate_team", "write_match_results",
]
