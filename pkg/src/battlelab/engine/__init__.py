"""Deterministic battle engine: simulator, data tables, spectator tracker."""

from .battle import (
    BattleOver, StepResult, TurnDeltas, action_meaning,
    legal_actions, must_act, resolve_choice, start_battle, step,
)
from .damage import (
    CONFUSION_HIT, STRUGGLE, damage_calc, effective_speed, effective_stats,
    rolled_damage, type_effectiveness,
)
from .gamedata import (
    GenConfig, GenData, MoveData, SpeciesData, UnknownMove, UnknownSpecies,
    boost_multiplier, data_versions, get_gen, get_gen_for_format, parse_format,
    tier_pool, to_id,
)
from .rng import BattleRng
from .state import (
    ActionChoice, BattleState, BOOST_KEYS, NO_STATUS, PokemonSpec,
    PokemonState, SideState, bench_order, move_slot_order,
)
from .tracker import (
    COSMETIC_RAW_TAGS, InconsistentEvent, ReplayTracker, UnsupportedMechanic,
)

__all__ = [
    "ActionChoice", "BattleOver", "BattleRng", "BattleState", "BOOST_KEYS",
    "CONFUSION_HIT", "COSMETIC_RAW_TAGS", "GenConfig", "GenData",
    "InconsistentEvent", "MoveData", "NO_STATUS",
    "PokemonSpec", "PokemonState", "ReplayTracker", "SideState",
    "SpeciesData", "StepResult", "STRUGGLE", "TurnDeltas", "UnknownMove",
    "UnknownSpecies", "UnsupportedMechanic", "action_meaning", "bench_order",
    "boost_multiplier", "damage_calc", "data_versions", "effective_speed",
    "effective_stats", "get_gen", "get_gen_for_format", "legal_actions",
    "move_slot_order", "must_act", "parse_format", "resolve_choice",
    "rolled_damage", "start_battle", "step", "tier_pool", "to_id",
    "type_effectiveness",
]
