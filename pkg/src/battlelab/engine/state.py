"""Battle state containers shared by the simulator and the replay tracker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .gamedata import GenData

BOOST_KEYS = ("atk", "def", "spa", "spd", "spe", "accuracy", "evasion")
NO_STATUS = "none"


def new_boosts() -> dict[str, int]:
    return dict.fromkeys(BOOST_KEYS, 0)


@dataclass(eq=True)
class PokemonSpec:
    """Identity and loadout of one team member.

    During spectator tracking the moveset holds only what has been revealed
    so far; in the simulator it is the full ground-truth set.
    """

    species: str
    name: str
    level: int = 100
    types: tuple[str, ...] = ()
    moves: list[str] = field(default_factory=list)
    item: Optional[str] = None
    ability: Optional[str] = None
    stats: Optional[dict] = None

    def clone(self) -> "PokemonSpec":
        return PokemonSpec(species=self.species, name=self.name, level=self.level,
                           types=self.types, moves=list(self.moves), item=self.item,
                           ability=self.ability,
                           stats=dict(self.stats) if self.stats else None)


class PokemonState:
    """Dynamic per-battle state layered over a :class:`PokemonSpec`."""

    __slots__ = ("spec", "current_hp", "max_hp", "status", "sleep_turns_left",
                 "sleep_counter", "toxic_counter", "boosts", "volatiles",
                 "last_move", "pp", "item", "revealed_moves", "item_revealed",
                 "ability_revealed", "species_revealed", "slept_by_foe")

    def __init__(self, spec: PokemonSpec, max_hp: int, pp: Optional[dict] = None):
        self.spec = spec
        self.current_hp = max_hp
        self.max_hp = max_hp
        self.status = NO_STATUS
        self.sleep_turns_left = 0
        self.sleep_counter = 0
        self.toxic_counter = 0
        self.boosts = new_boosts()
        self.volatiles: dict[str, int] = {}
        self.last_move: Optional[str] = None
        self.pp = pp if pp is not None else {}
        self.item = spec.item
        self.revealed_moves: set[str] = set()
        self.item_revealed = False
        self.ability_revealed = False
        self.species_revealed = False
        self.slept_by_foe = False

    @property
    def fainted(self) -> bool:
        return self.current_hp <= 0

    @property
    def hp_fraction(self) -> float:
        return self.current_hp / self.max_hp if self.max_hp else 0.0

    def reset_on_switch_out(self) -> None:
        self.boosts = new_boosts()
        self.volatiles = {}
        self.toxic_counter = 0

    def clone(self) -> "PokemonState":
        other = PokemonState.__new__(PokemonState)
        other.spec = self.spec.clone()
        other.current_hp = self.current_hp
        other.max_hp = self.max_hp
        other.status = self.status
        other.sleep_turns_left = self.sleep_turns_left
        other.sleep_counter = self.sleep_counter
        other.toxic_counter = self.toxic_counter
        other.boosts = dict(self.boosts)
        other.volatiles = dict(self.volatiles)
        other.last_move = self.last_move
        other.pp = dict(self.pp)
        other.item = self.item
        other.revealed_moves = set(self.revealed_moves)
        other.item_revealed = self.item_revealed
        other.ability_revealed = self.ability_revealed
        other.species_revealed = self.species_revealed
        other.slept_by_foe = self.slept_by_foe
        return other


class SideState:
    __slots__ = ("side", "player_name", "team", "active_index", "conditions",
                 "team_size", "pending_replace")

    def __init__(self, side: str, player_name: str, team_size: int = 6):
        self.side = side
        self.player_name = player_name
        self.team: list[PokemonState] = []
        self.active_index: Optional[int] = None
        self.conditions: dict[str, dict] = {}
        self.team_size = team_size
        self.pending_replace = False

    @property
    def active(self) -> Optional[PokemonState]:
        if self.active_index is None:
            return None
        return self.team[self.active_index]

    def remaining(self) -> int:
        return sum(1 for p in self.team if not p.fainted) + \
            max(0, self.team_size - len(self.team))

    def find(self, species: str) -> Optional[int]:
        for i, p in enumerate(self.team):
            if p.spec.species == species:
                return i
        return None

    def clone(self) -> "SideState":
        other = SideState.__new__(SideState)
        other.side = self.side
        other.player_name = self.player_name
        other.team = [p.clone() for p in self.team]
        other.active_index = self.active_index
        other.conditions = {k: dict(v) for k, v in self.conditions.items()}
        other.team_size = self.team_size
        other.pending_replace = self.pending_replace
        return other


class BattleState:
    __slots__ = ("format_id", "data", "turn", "sides", "weather",
                 "weather_turns", "phase", "rng", "outcome", "substep",
                 "max_turns")

    def __init__(self, format_id: str, data: GenData, sides, rng=None):
        self.format_id = format_id
        self.data = data
        self.turn = 0
        self.sides: tuple[SideState, SideState] = sides
        self.weather = "none"
        self.weather_turns = 0
        self.phase = "move"
        self.rng = rng
        self.outcome: Optional[tuple] = None
        self.substep = 0
        self.max_turns = data.config.max_turns

    def side(self, side_id: str) -> SideState:
        return self.sides[0] if side_id == "p1" else self.sides[1]

    def opponent(self, side_id: str) -> SideState:
        return self.sides[1] if side_id == "p1" else self.sides[0]

    @property
    def ongoing(self) -> bool:
        return self.outcome is None

    def clone(self) -> "BattleState":
        other = BattleState.__new__(BattleState)
        other.format_id = self.format_id
        other.data = self.data  # immutable tables, shared
        other.turn = self.turn
        other.sides = (self.sides[0].clone(), self.sides[1].clone())
        other.weather = self.weather
        other.weather_turns = self.weather_turns
        other.phase = self.phase
        other.rng = self.rng  # shared stream; snapshot holders must not step it
        other.outcome = self.outcome
        other.substep = self.substep
        other.max_turns = self.max_turns
        return other


@dataclass(frozen=True)
class ActionChoice:
    """One of nine discrete actions: 0-3 moves, 4-8 bench switches.

    Both groups are indexed in alphabetical presentation order (moves by
    move id, bench by species id).
    """

    index: int

    @property
    def is_move(self) -> bool:
        return self.index < 4

    @property
    def is_switch(self) -> bool:
        return self.index >= 4


def move_slot_order(moves) -> list[str]:
    """The fixed alphabetical presentation order of a moveset."""
    return sorted(moves)


def bench_order(side: SideState) -> list[int]:
    """Team indices of the bench in alphabetical species order."""
    bench = [i for i in range(len(side.team)) if i != side.active_index]
    bench.sort(key=lambda i: (side.team[i].spec.species, i))
    return bench
