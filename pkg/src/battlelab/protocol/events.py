"""Typed events for the pipe-delimited battle log protocol.

One event class per message kind. Every event keeps the original text it
was parsed from in ``source_line`` (excluded from equality so that a
constructed event compares equal to its parsed round trip).

The supported vocabulary is pinned in ``docs/protocol.md``; additions are
append-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

PLAYER_SLOTS = ("p1a", "p2a")
PLAYER_SIDES = ("p1", "p2")
STATUS_CODES = ("brn", "par", "psn", "tox", "slp", "frz", "fnt")
BOOST_STATS = ("atk", "def", "spa", "spd", "spe", "accuracy", "evasion")


class ProtocolError(Exception):
    """Base error for protocol parsing problems."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class UnknownMessage(ProtocolError):
    """Message tag not in the pinned vocabulary (strict mode only)."""


class MalformedField(ProtocolError):
    """A recognized message carries an unparseable field."""


class MissingHeader(ProtocolError):
    """Replay lacks the required header block."""


@dataclass(frozen=True)
class PokemonRef:
    """``p1a: Tauros`` style reference to an on-field pokemon."""

    slot: str  # p1a | p2a
    name: str

    @property
    def side(self) -> str:
        return self.slot[:2]

    def __str__(self) -> str:
        return f"{self.slot}: {self.name}"


@dataclass(frozen=True)
class HpStatus:
    """``188/383`` or ``188/383 par`` health payload."""

    current: int
    max: int
    status: Optional[str] = None

    @property
    def fraction(self) -> float:
        return self.current / self.max

    def __str__(self) -> str:
        text = f"{self.current}/{self.max}"
        if self.status:
            text += f" {self.status}"
        return text


@dataclass
class Event:
    """Common base; ``source_line`` never participates in equality."""

    source_line: Optional[str] = field(default=None, compare=False, kw_only=True)


@dataclass
class Format(Event):
    format_id: str


@dataclass
class Player(Event):
    side: str  # p1 | p2
    name: str
    avatar: Optional[str] = None
    rating: Optional[int] = None


@dataclass
class TeamSize(Event):
    side: str
    size: int


@dataclass
class Rated(Event):
    message: Optional[str] = None


@dataclass
class Turn(Event):
    number: int


@dataclass
class Move(Event):
    pokemon: PokemonRef
    move: str
    target: Optional[PokemonRef] = None


@dataclass
class Switch(Event):
    pokemon: PokemonRef
    species: str
    level: int
    hp: HpStatus
    gender: Optional[str] = None


@dataclass
class Drag(Event):
    pokemon: PokemonRef
    species: str
    level: int
    hp: HpStatus
    gender: Optional[str] = None


@dataclass
class Damage(Event):
    pokemon: PokemonRef
    hp: HpStatus
    from_source: Optional[str] = None
    of: Optional[PokemonRef] = None


@dataclass
class Heal(Event):
    pokemon: PokemonRef
    hp: HpStatus
    from_source: Optional[str] = None


@dataclass
class SetStatus(Event):
    pokemon: PokemonRef
    status: str


@dataclass
class CureStatus(Event):
    pokemon: PokemonRef
    status: str


@dataclass
class Boost(Event):
    pokemon: PokemonRef
    stat: str
    amount: int


@dataclass
class Unboost(Event):
    pokemon: PokemonRef
    stat: str
    amount: int


@dataclass
class Faint(Event):
    pokemon: PokemonRef


@dataclass
class Weather(Event):
    condition: str  # "none" clears
    upkeep: bool = False


@dataclass
class SideCondition(Event):
    side: str
    side_label: str  # player name as written after "p1: "
    condition: str
    ended: bool = False


@dataclass
class FieldCondition(Event):
    condition: str
    ended: bool = False


@dataclass
class Item(Event):
    pokemon: PokemonRef
    item: str


@dataclass
class Ability(Event):
    pokemon: PokemonRef
    ability: str


@dataclass
class Cant(Event):
    pokemon: PokemonRef
    reason: str
    move: Optional[str] = None


@dataclass
class VolatileStart(Event):
    pokemon: PokemonRef
    condition: str


@dataclass
class VolatileEnd(Event):
    pokemon: PokemonRef
    condition: str


@dataclass
class Win(Event):
    winner: str


@dataclass
class Tie(Event):
    pass


@dataclass
class Raw(Event):
    """Unrecognized or pass-through line, preserved verbatim."""

    text: str = ""

    @property
    def tag(self) -> str:
        parts = self.text.split("|")
        return parts[1] if len(parts) > 1 else ""


ProtocolEvent = Union[
    Format, Player, TeamSize, Rated, Turn, Move, Switch, Drag, Damage, Heal,
    SetStatus, CureStatus, Boost, Unboost, Faint, Weather, SideCondition,
    FieldCondition, Item, Ability, Cant, VolatileStart, VolatileEnd,
    Win, Tie, Raw,
]

TERMINAL_EVENTS = (Win, Tie)
HEADER_EVENTS = (Format, Player, TeamSize, Rated)
