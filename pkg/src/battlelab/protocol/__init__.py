"""Pipe-delimited battle log protocol: typed events, parser, serializer."""

from .events import (
    Ability, Boost, BOOST_STATS, Cant, CureStatus, Damage, Drag, Event,
    Faint, FieldCondition, Format, Heal, HpStatus, Item, MalformedField,
    MissingHeader, Move, Player, PLAYER_SIDES, PLAYER_SLOTS, PokemonRef,
    ProtocolError, ProtocolEvent, Rated, Raw, SetStatus, SideCondition,
    STATUS_CODES, Switch, TeamSize, TERMINAL_EVENTS, Tie, Turn, Unboost,
    UnknownMessage, VolatileEnd, VolatileStart, Weather, Win,
)
from .parser import (
    ReplayDocument, parse_line, parse_replay, serialize_event, serialize_replay,
)

__all__ = [
    "Ability", "Boost", "BOOST_STATS", "Cant", "CureStatus", "Damage",
    "Drag", "Event", "Faint", "FieldCondition", "Format", "Heal",
    "HpStatus", "Item", "MalformedField", "MissingHeader", "Move",
    "Player", "PLAYER_SIDES", "PLAYER_SLOTS", "PokemonRef",
    "ProtocolError", "ProtocolEvent", "Rated", "Raw", "ReplayDocument",
    "SetStatus", "SideCondition", "STATUS_CODES", "Switch", "TeamSize",
    "TERMINAL_EVENTS", "Tie", "Turn", "Unboost", "UnknownMessage",
    "VolatileEnd", "VolatileStart", "Weather", "Win",
    "parse_line", "parse_replay", "serialize_event", "serialize_replay",
]
