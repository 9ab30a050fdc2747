"""Observed-so-far team knowledge with reveal-turn bookkeeping.

A :class:`PartialTeam` records, per revealed team slot, which attributes
are public and the decision timestep at which each became public. Revealed
attributes never change; a second, different value for the same attribute
is a :class:`ContradictoryReveal` and the replay must be discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..protocol import (
    Ability, Cant, Damage, Drag, Event, Heal, Item, Move, Switch, TeamSize,
)
from ..engine import to_id


class ContradictoryReveal(Exception):
    pass


@dataclass
class SlotKnowledge:
    species: str
    nickname: str
    level: int
    first_seen: int
    moves: dict[str, int] = field(default_factory=dict)  # move id -> reveal turn
    item: Optional[tuple[str, int]] = None
    ability: Optional[tuple[str, int]] = None

    def reveal_move(self, move_id: str, turn: int) -> None:
        if move_id in self.moves:
            return
        if len(self.moves) >= 4:
            raise ContradictoryReveal(
                f"{self.species} revealed a fifth move {move_id!r}")
        self.moves[move_id] = turn

    def reveal_item(self, item_id: str, turn: int) -> None:
        if self.item is None:
            self.item = (item_id, turn)
        elif self.item[0] != item_id:
            raise ContradictoryReveal(
                f"{self.species} revealed two items: {self.item[0]!r}, {item_id!r}")

    def reveal_ability(self, ability_id: str, turn: int) -> None:
        if self.ability is None:
            self.ability = (ability_id, turn)
        elif self.ability[0] != ability_id:
            raise ContradictoryReveal(
                f"{self.species} revealed two abilities: "
                f"{self.ability[0]!r}, {ability_id!r}")


class PartialTeam:
    """Reveal bookkeeping for one side of one battle."""

    def __init__(self, side: str):
        self.side = side
        self.slots: dict[str, SlotKnowledge] = {}  # keyed/ordered by species
        self.team_size = 6
        self._nicknames: dict[str, str] = {}

    def slot_for_nickname(self, nickname: str) -> Optional[SlotKnowledge]:
        species = self._nicknames.get(nickname)
        return self.slots.get(species) if species else None

    def update_from_event(self, ev: Event, turn: int) -> None:
        """Fold one event pertaining to this side into the knowledge state."""
        if isinstance(ev, (Switch, Drag)):
            species = to_id(ev.species)
            slot = self.slots.get(species)
            if slot is None:
                slot = SlotKnowledge(species=species, nickname=ev.pokemon.name,
                                     level=ev.level, first_seen=turn)
                self.slots[species] = slot
            elif slot.level != ev.level:
                raise ContradictoryReveal(
                    f"{species} level changed {slot.level} -> {ev.level}")
            self._nicknames[ev.pokemon.name] = species
        elif isinstance(ev, Move):
            slot = self.slot_for_nickname(ev.pokemon.name)
            move_id = to_id(ev.move)
            if slot is not None and move_id != "struggle":
                slot.reveal_move(move_id, turn)
        elif isinstance(ev, Cant):
            if ev.move:
                slot = self.slot_for_nickname(ev.pokemon.name)
                if slot is not None:
                    slot.reveal_move(to_id(ev.move), turn)
        elif isinstance(ev, Item):
            slot = self.slot_for_nickname(ev.pokemon.name)
            if slot is not None:
                slot.reveal_item(to_id(ev.item), turn)
        elif isinstance(ev, Ability):
            slot = self.slot_for_nickname(ev.pokemon.name)
            if slot is not None:
                slot.reveal_ability(to_id(ev.ability), turn)
        elif isinstance(ev, (Damage, Heal)):
            source = ev.from_source
            if source:
                slot = self.slot_for_nickname(ev.pokemon.name)
                if slot is not None:
                    if source.startswith("item:"):
                        slot.reveal_item(to_id(source.split(":", 1)[1]), turn)
                    elif source.startswith("ability:"):
                        slot.reveal_ability(to_id(source.split(":", 1)[1]), turn)
        elif isinstance(ev, TeamSize):
            if ev.side == self.side:
                self.team_size = ev.size

    def revealed_species(self) -> list[str]:
        return list(self.slots)
