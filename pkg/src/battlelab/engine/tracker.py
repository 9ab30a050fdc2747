"""Spectator-view battle tracker.

Applies parsed protocol events one at a time to a :class:`BattleState`
whose team knowledge starts empty and grows as events reveal it. The
tracker is strict about consistency: an event that cannot be reconciled
with the tracked state raises :class:`InconsistentEvent`, and events
touching mechanics outside the implemented subset raise
:class:`UnsupportedMechanic`. Reconstruction discards the replay in both
cases.
"""

from __future__ import annotations

from typing import Optional

from ..protocol import (
    Ability, Boost, Cant, CureStatus, Damage, Drag, Event, Faint,
    FieldCondition, Format, Heal, Item, Move, Player, Rated, Raw, SetStatus,
    SideCondition, Switch, TeamSize, Tie, Turn, Unboost, VolatileEnd,
    VolatileStart, Weather, Win,
)
from .gamedata import GenData, UnknownMove, UnknownSpecies, get_gen_for_format, to_id
from .state import BattleState, NO_STATUS, PokemonSpec, PokemonState, SideState


class InconsistentEvent(Exception):
    """Event contradicts the tracked state; the replay is ambiguous."""


class UnsupportedMechanic(Exception):
    """Event exercises a mechanic outside the implemented subset."""


# raw dash-tags that are purely cosmetic and never change battle state
COSMETIC_RAW_TAGS = {
    "-crit", "-supereffective", "-resisted", "-immune", "-miss", "-fail",
    "-hitcount", "-nothing", "-message", "-hint", "-anim", "-notarget",
}

_CONDITION_IDS = {"reflect", "lightscreen", "spikes"}
_VOLATILE_IDS = {"confusion"}


class ReplayTracker:
    """Incremental spectator state machine over a replay's event stream."""

    def __init__(self, format_id: str, players: tuple[str, str]):
        self.data: GenData = get_gen_for_format(format_id)
        sides = (SideState("p1", players[0]), SideState("p2", players[1]))
        self.state = BattleState(format_id, self.data, sides, rng=None)
        self._nicknames: dict[str, dict[str, int]] = {"p1": {}, "p2": {}}
        self._saw_turn = False

    # ------------------------------------------------------------- helpers
    def _side(self, slot: str) -> SideState:
        return self.state.side(slot[:2])

    def _active(self, ref, context: str) -> PokemonState:
        side = self._side(ref.slot)
        mon = side.active
        if mon is None:
            raise InconsistentEvent(f"{context}: no active pokemon on {ref.slot}")
        if mon.spec.name != ref.name:
            raise InconsistentEvent(
                f"{context}: {ref.name!r} is not the active pokemon on {ref.slot}")
        return mon

    def _sync_hp(self, mon: PokemonState, hp) -> None:
        if hp.max != mon.max_hp:
            # historical logs may rescale (e.g. /100); trust the event
            mon.max_hp = hp.max
        mon.current_hp = hp.current
        if hp.status and hp.status != "fnt" and mon.status == NO_STATUS:
            mon.status = hp.status

    def _reveal_from_source(self, mon: PokemonState, source: Optional[str]) -> None:
        if not source:
            return
        if source.startswith("item:"):
            mon.item = to_id(source.split(":", 1)[1])
            mon.item_revealed = True
        elif source.startswith("ability:"):
            mon.spec.ability = to_id(source.split(":", 1)[1])
            mon.ability_revealed = True

    # --------------------------------------------------------------- apply
    def apply(self, ev: Event) -> None:
        state = self.state
        if isinstance(ev, Turn):
            if ev.number != state.turn + 1:
                raise InconsistentEvent(
                    f"turn {ev.number} does not follow turn {state.turn}")
            for side in state.sides:
                if side.pending_replace:
                    raise InconsistentEvent("turn began with a fainted active")
            state.turn = ev.number
            state.phase = "move"
            self._saw_turn = True
        elif isinstance(ev, (Switch, Drag)):
            self._apply_switch(ev)
        elif isinstance(ev, Move):
            self._apply_move(ev)
        elif isinstance(ev, Damage):
            mon = self._active(ev.pokemon, "damage")
            if mon.fainted:
                raise InconsistentEvent("damage to a fainted pokemon")
            if ev.hp.max == mon.max_hp and ev.hp.current > mon.current_hp:
                raise InconsistentEvent("damage event raised hp")
            self._sync_hp(mon, ev.hp)
            self._reveal_from_source(mon, ev.from_source)
        elif isinstance(ev, Heal):
            mon = self._active(ev.pokemon, "heal")
            if mon.fainted:
                raise InconsistentEvent("heal on a fainted pokemon")
            if ev.hp.max == mon.max_hp and ev.hp.current < mon.current_hp:
                raise InconsistentEvent("heal event lowered hp")
            self._sync_hp(mon, ev.hp)
            self._reveal_from_source(mon, ev.from_source)
        elif isinstance(ev, SetStatus):
            mon = self._active(ev.pokemon, "status")
            if mon.fainted:
                raise InconsistentEvent("status on a fainted pokemon")
            mon.status = ev.status
            if ev.status == "slp":
                mon.sleep_counter = 0
            elif ev.status == "tox":
                mon.toxic_counter = 0
        elif isinstance(ev, CureStatus):
            mon = self._active(ev.pokemon, "curestatus")
            mon.status = NO_STATUS
            mon.sleep_counter = 0
        elif isinstance(ev, Boost):
            mon = self._active(ev.pokemon, "boost")
            mon.boosts[ev.stat] = min(6, mon.boosts[ev.stat] + ev.amount)
        elif isinstance(ev, Unboost):
            mon = self._active(ev.pokemon, "unboost")
            mon.boosts[ev.stat] = max(-6, mon.boosts[ev.stat] - ev.amount)
        elif isinstance(ev, Faint):
            mon = self._active(ev.pokemon, "faint")
            mon.current_hp = 0
            mon.status = NO_STATUS
            mon.volatiles = {}
            side = self._side(ev.pokemon.slot)
            side.pending_replace = side.remaining() > 0
            if side.pending_replace:
                self.state.phase = "forceswitch"
        elif isinstance(ev, Weather):
            if ev.upkeep:
                return
            wid = to_id(ev.condition) if ev.condition != "none" else "none"
            state.weather = wid
            state.weather_turns = -1
        elif isinstance(ev, SideCondition):
            side = state.side(ev.side)
            cid = to_id(ev.condition)
            if cid not in _CONDITION_IDS:
                raise UnsupportedMechanic(f"side condition {ev.condition!r}")
            if ev.ended:
                side.conditions.pop(cid, None)
            elif cid in side.conditions:
                side.conditions[cid]["layers"] += 1
            else:
                side.conditions[cid] = {"turns": -1, "layers": 1}
        elif isinstance(ev, FieldCondition):
            raise UnsupportedMechanic(f"field condition {ev.condition!r}")
        elif isinstance(ev, Item):
            mon = self._active(ev.pokemon, "item")
            mon.item = to_id(ev.item)
            mon.spec.item = mon.item
            mon.item_revealed = True
        elif isinstance(ev, Ability):
            mon = self._active(ev.pokemon, "ability")
            mon.spec.ability = to_id(ev.ability)
            mon.ability_revealed = True
        elif isinstance(ev, Cant):
            mon = self._active(ev.pokemon, "cant")
            if ev.reason == "slp":
                mon.sleep_counter += 1
            if ev.move:
                self._reveal_move(mon, ev.move)
        elif isinstance(ev, VolatileStart):
            cid = to_id(ev.condition)
            if cid not in _VOLATILE_IDS:
                raise UnsupportedMechanic(f"volatile {ev.condition!r}")
            mon = self._active(ev.pokemon, "volatile")
            mon.volatiles[cid] = -1
        elif isinstance(ev, VolatileEnd):
            mon = self._active(ev.pokemon, "volatile")
            mon.volatiles.pop(to_id(ev.condition), None)
        elif isinstance(ev, Win):
            if ev.winner == state.sides[0].player_name:
                state.outcome = ("win", "p1")
            elif ev.winner == state.sides[1].player_name:
                state.outcome = ("win", "p2")
            else:
                raise InconsistentEvent(f"unknown winner {ev.winner!r}")
        elif isinstance(ev, Tie):
            state.outcome = ("tie",)
        elif isinstance(ev, TeamSize):
            state.side(ev.side).team_size = ev.size
        elif isinstance(ev, (Format, Player, Rated)):
            pass
        elif isinstance(ev, Raw):
            tag = ev.tag
            if tag.startswith("-") and tag not in COSMETIC_RAW_TAGS:
                raise UnsupportedMechanic(f"unrecognized battle message {tag!r}")
        else:
            raise UnsupportedMechanic(f"unhandled event {type(ev).__name__}")

    def _apply_switch(self, ev) -> None:
        side = self._side(ev.pokemon.slot)
        species_id = to_id(ev.species)
        try:
            species = self.data.get_species(species_id)
        except UnknownSpecies:
            raise UnsupportedMechanic(f"unknown species {ev.species!r}") from None
        nick = ev.pokemon.name
        nicknames = self._nicknames[side.side]
        index = nicknames.get(nick)
        if index is None:
            existing = side.find(species_id)
            if existing is not None:
                if side.team[existing].spec.name != nick:
                    raise UnsupportedMechanic(
                        f"duplicate species {ev.species!r} with distinct nicknames")
                index = existing
            else:
                if len(side.team) >= side.team_size:
                    raise InconsistentEvent(
                        f"{side.side} revealed more than {side.team_size} pokemon")
                spec = PokemonSpec(species=species_id, name=nick, level=ev.level,
                                   types=species.types)
                mon = PokemonState(spec, max_hp=ev.hp.max)
                mon.species_revealed = True
                side.team.append(mon)
                index = len(side.team) - 1
            nicknames[nick] = index
        mon = side.team[index]
        if mon.spec.species != species_id:
            raise InconsistentEvent(
                f"nickname {nick!r} changed species mid-battle")
        out = side.active
        if out is not None and out is not mon:
            out.reset_on_switch_out()
        side.active_index = index
        side.pending_replace = False
        if not any(s.pending_replace for s in self.state.sides):
            self.state.phase = "move"
        self._sync_hp(mon, ev.hp)
        if ev.hp.status is None:
            mon.status = NO_STATUS  # the switch line is authoritative

    def _apply_move(self, ev) -> None:
        mon = self._active(ev.pokemon, "move")
        if mon.fainted:
            raise InconsistentEvent("move by a fainted pokemon")
        self._reveal_move(mon, ev.move)

    def _reveal_move(self, mon: PokemonState, move_name: str) -> None:
        move_id = to_id(move_name)
        if move_id == "struggle":
            mon.last_move = move_id
            return
        try:
            move = self.data.get_move(move_id)
        except UnknownMove:
            raise UnsupportedMechanic(f"unknown move {move_name!r}") from None
        if move_id not in mon.spec.moves:
            if len(mon.spec.moves) >= 4:
                raise InconsistentEvent(
                    f"{mon.spec.species} revealed a fifth move {move_name!r}")
            mon.spec.moves.append(move_id)
        mon.last_move = move_id
        mon.revealed_moves.add(move_id)
        mon.pp[move_id] = mon.pp.get(move_id, move.pp) - 1
