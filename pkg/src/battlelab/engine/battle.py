"""Forward battle simulator for the documented Gen 1-4 mechanics subset.

``step`` resolves one simultaneous turn (or one forced-replacement step)
and emits the protocol events describing everything publicly visible, so
that replaying those events through the spectator tracker reproduces the
public projection of this state. Illegal choices are replaced by a
uniformly random legal action and flagged in the result.

Mechanics coverage (and deliberate omissions) are listed in
``docs/mechanics.md``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..protocol import (
    Ability, Cant, CureStatus, Damage, Faint, Format, Heal, HpStatus, Item,
    Move, Player, PokemonRef, Rated, SetStatus, SideCondition, Switch,
    TeamSize, Tie, Turn, VolatileEnd, VolatileStart, Weather, Win,
)
from .damage import (
    CONFUSION_HIT, STRUGGLE, effective_speed, rolled_damage, type_effectiveness,
)
from .gamedata import accuracy_multiplier, get_gen_for_format
from .rng import BattleRng
from .state import (
    ActionChoice, BattleState, NO_STATUS, PokemonSpec, PokemonState, SideState,
    bench_order, move_slot_order,
)

SCREENS = ("reflect", "lightscreen")
_CONDITION_NAMES = {"reflect": "Reflect", "lightscreen": "Light Screen",
                    "spikes": "Spikes"}
_WEATHER_NAMES = {"sandstorm": "Sandstorm", "raindance": "RainDance",
                  "sunnyday": "SunnyDay", "none": "none"}
SAND_IMMUNE_TYPES = ("rock", "ground", "steel")
CONSUMABLE_ITEMS = ("lumberry", "miracleberry")


class BattleOver(Exception):
    pass


@dataclass
class TurnDeltas:
    """Per-side quantities a reward function needs from one step."""

    hp_delta: float = 0.0
    faints: int = 0
    status_start: bool = False
    status_end: bool = False


@dataclass
class StepResult:
    events: list
    deltas: dict[str, TurnDeltas]
    executed: dict[str, Optional[ActionChoice]]
    replaced: dict[str, bool]
    meanings: dict[str, Optional[tuple]] = field(default_factory=dict)


def _ref(side: SideState) -> PokemonRef:
    mon = side.active
    return PokemonRef(slot=side.side + "a", name=mon.spec.name)


def _hp_status(mon: PokemonState) -> HpStatus:
    status = mon.status if mon.status != NO_STATUS else None
    return HpStatus(current=mon.current_hp, max=mon.max_hp, status=status)


def start_battle(format_id: str, team1: list[PokemonSpec], team2: list[PokemonSpec],
                 names: tuple[str, str] = ("Player 1", "Player 2"),
                 seed: int = 0, rated: bool = False,
                 max_turns: Optional[int] = None):
    """Set up a battle and return ``(state, header_events)``.

    Leads are team slot 0. Stats are computed from the default spread when
    a spec carries none, and every species/move must exist in the
    generation's tables.
    """
    data = get_gen_for_format(format_id)
    sides = []
    for side_id, name, team in (("p1", names[0], team1), ("p2", names[1], team2)):
        if not 1 <= len(team) <= 6:
            raise ValueError(f"{side_id}: team size {len(team)}")
        side = SideState(side=side_id, player_name=name, team_size=len(team))
        for spec in team:
            species = data.get_species(spec.species)
            spec = spec.clone()
            spec.types = spec.types or species.types
            if spec.stats is None:
                spec.stats = data.compute_stats(species, spec.level)
            if data.config.abilities and spec.ability is None and species.abilities:
                spec.ability = species.abilities[0]
            pp = {}
            for mid in spec.moves:
                pp[mid] = data.get_move(mid).pp
            mon = PokemonState(spec, max_hp=spec.stats["hp"], pp=pp)
            side.team.append(mon)
        sides.append(side)
    state = BattleState(format_id, data, tuple(sides), rng=BattleRng(seed))
    if max_turns is not None:
        state.max_turns = max_turns

    events = [Format(format_id=format_id),
              Player(side="p1", name=names[0]),
              Player(side="p2", name=names[1]),
              TeamSize(side="p1", size=len(team1)),
              TeamSize(side="p2", size=len(team2))]
    if rated:
        events.append(Rated())
    state.rng.begin(0, 0)
    for side in sides:
        _place_active(state, side.side, 0, events)
    for sid in _speed_order(state, ["p1", "p2"]):
        _entry_effects(state, sid, events)
    return state, events


def must_act(state: BattleState, side_id: str) -> bool:
    """Whether this side has a pending decision in the current phase."""
    if not state.ongoing:
        return False
    if state.phase == "forceswitch":
        return state.side(side_id).pending_replace
    return True


def legal_actions(state: BattleState, side_id: str) -> list[ActionChoice]:
    """Legal choices for a side, in index order.

    In the force-switch phase only bench switches are legal. When no move
    has PP left, index 0 becomes the Struggle fallback. Sides without a
    pending decision get an empty list.
    """
    if not state.ongoing:
        raise BattleOver("battle is over")
    side = state.side(side_id)
    if not must_act(state, side_id):
        return []
    actions = []
    switches = [ActionChoice(4 + k)
                for k, ti in enumerate(bench_order(side))
                if not side.team[ti].fainted]
    if state.phase == "forceswitch":
        return switches
    mon = side.active
    slots = move_slot_order(mon.spec.moves)[:4]
    usable = [i for i, mid in enumerate(slots) if mon.pp.get(mid, 0) > 0]
    if usable:
        actions.extend(ActionChoice(i) for i in usable)
    else:
        actions.append(ActionChoice(0))  # struggle
    actions.extend(switches)
    return actions


def resolve_choice(state: BattleState, side_id: str, choice: ActionChoice) -> tuple:
    """Map an action index to its meaning against the current state."""
    side = state.side(side_id)
    if choice.is_move:
        mon = side.active
        slots = move_slot_order(mon.spec.moves)[:4]
        usable = [mid for mid in slots if mon.pp.get(mid, 0) > 0]
        if not usable:
            return ("struggle", None)
        return ("move", slots[choice.index])
    order = bench_order(side)
    return ("switch", order[choice.index - 4])


def action_meaning(state: BattleState, side_id: str, choice: ActionChoice) -> tuple:
    """Semantic label for a choice: ``("move", id)`` or ``("switch", species)``."""
    kind, payload = resolve_choice(state, side_id, choice)
    if kind == "struggle":
        return ("move", "struggle")
    if kind == "move":
        return ("move", payload)
    return ("switch", state.side(side_id).team[payload].spec.species)


def step(state: BattleState, choice_p1: Optional[ActionChoice] = None,
         choice_p2: Optional[ActionChoice] = None) -> StepResult:
    """Advance one decision step (a full turn, or forced replacements)."""
    if not state.ongoing:
        raise BattleOver("battle is over")
    events: list = []
    snap = _snapshot(state)
    forced = state.phase == "forceswitch"
    if forced:
        state.substep += 1
        state.rng.begin(state.turn, state.substep)
    else:
        if state.turn + 1 > state.max_turns:
            state.outcome = ("tie",)
            events.append(Tie())
            return StepResult(events=events, deltas=_deltas(state, snap),
                              executed={"p1": None, "p2": None},
                              replaced={"p1": False, "p2": False})
        state.turn += 1
        state.substep = 0
        state.rng.begin(state.turn, 0)
        events.append(Turn(state.turn))

    provided = {"p1": choice_p1, "p2": choice_p2}
    executed: dict[str, Optional[ActionChoice]] = {"p1": None, "p2": None}
    replaced = {"p1": False, "p2": False}
    meanings: dict[str, Optional[tuple]] = {"p1": None, "p2": None}
    resolved: dict[str, Optional[tuple]] = {"p1": None, "p2": None}
    for sid in ("p1", "p2"):
        if not must_act(state, sid):
            continue
        legal = legal_actions(state, sid)
        ch = provided[sid]
        if ch not in legal:
            replaced[sid] = ch is not None
            ch = legal[state.rng.randint(0, len(legal) - 1)]
        executed[sid] = ch
        resolved[sid] = resolve_choice(state, sid, ch)
        meanings[sid] = action_meaning(state, sid, ch)

    if forced:
        for sid in ("p1", "p2"):
            if resolved[sid] is not None:
                state.side(sid).pending_replace = False
                _perform_switch(state, sid, resolved[sid][1], events)
    else:
        _run_turn(state, resolved, events)

    if state.ongoing:
        pending = any(s.pending_replace for s in state.sides)
        state.phase = "forceswitch" if pending else "move"
    return StepResult(events=events, deltas=_deltas(state, snap),
                      executed=executed, replaced=replaced, meanings=meanings)


# --------------------------------------------------------------- turn pieces

def _snapshot(state: BattleState):
    snap = {}
    for side in state.sides:
        snap[side.side] = ([(p.current_hp, p.max_hp) for p in side.team],
                           sum(1 for p in side.team if p.fainted),
                           _has_status(side))
    return snap


def _has_status(side: SideState) -> bool:
    a = side.active
    return a is not None and not a.fainted and a.status != NO_STATUS


def _deltas(state: BattleState, snap) -> dict[str, TurnDeltas]:
    out = {}
    for side in state.sides:
        hp_before, faints_before, status_before = snap[side.side]
        delta = 0.0
        for (before, max_hp), mon in zip(hp_before, side.team):
            delta += (mon.current_hp - before) / max_hp
        out[side.side] = TurnDeltas(
            hp_delta=delta,
            faints=sum(1 for p in side.team if p.fainted) - faints_before,
            status_start=status_before,
            status_end=_has_status(side),
        )
    return out


def _speed_order(state: BattleState, sids: list[str]) -> list[str]:
    if len(sids) < 2:
        return list(sids)
    s1 = effective_speed(state.side(sids[0]).active, state.data)
    s2 = effective_speed(state.side(sids[1]).active, state.data)
    if s1 > s2:
        return list(sids)
    if s2 > s1:
        return [sids[1], sids[0]]
    return list(sids) if state.rng.chance(0.5) else [sids[1], sids[0]]


def _run_turn(state: BattleState, resolved, events) -> None:
    switchers = [sid for sid in ("p1", "p2") if resolved[sid][0] == "switch"]
    for sid in _speed_order(state, switchers):
        _perform_switch(state, sid, resolved[sid][1], events)
        if not state.ongoing:
            return
    movers = [sid for sid in ("p1", "p2")
              if resolved[sid][0] in ("move", "struggle")]
    for sid in _move_order(state, movers, resolved):
        if not state.ongoing:
            return
        side = state.side(sid)
        mon = side.active
        if mon is None or mon.fainted:
            continue  # knocked out before acting; the choice is never revealed
        _execute_action(state, sid, resolved[sid], events)
    if state.ongoing:
        _end_of_turn(state, events)


def _move_order(state: BattleState, sids: list[str], resolved) -> list[str]:
    if len(sids) < 2:
        return list(sids)

    def prio(sid):
        kind, payload = resolved[sid]
        return 0 if kind == "struggle" else state.data.get_move(payload).priority

    p1, p2 = prio(sids[0]), prio(sids[1])
    if p1 > p2:
        return list(sids)
    if p2 > p1:
        return [sids[1], sids[0]]
    return _speed_order(state, sids)


def _place_active(state: BattleState, side_id: str, team_index: int, events) -> None:
    side = state.side(side_id)
    out = side.active
    if out is not None and not out.fainted:
        if (state.data.config.abilities and out.spec.ability == "naturalcure"
                and out.status != NO_STATUS):
            events.append(Ability(pokemon=_ref(side), ability="Natural Cure"))
            out.ability_revealed = True
            events.append(CureStatus(pokemon=_ref(side), status=out.status))
            out.status = NO_STATUS
            out.sleep_turns_left = 0
            out.sleep_counter = 0
        out.reset_on_switch_out()
    side.active_index = team_index
    mon = side.active
    mon.species_revealed = True
    events.append(Switch(pokemon=_ref(side), species=mon.spec.name,
                         level=mon.spec.level, hp=_hp_status(mon)))


def _perform_switch(state: BattleState, side_id: str, team_index: int, events) -> None:
    _place_active(state, side_id, team_index, events)
    _entry_effects(state, side_id, events)


def _entry_effects(state: BattleState, side_id: str, events) -> None:
    side = state.side(side_id)
    data = state.data
    cfg = data.config
    mon = side.active
    if mon is None or mon.fainted:
        return
    spikes = side.conditions.get("spikes")
    if spikes:
        grounded = "flying" not in mon.spec.types and \
            not (cfg.abilities and mon.spec.ability == "levitate")
        if grounded:
            frac = cfg.spikes_fractions[min(spikes["layers"], len(cfg.spikes_fractions)) - 1]
            _apply_damage(state, side, max(1, int(mon.max_hp * frac)), events,
                          from_source="Spikes")
            if _check_faint(state, side_id, events):
                return
    if not cfg.abilities:
        return
    opp = state.opponent(side_id)
    if mon.spec.ability == "intimidate" and opp.active and not opp.active.fainted:
        events.append(Ability(pokemon=_ref(side), ability="Intimidate"))
        mon.ability_revealed = True
        _apply_boosts(state, opp, {"atk": -1}, events)
    elif mon.spec.ability == "sandstream" and state.weather != "sandstorm":
        events.append(Ability(pokemon=_ref(side), ability="Sand Stream"))
        mon.ability_revealed = True
        state.weather = "sandstorm"
        state.weather_turns = -1
        events.append(Weather(condition=_WEATHER_NAMES["sandstorm"]))


def _execute_action(state: BattleState, side_id: str, resolved, events) -> None:
    kind, payload = resolved
    data = state.data
    cfg = data.config
    side = state.side(side_id)
    opp = state.opponent(side_id)
    mon = side.active
    rng = state.rng

    if mon.status == "slp":
        if mon.sleep_turns_left > 0:
            mon.sleep_turns_left -= 1
            mon.sleep_counter += 1
            events.append(Cant(pokemon=_ref(side), reason="slp"))
            return
        mon.status = NO_STATUS
        mon.sleep_counter = 0
        mon.slept_by_foe = False
        events.append(CureStatus(pokemon=_ref(side), status="slp"))
    elif mon.status == "frz":
        if rng.chance(cfg.freeze_thaw_chance):
            mon.status = NO_STATUS
            events.append(CureStatus(pokemon=_ref(side), status="frz"))
        else:
            events.append(Cant(pokemon=_ref(side), reason="frz"))
            return
    if mon.volatiles.pop("flinch", None):
        events.append(Cant(pokemon=_ref(side), reason="flinch"))
        return
    if "confusion" in mon.volatiles:
        left = mon.volatiles["confusion"] - 1
        if left <= 0:
            del mon.volatiles["confusion"]
            events.append(VolatileEnd(pokemon=_ref(side), condition="confusion"))
        else:
            mon.volatiles["confusion"] = left
            if rng.chance(cfg.confusion_self_hit_chance):
                lo, hi, _ = cfg.damage_roll
                dmg = rolled_damage(mon, mon, CONFUSION_HIT, data, rng.randint(lo, hi))
                _apply_damage(state, side, dmg, events, from_source="confusion")
                _check_faint(state, side_id, events)
                return
    if mon.status == "par" and rng.chance(cfg.paralysis_full_chance):
        events.append(Cant(pokemon=_ref(side), reason="par"))
        return

    move = STRUGGLE if kind == "struggle" else data.get_move(payload)
    mon.last_move = move.id
    if kind == "move":
        mon.pp[move.id] = mon.pp.get(move.id, 0) - 1
        mon.revealed_moves.add(move.id)

    target = opp.active
    fx = move.effects
    targets_opp = move.is_damaging or any(
        k in fx for k in ("status_opp", "boost_opp", "confuse_opp", "flinch_opp"))
    target_ref = _ref(opp) if targets_opp and target and not target.fainted else None
    events.append(Move(pokemon=_ref(side), move=move.name, target=target_ref))

    sleeper = fx.get("status_opp", {}).get("code") == "slp"
    if sleeper and _sleep_clause_blocks(state, side_id):
        return  # clause: the attempt is wasted

    if move.accuracy is not None:
        stage = mon.boosts["accuracy"]
        if target is not None:
            stage -= target.boosts["evasion"]
        stage = max(-6, min(6, stage))
        if not rng.chance(move.accuracy / 100 * accuracy_multiplier(stage)):
            return  # miss

    if move.is_damaging:
        _execute_damaging(state, side_id, move, kind == "struggle", events)
    else:
        _apply_move_effects(state, side_id, move, 0, events)


def _execute_damaging(state: BattleState, side_id: str, move, is_struggle: bool,
                      events) -> None:
    data = state.data
    cfg = data.config
    rng = state.rng
    side = state.side(side_id)
    opp = state.opponent(side_id)
    mon = side.active
    target = opp.active
    if target is None or target.fainted:
        return
    if move.effects.get("clear_screens_opp"):
        for screen in SCREENS:
            if screen in opp.conditions:
                del opp.conditions[screen]
                events.append(SideCondition(side=opp.side, side_label=opp.player_name,
                                            condition=_CONDITION_NAMES[screen],
                                            ended=True))
    if cfg.abilities and target.spec.ability == "waterabsorb" and move.type == "water":
        events.append(Ability(pokemon=_ref(opp), ability="Water Absorb"))
        target.ability_revealed = True
        _heal(state, opp, max(1, target.max_hp // 4), events)
        return
    eff = type_effectiveness(move, target, data)
    if eff == 0:
        return
    crit = False
    if move.effects.get("fixed_damage") is None:
        crit = rng.chance(_crit_chance(state, mon, move))
    lo, hi, _ = cfg.damage_roll
    screens = frozenset(s for s in SCREENS if s in opp.conditions)
    dmg = rolled_damage(mon, target, move, data, rng.randint(lo, hi), crit=crit,
                        weather=state.weather, defender_screens=screens)
    dmg = min(dmg, target.current_hp)
    _apply_damage(state, opp, dmg, events)
    if dmg > 0:
        recoil = move.effects.get("recoil")
        if recoil:
            _apply_damage(state, side, max(1, int(dmg * recoil)), events,
                          from_source="recoil")
        drain = move.effects.get("drain")
        if drain and mon.current_hp < mon.max_hp:
            _heal(state, side, max(1, int(dmg * drain)), events,
                  from_source="drain")
    if is_struggle:
        _apply_damage(state, side, max(1, int(mon.max_hp * cfg.struggle_recoil_fraction)),
                      events, from_source="recoil")
    if move.effects.get("self_faint"):
        mon.current_hp = 0
    _apply_move_effects(state, side_id, move, dmg, events)
    _register_faint(state, side_id, events)
    _register_faint(state, opp.side, events)
    _settle_outcome(state, events, loser_priority=side_id)


def _crit_chance(state: BattleState, mon: PokemonState, move) -> float:
    cfg = state.data.config
    high = bool(move.effects.get("high_crit"))
    if cfg.crit_mode == "speed":
        base_speed = state.data.get_species(mon.spec.species).base_stats["spe"]
        p = base_speed / 512
        if high:
            p *= cfg.high_crit_factor
        return min(p, 255 / 256)
    p = cfg.crit_rate
    if high:
        p *= cfg.high_crit_factor
    return min(p, 0.5)


def _apply_move_effects(state: BattleState, side_id: str, move, damage_dealt: int,
                        events) -> None:
    """Secondary and utility effects, shared by damaging and status moves."""
    data = state.data
    cfg = data.config
    rng = state.rng
    side = state.side(side_id)
    opp = state.opponent(side_id)
    mon = side.active
    target = opp.active
    fx = move.effects
    target_alive = target is not None and not target.fainted
    chance_scale = 2.0 if (cfg.abilities and mon.spec.ability == "serenegrace"
                           and move.is_damaging) else 1.0

    status_opp = fx.get("status_opp")
    if status_opp and target_alive:
        blocked = move.is_damaging and damage_dealt == 0
        if not blocked and rng.chance(min(1.0, status_opp["chance"] * chance_scale)):
            _try_status(state, side_id, opp, status_opp["code"], events,
                        check_immunity_vs=move if not move.is_damaging else None)
    boost_opp = fx.get("boost_opp")
    if boost_opp and target_alive:
        if rng.chance(min(1.0, boost_opp["chance"] * chance_scale)):
            _apply_boosts(state, opp, boost_opp["stats"], events)
    confuse = fx.get("confuse_opp")
    if confuse and target_alive and "confusion" not in target.volatiles:
        if rng.chance(min(1.0, confuse["chance"] * chance_scale)):
            target.volatiles["confusion"] = rng.randint(*cfg.confusion_turns)
            events.append(VolatileStart(pokemon=_ref(opp), condition="confusion"))
    flinch = fx.get("flinch_opp")
    if flinch and target_alive and damage_dealt > 0:
        if rng.chance(min(1.0, flinch["chance"] * chance_scale)):
            target.volatiles["flinch"] = 1
    boost_self = fx.get("boost_self")
    if boost_self and not mon.fainted:
        if rng.chance(boost_self["chance"]):
            _apply_boosts(state, side, boost_self["stats"], events)
    heal = fx.get("heal_self")
    if heal and mon.current_hp < mon.max_hp:
        _heal(state, side, max(1, int(mon.max_hp * heal)), events)
    if fx.get("rest") and mon.current_hp < mon.max_hp:
        mon.status = "slp"
        mon.sleep_turns_left = 2
        mon.sleep_counter = 0
        mon.slept_by_foe = False
        mon.toxic_counter = 0
        events.append(SetStatus(pokemon=_ref(side), status="slp"))
        _heal(state, side, mon.max_hp - mon.current_hp, events)
    screen = fx.get("screen")
    if screen and screen not in side.conditions:
        side.conditions[screen] = {"turns": cfg.screen_turns, "layers": 1}
        events.append(SideCondition(side=side.side, side_label=side.player_name,
                                    condition=_CONDITION_NAMES[screen]))
    hazard = fx.get("hazard")
    if hazard and cfg.spikes_max_layers > 0:
        existing = opp.conditions.get(hazard)
        if existing is None or existing["layers"] < cfg.spikes_max_layers:
            if existing is None:
                opp.conditions[hazard] = {"turns": -1, "layers": 1}
            else:
                existing["layers"] += 1
            events.append(SideCondition(side=opp.side, side_label=opp.player_name,
                                        condition=_CONDITION_NAMES[hazard]))
    if fx.get("clear_hazards_self") and "spikes" in side.conditions:
        del side.conditions["spikes"]
        events.append(SideCondition(side=side.side, side_label=side.player_name,
                                    condition=_CONDITION_NAMES["spikes"], ended=True))
    weather = fx.get("weather")
    if weather and cfg.weather_enabled and state.weather != weather:
        state.weather = weather
        state.weather_turns = cfg.weather_turns
        events.append(Weather(condition=_WEATHER_NAMES[weather]))


def _sleep_clause_blocks(state: BattleState, attacker_sid: str) -> bool:
    opp = state.opponent(attacker_sid)
    return any(p.status == "slp" and p.slept_by_foe and not p.fainted
               for p in opp.team)


def _try_status(state: BattleState, attacker_sid: str, target_side: SideState,
                code: str, events, check_immunity_vs=None) -> bool:
    target = target_side.active
    cfg = state.data.config
    if target is None or target.fainted or target.status != NO_STATUS:
        return False
    types = target.spec.types
    if code in ("psn", "tox") and ("poison" in types or "steel" in types):
        return False
    if code == "brn" and "fire" in types:
        return False
    if code == "frz" and "ice" in types:
        return False
    if check_immunity_vs is not None and \
            type_effectiveness(check_immunity_vs, target, state.data) == 0:
        return False
    target.status = code
    if code == "slp":
        target.sleep_turns_left = state.rng.randint(*cfg.sleep_turns)
        target.sleep_counter = 0
        target.slept_by_foe = True
    elif code == "tox":
        target.toxic_counter = 0
    events.append(SetStatus(pokemon=_ref(target_side), status=code))
    if cfg.items and target.item in CONSUMABLE_ITEMS:
        item_name = "Lum Berry" if target.item == "lumberry" else "Miracle Berry"
        events.append(Item(pokemon=_ref(target_side), item=item_name))
        target.item_revealed = True
        target.item = None
        events.append(CureStatus(pokemon=_ref(target_side), status=code))
        target.status = NO_STATUS
        target.sleep_turns_left = 0
        target.slept_by_foe = False
    return True


def _apply_boosts(state: BattleState, side: SideState, stats: dict, events) -> None:
    from ..protocol import Boost, Unboost
    mon = side.active
    if mon is None or mon.fainted:
        return
    for stat, delta in stats.items():
        before = mon.boosts[stat]
        after = max(-6, min(6, before + delta))
        actual = after - before
        if actual == 0:
            continue
        mon.boosts[stat] = after
        if actual > 0:
            events.append(Boost(pokemon=_ref(side), stat=stat, amount=actual))
        else:
            events.append(Unboost(pokemon=_ref(side), stat=stat, amount=-actual))


def _apply_damage(state: BattleState, side: SideState, amount: int, events,
                  from_source: Optional[str] = None) -> None:
    mon = side.active
    amount = min(amount, mon.current_hp)
    if amount <= 0:
        return
    mon.current_hp -= amount
    events.append(Damage(pokemon=_ref(side), hp=_hp_status(mon),
                         from_source=from_source))


def _heal(state: BattleState, side: SideState, amount: int, events,
          from_source: Optional[str] = None) -> None:
    mon = side.active
    amount = min(amount, mon.max_hp - mon.current_hp)
    if amount <= 0:
        return
    mon.current_hp += amount
    events.append(Heal(pokemon=_ref(side), hp=_hp_status(mon),
                       from_source=from_source))


def _register_faint(state: BattleState, side_id: str, events) -> bool:
    """Emit the faint and clear the fallen pokemon; outcome settles later."""
    side = state.side(side_id)
    mon = side.active
    if mon is None or not mon.fainted:
        return False
    mon.status = NO_STATUS
    mon.volatiles = {}
    mon.sleep_turns_left = 0
    mon.slept_by_foe = False
    events.append(Faint(pokemon=_ref(side)))
    return True


def _settle_outcome(state: BattleState, events, loser_priority=None) -> None:
    """Declare a winner or set pending replacements after faints.

    ``loser_priority`` breaks simultaneous all-out ties (the user of a
    self-damaging move loses them).
    """
    if not state.ongoing:
        return
    out = [s for s in state.sides if all(p.fainted for p in s.team)]
    if out:
        if len(out) == 2 and loser_priority is not None:
            loser_side = loser_priority
        else:
            loser_side = out[0].side
        winner = state.opponent(loser_side)
        state.outcome = ("win", winner.side)
        events.append(Win(winner=winner.player_name))
        return
    for side in state.sides:
        if side.active is not None and side.active.fainted:
            side.pending_replace = True


def _check_faint(state: BattleState, side_id: str, events) -> bool:
    fainted = _register_faint(state, side_id, events)
    if fainted:
        _settle_outcome(state, events, loser_priority=side_id)
    return fainted


def _end_of_turn(state: BattleState, events) -> None:
    data = state.data
    cfg = data.config
    if state.weather != "none":
        expired = False
        if state.weather_turns > 0:
            state.weather_turns -= 1
            if state.weather_turns == 0:
                expired = True
        if expired:
            state.weather = "none"
            events.append(Weather(condition="none"))
        else:
            events.append(Weather(condition=_WEATHER_NAMES[state.weather],
                                  upkeep=True))
            if state.weather == "sandstorm":
                for side in state.sides:
                    mon = side.active
                    if mon is None or mon.fainted:
                        continue
                    if any(t in SAND_IMMUNE_TYPES for t in mon.spec.types):
                        continue
                    _apply_damage(state, side, max(1, mon.max_hp // 16), events,
                                  from_source="Sandstorm")
                    _check_faint(state, side.side, events)
                    if not state.ongoing:
                        return
    for side in state.sides:
        mon = side.active
        if mon is None or mon.fainted:
            continue
        if cfg.items and mon.item == "leftovers" and mon.current_hp < mon.max_hp:
            _heal(state, side, max(1, int(mon.max_hp * cfg.leftovers_fraction)),
                  events, from_source="item: Leftovers")
            mon.item_revealed = True
    for side in state.sides:
        mon = side.active
        if mon is None or mon.fainted:
            continue
        if mon.status == "brn":
            _apply_damage(state, side, max(1, int(mon.max_hp * cfg.burn_fraction)),
                          events, from_source="brn")
        elif mon.status == "psn":
            _apply_damage(state, side, max(1, int(mon.max_hp * cfg.poison_fraction)),
                          events, from_source="psn")
        elif mon.status == "tox":
            mon.toxic_counter += 1
            _apply_damage(state, side,
                          max(1, int(mon.max_hp * cfg.toxic_fraction * mon.toxic_counter)),
                          events, from_source="psn")
        _check_faint(state, side.side, events)
        if not state.ongoing:
            return
    for side in state.sides:
        for name in list(side.conditions):
            cond = side.conditions[name]
            if cond["turns"] > 0:
                cond["turns"] -= 1
                if cond["turns"] == 0:
                    del side.conditions[name]
                    events.append(SideCondition(side=side.side,
                                                side_label=side.player_name,
                                                condition=_CONDITION_NAMES[name],
                                                ended=True))
        mon = side.active
        if mon is not None:
            mon.volatiles.pop("flinch", None)
