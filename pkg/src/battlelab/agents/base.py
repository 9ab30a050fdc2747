"""Agent interface and the POV projection that keeps agents honest.

Agents receive a projected battle state in which every unrevealed
opponent attribute has been stripped, so they cannot cheat by reading
hidden information. They are stateless between turns: the same
(state, legal set, rng draw) always yields the same choice.
"""

from __future__ import annotations

from typing import Optional

from ..engine import (
    ActionChoice, BattleState, STRUGGLE, damage_calc, resolve_choice,
)


class Agent:
    name = "agent"
    deterministic = False

    def choose_action(self, state: BattleState, side: str,
                      legal: list[ActionChoice], rng) -> ActionChoice:
        raise NotImplementedError


def pov_projection(state: BattleState, side_id: str) -> BattleState:
    """A copy of the state containing only what this side may know.

    The opponent's roster keeps only revealed members, each trimmed to its
    revealed moves/item/ability; exact stat spreads are hidden (consumers
    fall back to the species' default spread).
    """
    clone = state.clone()
    opp = clone.opponent(side_id)
    active_mon = opp.active
    visible = []
    active_index: Optional[int] = None
    for mon in opp.team:
        if not mon.species_revealed:
            continue
        mon.spec.moves = sorted(mon.revealed_moves)
        mon.pp = {m: mon.pp.get(m, 0) for m in mon.revealed_moves}
        if not mon.item_revealed:
            mon.spec.item = None
            mon.item = None
        if not mon.ability_revealed:
            mon.spec.ability = None
        mon.spec.stats = None
        mon.sleep_turns_left = 0
        if mon is active_mon:
            active_index = len(visible)
        visible.append(mon)
    opp.team = visible
    opp.active_index = active_index
    clone.rng = None
    return clone


def split_legal(state: BattleState, side: str, legal: list[ActionChoice]):
    """Partition legal actions into (move actions with meanings, switches)."""
    moves = []
    switches = []
    for choice in legal:
        if choice.is_move:
            kind, payload = resolve_choice(state, side, choice)
            move = STRUGGLE if kind == "struggle" else state.data.get_move(payload)
            moves.append((choice, move))
        else:
            kind, team_index = resolve_choice(state, side, choice)
            switches.append((choice, state.side(side).team[team_index]))
    return moves, switches


def expected_damage(state: BattleState, side: str, move) -> float:
    """Expected damage fraction of a move against the visible opposing active."""
    if not move.is_damaging:
        return 0.0
    attacker = state.side(side).active
    defender = state.opponent(side).active
    if attacker is None or defender is None or defender.fainted:
        return 0.0
    opp_side = state.opponent(side)
    screens = frozenset(s for s in ("reflect", "lightscreen")
                        if s in opp_side.conditions)
    return damage_calc(attacker, defender, move, state.data, "expected",
                       weather=state.weather, defender_screens=screens)


def incoming_damage_estimate(state: BattleState, side: str,
                             default: float = 0.3) -> float:
    """Worst expected damage fraction the opponent's active can deal to ours,
    over its revealed moves; ``default`` when nothing damaging is revealed."""
    opp = state.opponent(side).active
    mon = state.side(side).active
    if opp is None or opp.fainted or mon is None:
        return 0.0
    best = None
    for mid in opp.spec.moves:
        move = state.data.moves.get(mid)
        if move is None or not move.is_damaging:
            continue
        dmg = damage_calc(opp, mon, move, state.data, "expected",
                          weather=state.weather)
        best = dmg if best is None else max(best, dmg)
    return default if best is None else best


def matchup_score(state: BattleState, mon_types, opp_types) -> float:
    """Offensive minus defensive best-case type multiplier."""
    data = state.data
    if not mon_types or not opp_types:
        return 0.0
    offense = max(data.effectiveness(t, tuple(opp_types)) for t in mon_types)
    defense = max(data.effectiveness(t, tuple(mon_types)) for t in opp_types)
    return offense - defense


def classify_move(move) -> str:
    """damage | boost | heal | status (coarse classes used by heuristics)."""
    if move.is_damaging:
        return "damage"
    fx = move.effects
    boost = fx.get("boost_self")
    if boost and boost.get("chance", 0) >= 1.0 and \
            any(v > 0 for v in boost["stats"].values()):
        return "boost"
    if fx.get("heal_self") or fx.get("rest"):
        return "heal"
    return "status"
