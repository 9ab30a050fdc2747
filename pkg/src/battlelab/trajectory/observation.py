"""Fixed-layout observation encoding: 87 token slots and 48 numerics.

The slot maps below are the canonical layout, frozen in
``docs/observation.md`` and version-gated by the dataset schema. Opponent
bench attributes never appear: only the opponent's active (and whatever
it has publicly revealed) is encoded, so the policy must rely on memory
for the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import (
    BattleState, NO_STATUS, PokemonState, bench_order, boost_multiplier,
    move_slot_order, to_id,
)
from ..engine.damage import effective_stats
from ..protocol import (
    Ability, Boost, Cant, CureStatus, Damage, Drag, Faint, Heal, Item, Move,
    SetStatus, SideCondition, Switch, Unboost, VolatileEnd, VolatileStart,
    Weather,
)
from .vocab import PAD, Vocabulary

TOKEN_SLOTS = 87
NUMERIC_SLOTS = 48
ACTIONS = 9
MASKED = -1

BOOST_ORDER = ("atk", "def", "spa", "spd", "spe", "accuracy", "evasion")
STAT_ORDER = ("atk", "def", "spa", "spd", "spe")
STAT_SCALE = 1000.0
SLEEP_SCALE = 8.0
TOXIC_SCALE = 16.0
SUMMARY_SLOTS = 12


@dataclass
class Observation:
    tokens: list[int]
    numeric: list[float]
    illegal_mask: list[bool]  # True = action index is illegal


@dataclass
class RawObservation:
    """Pre-vocabulary observation with token strings."""

    tokens: list[str]
    numeric: list[float]
    illegal_mask: list[bool]

    def encode(self, vocab: Vocabulary) -> Observation:
        return Observation(tokens=[vocab.to_id(t) for t in self.tokens],
                           numeric=list(self.numeric),
                           illegal_mask=list(self.illegal_mask))


def _status_token(mon: PokemonState) -> str:
    return mon.status if mon.status != NO_STATUS else PAD


def _battle_stats(mon: PokemonState, state: BattleState) -> dict[str, int]:
    base = effective_stats(mon, state.data)
    out = {}
    for key in STAT_ORDER:
        value = max(1, boost_multiplier(base[key], mon.boosts[key]))
        if key == "atk" and mon.status == "brn":
            value = max(1, value // 2)
        elif key == "spe" and mon.status == "par":
            value = max(1, int(value * state.data.config.paralysis_speed_multiplier))
        out[key] = value
    return out


def summarize_events(events, pov_side: str) -> list[str]:
    """Compact tokens for what happened since the previous decision."""
    tokens: list[str] = []
    for ev in events:
        tok = None
        if isinstance(ev, Move):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/move/{to_id(ev.move)}"
        elif isinstance(ev, (Switch, Drag)):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/switch/{to_id(ev.species)}"
        elif isinstance(ev, Damage):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/damage"
        elif isinstance(ev, Heal):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/heal"
        elif isinstance(ev, SetStatus):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/status/{ev.status}"
        elif isinstance(ev, CureStatus):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/cure/{ev.status}"
        elif isinstance(ev, Boost):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/boost/{ev.stat}"
        elif isinstance(ev, Unboost):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/unboost/{ev.stat}"
        elif isinstance(ev, Faint):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/faint"
        elif isinstance(ev, Cant):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/cant/{ev.reason}"
        elif isinstance(ev, Weather):
            if not ev.upkeep:
                cond = "none" if ev.condition == "none" else to_id(ev.condition)
                tok = f"last/weather/{cond}"
        elif isinstance(ev, SideCondition):
            side = "own" if ev.side == pov_side else "opp"
            suffix = "/end" if ev.ended else ""
            tok = f"last/{side}/side/{to_id(ev.condition)}{suffix}"
        elif isinstance(ev, VolatileStart):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/volatile/{to_id(ev.condition)}"
        elif isinstance(ev, VolatileEnd):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/volatile/{to_id(ev.condition)}/end"
        elif isinstance(ev, Item):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/item/{to_id(ev.item)}"
        elif isinstance(ev, Ability):
            side = "own" if ev.pokemon.side == pov_side else "opp"
            tok = f"last/{side}/ability/{to_id(ev.ability)}"
        if tok is not None:
            tokens.append(tok)
            if len(tokens) == SUMMARY_SLOTS:
                break
    return tokens


def _own_move_slots(mon: PokemonState) -> list[str]:
    return move_slot_order(mon.spec.moves)[:4]


def legal_mask(state: BattleState, pov_side: str) -> list[bool]:
    """True entries are illegal for the POV side at this decision point.

    Uses tracked PP where known; moves never seen keep full PP.
    """
    mask = [True] * ACTIONS
    side = state.side(pov_side)
    mon = side.active
    forced = state.phase == "forceswitch"
    if mon is not None and not mon.fainted and not forced:
        slots = _own_move_slots(mon)
        usable = []
        for i, mid in enumerate(slots):
            pp_max = state.data.moves[mid].pp if mid in state.data.moves else 1
            if mon.pp.get(mid, pp_max) > 0:
                usable.append(i)
        if usable:
            for i in usable:
                mask[i] = False
        else:
            mask[0] = False  # struggle
    for k, ti in enumerate(bench_order(side)[:5]):
        if not side.team[ti].fainted:
            mask[4 + k] = False
    return mask


def build_observation(state: BattleState, pov_side: str, vocab: Vocabulary,
                      summary: list[str] = (), mask: list[bool] = None) -> Observation:
    """Encode the POV view of a battle state.

    The POV side is read in full (callers backfill it first); the opponent
    side is read through its reveal flags. Total and deterministic over
    valid states.
    """
    raw = build_raw_observation(state, pov_side, summary=summary, mask=mask)
    return raw.encode(vocab)


def build_raw_observation(state: BattleState, pov_side: str,
                          summary: list[str] = (),
                          mask: list[bool] = None) -> RawObservation:
    own = state.side(pov_side)
    opp = state.opponent(pov_side)
    own_active = own.active
    opp_active = opp.active
    data = state.data

    tokens: list[str] = [PAD] * TOKEN_SLOTS
    numeric: list[float] = [0.0] * NUMERIC_SLOTS

    tokens[0] = state.format_id
    tokens[1] = state.phase

    own_bench = bench_order(own)[:5]
    if own_active is not None:
        spec = own_active.spec
        types = spec.types
        tokens[2] = spec.species
        tokens[3] = _status_token(own_active)
        tokens[4] = types[0] if types else PAD
        tokens[5] = types[1] if len(types) > 1 else PAD
        tokens[6] = own_active.last_move or PAD
        slots = _own_move_slots(own_active)
        for i, mid in enumerate(slots):
            tokens[7 + i] = mid
            move = data.moves.get(mid)
            if move is not None:
                numeric[18 + i] = move.power / 100.0
                numeric[22 + i] = (move.accuracy or 100) / 100.0
        tokens[41] = spec.item or PAD
        tokens[42] = spec.ability or PAD
        numeric[0] = own_active.hp_fraction
        numeric[1] = spec.level / 100.0
        for i, key in enumerate(BOOST_ORDER):
            numeric[2 + i] = own_active.boosts[key] / 6.0
        stats = _battle_stats(own_active, state)
        for i, key in enumerate(STAT_ORDER):
            numeric[31 + i] = stats[key] / STAT_SCALE
        numeric[40] = min(own_active.sleep_counter, SLEEP_SCALE) / SLEEP_SCALE
        numeric[42] = min(own_active.toxic_counter, TOXIC_SCALE) / TOXIC_SCALE
        numeric[44] = 1.0 if "confusion" in own_active.volatiles else 0.0
        numeric[46] = 1.0 if "trapped" in own_active.volatiles else 0.0

    for k, ti in enumerate(own_bench):
        mon = own.team[ti]
        tokens[11 + 2 * k] = mon.spec.species
        tokens[12 + 2 * k] = _status_token(mon)
        for j, mid in enumerate(_own_move_slots(mon)):
            tokens[21 + 4 * k + j] = mid
        tokens[43 + 2 * k] = mon.spec.item or PAD
        tokens[44 + 2 * k] = mon.spec.ability or PAD
        numeric[26 + k] = mon.hp_fraction

    if opp_active is not None and opp_active.species_revealed:
        spec = opp_active.spec
        types = spec.types
        tokens[53] = spec.species
        tokens[54] = _status_token(opp_active)
        tokens[55] = types[0] if types else PAD
        tokens[56] = types[1] if len(types) > 1 else PAD
        tokens[57] = opp_active.last_move or PAD
        if opp_active.item_revealed and opp_active.item:
            tokens[58] = opp_active.item
        if opp_active.ability_revealed and spec.ability:
            tokens[59] = spec.ability
        numeric[9] = opp_active.hp_fraction
        numeric[10] = spec.level / 100.0
        for i, key in enumerate(BOOST_ORDER):
            numeric[11 + i] = opp_active.boosts[key] / 6.0
        numeric[41] = min(opp_active.sleep_counter, SLEEP_SCALE) / SLEEP_SCALE
        numeric[43] = min(opp_active.toxic_counter, TOXIC_SCALE) / TOXIC_SCALE
        numeric[45] = 1.0 if "confusion" in opp_active.volatiles else 0.0
        numeric[47] = 1.0 if "trapped" in opp_active.volatiles else 0.0

    if state.weather != "none":
        tokens[60] = state.weather
    for base, side_state in ((61, own), (64, opp)):
        for i, cond in enumerate(sorted(side_state.conditions)[:3]):
            tokens[base + i] = cond
    for base, mon in ((67, own_active), (70, opp_active)):
        if mon is None:
            continue
        vols = sorted(v for v in mon.volatiles if v != "flinch")[:3]
        for i, v in enumerate(vols):
            tokens[base + i] = v

    for i, tok in enumerate(list(summary)[:SUMMARY_SLOTS]):
        tokens[73 + i] = tok

    own_remaining = sum(1 for p in own.team if not p.fainted) + \
        max(0, own.team_size - len(own.team))
    opp_revealed = sum(1 for p in opp.team if p.species_revealed)
    opp_remaining = sum(1 for p in opp.team if not p.fainted) + \
        max(0, opp.team_size - len(opp.team))
    numeric[36] = own_remaining / 6.0
    numeric[37] = opp_revealed / 6.0
    numeric[38] = opp_remaining / 6.0
    numeric[39] = min(state.turn, 1000) / 100.0

    if mask is None:
        mask = legal_mask(state, pov_side)
    return RawObservation(tokens=tokens, numeric=numeric, illegal_mask=list(mask))
