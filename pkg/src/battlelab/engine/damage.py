"""Damage pipeline: base formula, stat stages, modifiers, random roll.

Integer arithmetic mirrors the cartridge pipeline (floor at every stage);
the roll denominator and range come from the generation config. Critical
hits double damage and ignore stat stages and screens.
"""

from __future__ import annotations

from .gamedata import GenData, MoveData, boost_multiplier
from .state import PokemonState

STRUGGLE = MoveData(id="struggle", name="Struggle", type="typeless",
                    category="physical", power=50, accuracy=None, pp=0,
                    priority=0, effects={"struggle": True})

CONFUSION_HIT = MoveData(id="confusionhit", name="confusion", type="typeless",
                         category="physical", power=40, accuracy=None, pp=0,
                         priority=0, effects={})


def effective_stats(mon: PokemonState, data: GenData) -> dict[str, int]:
    """Current stats after explicit spread (or the default), ignoring stages."""
    if mon.spec.stats:
        return mon.spec.stats
    species = data.get_species(mon.spec.species)
    return data.compute_stats(species, mon.spec.level)


def staged_stat(mon: PokemonState, key: str, data: GenData) -> int:
    value = boost_multiplier(effective_stats(mon, data)[key], mon.boosts[key])
    return max(1, value)


def effective_speed(mon: PokemonState, data: GenData) -> int:
    speed = staged_stat(mon, "spe", data)
    if mon.status == "par":
        speed = int(speed * data.config.paralysis_speed_multiplier)
    return max(1, speed)


def _attack_defense(attacker: PokemonState, defender: PokemonState,
                    move: MoveData, data: GenData, crit: bool) -> tuple[int, int]:
    atk_key, def_key = ("atk", "def") if move.category == "physical" else ("spa", "spd")
    if crit:
        atk = effective_stats(attacker, data)[atk_key]
        dfn = effective_stats(defender, data)[def_key]
    else:
        atk = staged_stat(attacker, atk_key, data)
        dfn = staged_stat(defender, def_key, data)
    if move.category == "physical" and attacker.status == "brn":
        atk = max(1, atk // 2)
    if move.effects.get("halve_def"):
        dfn = max(1, dfn // 2)
    if (defender.spec.ability == "thickfat" and data.config.abilities
            and move.type in ("fire", "ice")):
        atk = max(1, atk // 2)
    return max(1, atk), max(1, dfn)


def type_effectiveness(move: MoveData, defender: PokemonState, data: GenData) -> float:
    types = defender.spec.types or data.get_species(defender.spec.species).types
    if data.config.abilities and defender.spec.ability == "levitate" \
            and move.type == "ground":
        return 0.0
    return data.effectiveness(move.type, types)


def _pre_roll_damage(attacker: PokemonState, defender: PokemonState,
                     move: MoveData, data: GenData, crit: bool,
                     weather: str, defender_screens: frozenset) -> int:
    fixed = move.effects.get("fixed_damage")
    if fixed is not None:
        return attacker.spec.level if fixed == "level" else int(fixed)
    atk, dfn = _attack_defense(attacker, defender, move, data, crit)
    level = attacker.spec.level
    base = ((2 * level // 5 + 2) * move.power * atk // dfn) // 50
    base = min(base, 997) + 2
    if crit:
        base *= 2
    elif defender_screens:
        screen = "reflect" if move.category == "physical" else "lightscreen"
        if screen in defender_screens:
            base = base // 2
    if weather != "none" and data.config.weather_enabled:
        if (weather == "raindance" and move.type == "water") or \
                (weather == "sunnyday" and move.type == "fire"):
            base = base * 3 // 2
        elif (weather == "raindance" and move.type == "fire") or \
                (weather == "sunnyday" and move.type == "water"):
            base = base // 2
    attacker_types = attacker.spec.types or data.get_species(attacker.spec.species).types
    if move.type in attacker_types:
        base = base * 3 // 2
    eff = type_effectiveness(move, defender, data)
    if eff == 0:
        return 0
    base = int(base * eff)
    return max(base, 1)


def rolled_damage(attacker: PokemonState, defender: PokemonState, move: MoveData,
                  data: GenData, roll: int, crit: bool = False,
                  weather: str = "none", defender_screens: frozenset = frozenset()) -> int:
    """Integer damage for one specific random roll value."""
    base = _pre_roll_damage(attacker, defender, move, data, crit, weather,
                            defender_screens)
    if base == 0:
        return 0
    if move.effects.get("fixed_damage") is not None:
        return base
    lo, hi, den = data.config.damage_roll
    roll = min(max(roll, lo), hi)
    return max(1, base * roll // den)


def damage_calc(attacker: PokemonState, defender: PokemonState, move: MoveData,
                data: GenData, rng_mode: str = "expected", rng=None,
                weather: str = "none",
                defender_screens: frozenset = frozenset()) -> float:
    """Damage as a fraction of the defender's max HP.

    ``rng_mode`` selects the random roll: ``min``, ``max``, ``sampled``
    (requires ``rng``), or ``expected`` (mean roll, no final floor).
    Critical hits are not included here; the simulator rolls them
    separately.
    """
    if not move.is_damaging:
        raise ValueError(f"{move.id} is not a damaging move")
    lo, hi, den = data.config.damage_roll
    if rng_mode == "min":
        dmg = rolled_damage(attacker, defender, move, data, lo,
                            weather=weather, defender_screens=defender_screens)
    elif rng_mode == "max":
        dmg = rolled_damage(attacker, defender, move, data, hi,
                            weather=weather, defender_screens=defender_screens)
    elif rng_mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        dmg = rolled_damage(attacker, defender, move, data, rng.randint(lo, hi),
                            weather=weather, defender_screens=defender_screens)
    elif rng_mode == "expected":
        base = _pre_roll_damage(attacker, defender, move, data, False, weather,
                                defender_screens)
        if move.effects.get("fixed_damage") is not None:
            dmg = base
        else:
            dmg = base * ((lo + hi) / 2) / den
    else:
        raise ValueError(f"unknown rng_mode {rng_mode!r}")
    max_hp = defender.max_hp if defender.max_hp else 1
    return dmg / max_hp
