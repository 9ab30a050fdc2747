"""Versioned species/move/type tables and per-generation mechanics configs.

All tables ship as JSON under ``battlelab/gamedata`` and are immutable
after load. Unknown names are hard errors here (the lenient layer is the
protocol parser, not the engine). The implemented mechanics boundary is
documented in ``docs/mechanics.md``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional


class UnknownSpecies(KeyError):
    pass


class UnknownMove(KeyError):
    pass


def to_id(name: str) -> str:
    """Normalize a display name to a table id (``Body Slam`` -> ``bodyslam``)."""
    return re.sub(r"[^a-z0-9]", "", name.lower())


@dataclass(frozen=True)
class MoveData:
    id: str
    name: str
    type: str
    category: str  # physical | special | status
    power: int
    accuracy: Optional[int]  # None never misses
    pp: int
    priority: int
    effects: dict

    @property
    def is_damaging(self) -> bool:
        return self.category != "status"


@dataclass(frozen=True)
class SpeciesData:
    id: str
    name: str
    types: tuple[str, ...]
    base_stats: dict  # hp/atk/def/spa/spd/spe
    abilities: tuple[str, ...] = ()


@dataclass(frozen=True)
class GenConfig:
    generation: int
    special_merged: bool
    items: bool
    abilities: bool
    damage_roll: tuple[int, int, int]  # lo, hi, denominator
    crit_mode: str  # "speed" | "fixed"
    crit_rate: float  # fixed mode base rate
    high_crit_factor: int
    burn_fraction: float
    poison_fraction: float
    toxic_fraction: float
    sleep_turns: tuple[int, int]
    freeze_thaw_chance: float
    paralysis_full_chance: float
    paralysis_speed_multiplier: float
    confusion_self_hit_chance: float
    confusion_turns: tuple[int, int]
    spikes_max_layers: int
    spikes_fractions: tuple[float, ...]
    weather_enabled: bool
    screen_turns: int
    weather_turns: int
    leftovers_fraction: float
    struggle_recoil_fraction: float
    max_turns: int


_STAGE_NUM = (2, 3, 4, 5, 6, 7, 8)


def boost_multiplier(stat_value: int, stage: int) -> int:
    """Apply a -6..+6 stat stage with the in-game numerator/denominator table."""
    if stage >= 0:
        return stat_value * _STAGE_NUM[stage] // 2
    return stat_value * 2 // _STAGE_NUM[-stage]


def accuracy_multiplier(stage: int) -> float:
    if stage >= 0:
        return (3 + stage) / 3
    return 3 / (3 - stage)


class GenData:
    """All tables for one generation, bound together."""

    def __init__(self, config: GenConfig, species: dict[str, SpeciesData],
                 moves: dict[str, MoveData], chart: dict[str, dict[str, float]],
                 version: str):
        self.config = config
        self.species = species
        self.moves = moves
        self.chart = chart
        self.version = version

    def get_species(self, species_id: str) -> SpeciesData:
        try:
            return self.species[species_id]
        except KeyError:
            raise UnknownSpecies(species_id) from None

    def get_move(self, move_id: str) -> MoveData:
        try:
            return self.moves[move_id]
        except KeyError:
            raise UnknownMove(move_id) from None

    def effectiveness(self, move_type: str, defender_types: tuple[str, ...]) -> float:
        row = self.chart.get(move_type)
        if row is None:
            return 1.0  # typeless (struggle, confusion self-hit)
        mult = 1.0
        for t in defender_types:
            mult *= row.get(t, 1.0)
        return mult

    def compute_stats(self, species: SpeciesData, level: int) -> dict[str, int]:
        """Default battle-ready stat spread, per generation formula."""
        base = species.base_stats
        out = {}
        if self.config.generation <= 2:
            for key, b in base.items():
                core = ((b + 15) * 2 + 63) * level // 100
                out[key] = core + level + 10 if key == "hp" else core + 5
        else:
            for key, b in base.items():
                core = (2 * b + 31 + 21) * level // 100
                out[key] = core + level + 10 if key == "hp" else core + 5
        return out


def _load_json(filename: str) -> dict:
    path = resources.files("battlelab.gamedata").joinpath(filename)
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def get_gen(generation: int) -> GenData:
    if not 1 <= generation <= 4:
        raise ValueError(f"unsupported generation {generation}")
    raw = _load_json(f"gen{generation}.json")
    cfg_raw = raw["config"]
    config = GenConfig(
        generation=generation,
        special_merged=cfg_raw["special_merged"],
        items=cfg_raw["items"],
        abilities=cfg_raw["abilities"],
        damage_roll=tuple(cfg_raw["damage_roll"]),
        crit_mode=cfg_raw["crit_mode"],
        crit_rate=cfg_raw["crit_rate"],
        high_crit_factor=cfg_raw["high_crit_factor"],
        burn_fraction=cfg_raw["burn_fraction"],
        poison_fraction=cfg_raw["poison_fraction"],
        toxic_fraction=cfg_raw["toxic_fraction"],
        sleep_turns=tuple(cfg_raw["sleep_turns"]),
        freeze_thaw_chance=cfg_raw["freeze_thaw_chance"],
        paralysis_full_chance=cfg_raw["paralysis_full_chance"],
        paralysis_speed_multiplier=cfg_raw["paralysis_speed_multiplier"],
        confusion_self_hit_chance=cfg_raw["confusion_self_hit_chance"],
        confusion_turns=tuple(cfg_raw["confusion_turns"]),
        spikes_max_layers=cfg_raw["spikes_max_layers"],
        spikes_fractions=tuple(cfg_raw["spikes_fractions"]),
        weather_enabled=cfg_raw["weather_enabled"],
        screen_turns=cfg_raw["screen_turns"],
        weather_turns=cfg_raw["weather_turns"],
        leftovers_fraction=cfg_raw["leftovers_fraction"],
        struggle_recoil_fraction=cfg_raw["struggle_recoil_fraction"],
        max_turns=cfg_raw["max_turns"],
    )
    chart = _load_json(raw["typechart"] + ".json")["chart"]
    species = {
        sid: SpeciesData(id=sid, name=s["name"], types=tuple(s["types"]),
                         base_stats=s["stats"],
                         abilities=tuple(s.get("abilities", ())))
        for sid, s in raw["species"].items()
    }
    moves = {
        mid: MoveData(id=mid, name=m["name"], type=m["type"], category=m["category"],
                      power=m.get("power", 0), accuracy=m.get("accuracy"),
                      pp=m["pp"], priority=m.get("priority", 0),
                      effects=m.get("effects", {}))
        for mid, m in raw["moves"].items()
    }
    return GenData(config=config, species=species, moves=moves, chart=chart,
                   version=raw["version"])


_FORMAT_RE = re.compile(r"^gen([1-4])([a-z]+)$")


def parse_format(format_id: str) -> tuple[int, str]:
    """Split ``gen1ou`` into (1, ``ou``)."""
    m = _FORMAT_RE.match(format_id)
    if not m:
        raise ValueError(f"unsupported format {format_id!r}")
    return int(m.group(1)), m.group(2)


@lru_cache(maxsize=None)
def tier_pool(format_id: str) -> tuple[str, ...]:
    """Species legal in a format, from the bundled tier table."""
    gen, _ = parse_format(format_id)
    tiers = _load_json("tiers.json")
    try:
        return tuple(tiers["formats"][format_id])
    except KeyError:
        raise ValueError(f"no tier table for format {format_id!r}") from None


def get_gen_for_format(format_id: str) -> GenData:
    gen, _ = parse_format(format_id)
    return get_gen(gen)


def data_versions() -> dict[str, str]:
    """Table versions for run manifests."""
    out = {}
    for g in range(1, 5):
        out[f"gen{g}"] = get_gen(g).version
    out["tiers"] = _load_json("tiers.json")["version"]
    return out
