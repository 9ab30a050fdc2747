"""Complete a partially revealed team from usage statistics.

Runs at battle end: every attribute still unknown is filled either with
the highest-frequency compatible value (``argmax``, the default) or with a
seeded draw from the frequency tables (``sample``). Revealed attributes
are always kept verbatim.
"""

from __future__ import annotations

import random
from typing import Optional

from ..engine import GenData, PokemonSpec
from .partial import PartialTeam, SlotKnowledge
from .usage import FormatStats


class SetLibrary:
    """Optional second prior: move frequencies harvested from fully revealed
    reconstructions, merged with usage statistics by a fixed weight."""

    def __init__(self):
        self._move_counts: dict[str, dict[str, int]] = {}

    def add_team(self, team: list[PokemonSpec]) -> None:
        for spec in team:
            counts = self._move_counts.setdefault(spec.species, {})
            for move in spec.moves:
                counts[move] = counts.get(move, 0) + 1

    def move_freqs(self, species: str) -> Optional[dict[str, float]]:
        counts = self._move_counts.get(species)
        if not counts:
            return None
        total = sum(counts.values())
        return {m: c / total for m, c in counts.items()}


def _argmax(table: dict[str, float], exclude=()) -> Optional[str]:
    best = None
    for key, freq in table.items():
        if key in exclude:
            continue
        if best is None or freq > best[0] or (freq == best[0] and key < best[1]):
            best = (freq, key)
    return best[1] if best else None


def _sample(table: dict[str, float], rng: random.Random, exclude=()) -> Optional[str]:
    items = [(k, f) for k, f in table.items() if k not in exclude and f > 0]
    if not items:
        return None
    total = sum(f for _, f in items)
    roll = rng.random() * total
    acc = 0.0
    for key, freq in sorted(items):
        acc += freq
        if roll < acc:
            return key
    return items[-1][0]


def _merged_moves(species: str, stats: FormatStats,
                  set_library: Optional[SetLibrary],
                  merge_weight: float) -> Optional[dict[str, float]]:
    usage = stats.move_table(species)
    harvested = set_library.move_freqs(species) if set_library else None
    if usage is None and harvested is None:
        return None
    if harvested is None:
        return usage
    if usage is None:
        return harvested
    merged = {}
    for move in set(usage) | set(harvested):
        merged[move] = ((1 - merge_weight) * usage.get(move, 0.0)
                        + merge_weight * harvested.get(move, 0.0))
    return merged


def _pick(table, mode, rng, exclude=()):
    if mode == "argmax":
        return _argmax(table, exclude)
    return _sample(table, rng, exclude)


def _fill_moves(slot_moves: list[str], species: str, stats: FormatStats,
                data: GenData, mode: str, rng, set_library, merge_weight) -> list[str]:
    moves = list(slot_moves)
    table = _merged_moves(species, stats, set_library, merge_weight)
    if table is None:
        table = stats.format_wide_moves()  # no per-species stats: format prior
    candidates = {m: f for m, f in table.items()
                  if m not in moves and m in data.moves}
    while len(moves) < 4 and candidates:
        choice = _pick(candidates, mode, rng)
        if choice is None:
            break
        moves.append(choice)
        del candidates[choice]
    return moves


def _fill_species(revealed: list[str], stats: FormatStats, mode: str, rng) -> Optional[str]:
    candidates = set(stats.species_usage) - set(revealed)
    for mates in stats.teammates.values():
        candidates.update(set(mates) - set(revealed))
    if not candidates:
        return None
    scores: dict[str, float] = {}
    for cand in candidates:
        score = sum(stats.teammates.get(seen, {}).get(cand, 0.0) for seen in revealed)
        scores[cand] = score
    if all(score == 0 for score in scores.values()):
        scores = {c: stats.species_usage.get(c, 0.0) for c in candidates}
        if all(score == 0 for score in scores.values()):
            scores = dict.fromkeys(candidates, 1.0)
    return _pick(scores, mode, rng)


def finalize(partial: PartialTeam, stats: FormatStats, data: GenData,
             mode: str = "argmax", seed: Optional[int] = None,
             set_library: Optional[SetLibrary] = None,
             merge_weight: float = 0.5) -> list[PokemonSpec]:
    """Return a full team of specs: revealed attributes verbatim, the rest
    filled from the statistics. Deterministic given inputs and mode."""
    if mode not in ("argmax", "sample"):
        raise ValueError(f"unknown finalize mode {mode!r}")
    rng = random.Random(seed)
    team: list[PokemonSpec] = []
    known = list(partial.slots.values())
    for slot in known:
        team.append(_finalize_slot(slot, stats, data, mode, rng,
                                   set_library, merge_weight))
    revealed_ids = [s.species for s in known]
    while len(team) < partial.team_size:
        species = _fill_species(revealed_ids, stats, mode, rng)
        if species is None:
            break
        revealed_ids.append(species)
        ghost = SlotKnowledge(species=species,
                              nickname=_display_name(species, data),
                              level=100, first_seen=-1)
        team.append(_finalize_slot(ghost, stats, data, mode, rng,
                                   set_library, merge_weight))
    return team


def _display_name(species: str, data: GenData) -> str:
    if species in data.species:
        return data.species[species].name
    return species


def _finalize_slot(slot: SlotKnowledge, stats: FormatStats, data: GenData,
                   mode: str, rng, set_library, merge_weight) -> PokemonSpec:
    moves = _fill_moves(list(slot.moves), slot.species, stats, data, mode, rng,
                        set_library, merge_weight)
    item = slot.item[0] if slot.item else None
    ability = slot.ability[0] if slot.ability else None
    if data.config.items and item is None:
        table = stats.item_table(slot.species)
        if table:
            picked = _pick(table, mode, rng)
            item = None if picked in (None, "nothing") else picked
    if item == "nothing":
        item = None
    if data.config.abilities and ability is None:
        table = stats.ability_table(slot.species)
        if table:
            ability = _pick(table, mode, rng)
        if ability is None and slot.species in data.species:
            defaults = data.species[slot.species].abilities
            ability = defaults[0] if defaults else None
    types = data.species[slot.species].types if slot.species in data.species else ()
    return PokemonSpec(species=slot.species, name=slot.nickname, level=slot.level,
                       types=types, moves=moves, item=item, ability=ability)
