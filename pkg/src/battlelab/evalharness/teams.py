"""Team sets: the variety generator, the competitive text loader, and
replay-derived sets.

The variety generator deals species without replacement from the shuffled
tier pool (reshuffling when exhausted), which spreads species evenly
across teams, and samples movesets from usage statistics through a
diversity temperature. The team text format is documented in
``docs/teams.md`` and round-trips bit-exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..engine import GenData, PokemonSpec, get_gen_for_format, tier_pool, to_id
from ..inference import UsageStats


class IllegalTeam(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class TeamSet:
    kind: str  # variety | competitive | replay
    format_id: str
    teams: list[list[PokemonSpec]]
    seed: Optional[int] = None
    names: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.teams)

    def pair(self, seed: int) -> tuple[list[PokemonSpec], list[PokemonSpec]]:
        """Deterministic pick of two teams (distinct indices when possible)."""
        rnd = random.Random(f"teampair:{seed}")
        i = rnd.randrange(len(self.teams))
        j = rnd.randrange(len(self.teams))
        if len(self.teams) > 1 and j == i:
            j = (j + 1) % len(self.teams)
        return self.teams[i], self.teams[j]


def validate_team(team: list[PokemonSpec], format_id: str) -> list[str]:
    """Slot-level legality diagnostics; empty list means legal."""
    data = get_gen_for_format(format_id)
    pool = set(tier_pool(format_id))
    problems = []
    if not 1 <= len(team) <= 6:
        problems.append(f"team size {len(team)} out of range")
    seen = set()
    for i, spec in enumerate(team):
        where = f"slot {i + 1} ({spec.species})"
        if spec.species not in data.species:
            problems.append(f"{where}: unknown species")
            continue
        if spec.species not in pool:
            problems.append(f"{where}: not legal in {format_id}")
        if spec.species in seen:
            problems.append(f"{where}: duplicate species")
        seen.add(spec.species)
        if not 1 <= len(spec.moves) <= 4:
            problems.append(f"{where}: {len(spec.moves)} moves")
        if len(set(spec.moves)) != len(spec.moves):
            problems.append(f"{where}: duplicate moves")
        for mid in spec.moves:
            if mid not in data.moves:
                problems.append(f"{where}: unknown move {mid!r}")
        if not 1 <= spec.level <= 100:
            problems.append(f"{where}: level {spec.level}")
        if spec.item is not None and not data.config.items:
            problems.append(f"{where}: items not allowed in this generation")
        if spec.ability is not None and not data.config.abilities:
            problems.append(f"{where}: abilities not allowed in this generation")
    return problems


def _temperature_sample(rnd: random.Random, table: dict[str, float],
                        k: int, temperature: float) -> list[str]:
    weights = {key: f ** (1.0 / temperature)
               for key, f in table.items() if f > 0}
    picks = []
    while weights and len(picks) < k:
        total = sum(weights.values())
        roll = rnd.random() * total
        acc = 0.0
        chosen = None
        for key in sorted(weights):
            acc += weights[key]
            if roll < acc:
                chosen = key
                break
        if chosen is None:
            chosen = sorted(weights)[-1]
        picks.append(chosen)
        del weights[chosen]
    return picks


def generate_variety_teams(format_id: str, n: int, seed: int,
                           stats: Optional[UsageStats] = None,
                           temperature: float = 2.0,
                           concentration_cap: Optional[int] = None) -> TeamSet:
    """Procedurally generate ``n`` legal, intentionally diverse teams.

    Deterministic per seed. Species are dealt without replacement across
    the pool until it is exhausted, so no species' team count may exceed
    the concentration cap (default: 1.5x the even share, rounded up).
    """
    pool = sorted(tier_pool(format_id))
    if len(pool) < 6:
        raise ValueError(f"{format_id}: species pool smaller than a team")
    data = get_gen_for_format(format_id)
    stats = stats or UsageStats.bundled()
    fmt_stats = stats.for_format(format_id)
    rnd = random.Random(f"variety:{format_id}:{seed}")
    cap = concentration_cap
    if cap is None:
        cap = math.ceil(1.5 * 6 * n / len(pool))
    bag: list[str] = []
    counts: dict[str, int] = dict.fromkeys(pool, 0)
    teams = []
    for _ in range(n):
        chosen: list[str] = []
        stalled = 0
        while len(chosen) < 6:
            if not bag:
                bag = [s for s in pool if counts[s] < cap] or list(pool)
                rnd.shuffle(bag)
            species = bag.pop()
            if species in chosen or counts[species] >= cap:
                bag.insert(0, species)
                stalled += 1
                if stalled > len(bag):
                    bag = [s for s in pool if s not in chosen and counts[s] < cap]
                    rnd.shuffle(bag)
                    stalled = 0
                continue
            stalled = 0
            chosen.append(species)
            counts[species] += 1
        team = [_build_spec(sid, fmt_stats, data, rnd, temperature)
                for sid in chosen]
        problems = validate_team(team, format_id)
        if problems:
            raise IllegalTeam(problems)
        teams.append(team)
    return TeamSet(kind="variety", format_id=format_id, teams=teams, seed=seed)


def _build_spec(species_id: str, fmt_stats, data: GenData, rnd: random.Random,
                temperature: float) -> PokemonSpec:
    species = data.get_species(species_id)
    table = fmt_stats.move_table(species_id) or fmt_stats.format_wide_moves()
    table = {m: f for m, f in table.items() if m in data.moves}
    moves = _temperature_sample(rnd, table, 4, temperature)
    item = None
    if data.config.items:
        items = fmt_stats.item_table(species_id)
        if items:
            pick = _temperature_sample(rnd, items, 1, temperature)
            item = pick[0] if pick else None
            if item == "nothing":
                item = None
    ability = None
    if data.config.abilities:
        abilities = fmt_stats.ability_table(species_id)
        if abilities:
            pick = _temperature_sample(rnd, abilities, 1, temperature)
            ability = pick[0] if pick else None
        if ability is None and species.abilities:
            ability = species.abilities[0]
    return PokemonSpec(species=species_id, name=species.name, level=100,
                       types=species.types, moves=moves, item=item,
                       ability=ability)


def replay_teamset(teams_with_ratings, format_id: str,
                   rating_floor: int = 1500) -> TeamSet:
    """Teams harvested from reconstructed replays of sufficiently rated
    players; pass (team, rating) pairs (rating None is skipped)."""
    teams = [team for team, rating in teams_with_ratings
             if rating is not None and rating >= rating_floor
             and not validate_team(team, format_id)]
    return TeamSet(kind="replay", format_id=format_id, teams=teams)


# ------------------------------------------------------------- text format

def export_teams(team_set: TeamSet) -> str:
    """Canonical text export; ``load_competitive_teams`` inverts it."""
    blocks = []
    for i, team in enumerate(team_set.teams):
        name = team_set.names[i] if i < len(team_set.names) else f"Team {i + 1}"
        lines = [f"=== [{team_set.format_id}] {name} ==="]
        for spec in team:
            data = get_gen_for_format(team_set.format_id)
            head = data.species[spec.species].name if spec.species in data.species \
                else spec.species
            if spec.item:
                head += f" @ {_display(spec.item)}"
            lines.append("")
            lines.append(head)
            if spec.ability:
                lines.append(f"Ability: {_display(spec.ability)}")
            if spec.level != 100:
                lines.append(f"Level: {spec.level}")
            for mid in spec.moves:
                data_move = data.moves.get(mid)
                lines.append(f"- {data_move.name if data_move else mid}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _display(identifier: str) -> str:
    known = {"leftovers": "Leftovers", "lumberry": "Lum Berry",
             "miracleberry": "Miracle Berry"}
    return known.get(identifier, identifier.title())


def load_competitive_teams(path_or_text, format_id: Optional[str] = None) -> TeamSet:
    """Parse teams from the documented text format and validate legality.

    Raises :class:`IllegalTeam` with slot-level diagnostics on failure.
    """
    if isinstance(path_or_text, (str, Path)) and "\n" not in str(path_or_text):
        text = Path(path_or_text).read_text(encoding="utf-8")
    else:
        text = str(path_or_text)
    teams: list[list[PokemonSpec]] = []
    names: list[str] = []
    fmt = format_id
    current: list[PokemonSpec] = []
    block: list[str] = []

    def flush_block():
        nonlocal block
        if block:
            current.append(_parse_entry(block, fmt))
            block = []

    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("===") and stripped.endswith("==="):
            flush_block()
            if current:
                teams.append(current)
                current = []
            header = stripped.strip("= ").strip()
            if header.startswith("["):
                fmt_part, _, name_part = header[1:].partition("]")
                if format_id is not None and fmt_part != format_id:
                    raise IllegalTeam([f"team format {fmt_part!r} does not match "
                                       f"{format_id!r}"])
                fmt = fmt_part
                names.append(name_part.strip())
            else:
                names.append(header)
            continue
        if stripped == "":
            flush_block()
            continue
        block.append(stripped)
    flush_block()
    if current:
        teams.append(current)
    if fmt is None:
        raise IllegalTeam(["no format: pass format_id or use a === [format] "
                           "Name === header"])
    problems = []
    for i, team in enumerate(teams):
        problems.extend(f"team {i + 1}: {p}" for p in validate_team(team, fmt))
    if problems:
        raise IllegalTeam(problems)
    return TeamSet(kind="competitive", format_id=fmt, teams=teams, names=names)


def _parse_entry(lines: list[str], format_id: Optional[str]) -> PokemonSpec:
    head = lines[0]
    species_name, _, item_name = head.partition("@")
    species_id = to_id(species_name)
    item = to_id(item_name) if item_name.strip() else None
    level = 100
    ability = None
    moves = []
    for line in lines[1:]:
        if line.startswith("- "):
            moves.append(to_id(line[2:]))
        elif line.startswith("Ability:"):
            ability = to_id(line.split(":", 1)[1])
        elif line.startswith("Level:"):
            level = int(line.split(":", 1)[1].strip())
    types = ()
    name = species_name.strip()
    if format_id is not None:
        data = get_gen_for_format(format_id)
        if species_id in data.species:
            types = data.species[species_id].types
            name = data.species[species_id].name
    return PokemonSpec(species=species_id, name=name, level=level, types=types,
                       moves=moves, item=item, ability=ability)
