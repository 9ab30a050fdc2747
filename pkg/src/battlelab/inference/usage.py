"""Usage-statistics prior: the frequency tables that complete hidden teams.

File schema (JSON, versioned):

    {"schema_version": 1, "version": "...", "formats": {
        "gen1ou": {
            "species_usage": {"tauros": 0.06, ...},
            "teammates": {"tauros": {"chansey": 0.7, ...}, ...},
            "species": {"tauros": {"moves": {...}, "items": {...},
                         "abilities": {...}}, ...}}}}

Every frequency table is nonnegative and sums to at most 1 (sparse tails
are allowed); the loader validates both. A bundled synthetic table covers
the shipped tier pools.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

_SUM_TOLERANCE = 1e-6


class StatsError(ValueError):
    pass


class EmptyStats(StatsError):
    """No usable statistics for the requested format."""


def _check_table(table: dict, where: str) -> None:
    total = 0.0
    for key, freq in table.items():
        if not isinstance(freq, (int, float)) or freq < 0:
            raise StatsError(f"{where}: bad frequency for {key!r}: {freq!r}")
        total += freq
    if total > 1 + _SUM_TOLERANCE:
        raise StatsError(f"{where}: frequencies sum to {total:.4f} > 1")


class FormatStats:
    """Frequency tables for one format."""

    def __init__(self, format_id: str, raw: dict):
        self.format_id = format_id
        self.species_usage: dict[str, float] = dict(raw.get("species_usage", {}))
        self.teammates: dict[str, dict[str, float]] = {
            k: dict(v) for k, v in raw.get("teammates", {}).items()}
        self.species: dict[str, dict] = raw.get("species", {})
        _check_table(self.species_usage, f"{format_id}.species_usage")
        for sid, mates in self.teammates.items():
            for t, f in mates.items():
                if f < 0:
                    raise StatsError(f"{format_id}.teammates[{sid}][{t}] < 0")
        for sid, tables in self.species.items():
            for cat in ("moves", "items", "abilities"):
                if cat in tables:
                    _check_table(tables[cat], f"{format_id}.{sid}.{cat}")
        if not self.species_usage and not self.species:
            raise EmptyStats(f"no statistics for {format_id}")

    def move_table(self, species: str) -> Optional[dict[str, float]]:
        tables = self.species.get(species)
        if tables and tables.get("moves"):
            return tables["moves"]
        return None

    def item_table(self, species: str) -> Optional[dict[str, float]]:
        tables = self.species.get(species)
        return tables.get("items") if tables else None

    def ability_table(self, species: str) -> Optional[dict[str, float]]:
        tables = self.species.get(species)
        return tables.get("abilities") if tables else None

    def format_wide_moves(self) -> dict[str, float]:
        """Usage-weighted move frequencies pooled over every species.

        Fallback prior for species with no per-species table.
        """
        pooled: dict[str, float] = {}
        for sid, tables in self.species.items():
            weight = self.species_usage.get(sid, 0.01)
            for move, freq in tables.get("moves", {}).items():
                pooled[move] = pooled.get(move, 0.0) + weight * freq
        total = sum(pooled.values())
        if total > 0:
            pooled = {m: f / total for m, f in pooled.items()}
        return pooled


class UsageStats:
    """All formats from one statistics file."""

    def __init__(self, doc: dict):
        if doc.get("schema_version") != 1:
            raise StatsError(f"unsupported stats schema {doc.get('schema_version')!r}")
        self.version = doc.get("version", "unversioned")
        self._formats = doc.get("formats", {})
        if not self._formats:
            raise EmptyStats("statistics file lists no formats")
        self._cache: dict[str, FormatStats] = {}

    @classmethod
    def load(cls, path) -> "UsageStats":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def bundled(cls) -> "UsageStats":
        return _bundled()

    def formats(self) -> list[str]:
        return sorted(self._formats)

    def for_format(self, format_id: str) -> FormatStats:
        if format_id not in self._cache:
            raw = self._formats.get(format_id)
            if raw is None:
                raise EmptyStats(f"no statistics for format {format_id!r}")
            self._cache[format_id] = FormatStats(format_id, raw)
        return self._cache[format_id]


@lru_cache(maxsize=1)
def _bundled() -> UsageStats:
    text = resources.files("battlelab.gamedata").joinpath("usage_stats.json") \
        .read_text(encoding="utf-8")
    return UsageStats(json.loads(text))
